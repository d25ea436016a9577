"""parse(): source text -> language-specific concrete syntax tree.

The parser is grammar-bundle driven and error-tolerant: malformed input
produces ERROR-typed nodes rather than exceptions. Nodes whose grammar node
type has a rule in the active rule database are tagged with the rule's
concept, which keeps concept-level pruning consistent with extraction.
"""

from __future__ import annotations

from ..languages import Registry, default_registry
from ..rules import RuleDatabase, default_rule_database
from .grammars import GrammarBundle, GrammarDirectory, default_grammars
from .lexer import scan
from .matchers import RawNode, find_functions, find_imports
from .tree import ParseTree, TreeNode


class _Draft:
    __slots__ = ("raw", "children")

    def __init__(self, raw: RawNode):
        self.raw = raw
        self.children: list[_Draft] = []


def _contains(outer: RawNode, inner: RawNode) -> bool:
    if outer.start <= inner.start and inner.end <= outer.end:
        if (outer.start, outer.end) == (inner.start, inner.end):
            return outer.hint < inner.hint
        return True
    return False


def _assemble(root_raw: RawNode, raw_nodes: list[RawNode], tag_map: dict[str, str]) -> TreeNode:
    """Nest raw nodes by span containment; partial overlaps are dropped."""
    ordered = sorted(raw_nodes, key=lambda r: (r.start, -r.end, r.hint))
    root = _Draft(root_raw)
    stack = [root]
    for raw in ordered:
        while len(stack) > 1 and not _contains(stack[-1].raw, raw):
            stack.pop()
        top = stack[-1]
        if not _contains(top.raw, raw):
            continue  # overlaps the current scope boundary: drop
        if top.children and top.children[-1].raw.end > raw.start and not _contains(
            top.children[-1].raw, raw
        ):
            continue
        draft = _Draft(raw)
        top.children.append(draft)
        stack.append(draft)

    def freeze(draft: _Draft) -> TreeNode:
        children = tuple(freeze(c) for c in draft.children)
        concept = tag_map.get(draft.raw.node_type)
        return TreeNode(
            node_type=draft.raw.node_type,
            byte_span=(draft.raw.start, draft.raw.end),
            children=children,
            concept_tags=frozenset((concept,)) if concept else frozenset(),
        )

    return freeze(root)


def parse(
    code: str,
    language: str,
    rules: RuleDatabase | None = None,
    registry: Registry | None = None,
    grammars: GrammarDirectory | None = None,
) -> ParseTree:
    """Parse ``code`` into a deterministic concrete syntax tree.

    Raises UnknownLanguageError for unregistered languages and
    FileNotFoundError when no grammar bundle backs the language.
    """
    registry = registry or default_registry()
    registry.entry(language)  # raises UnknownLanguageError
    grammars = grammars or default_grammars()
    grammar = grammars.load(language)
    rules = rules if rules is not None else default_rule_database()
    tag_map = rules.concept_tag_map(language)
    return _parse_with_grammar(code, grammar, tag_map)


def _parse_with_grammar(
    code: str, grammar: GrammarBundle, tag_map: dict[str, str]
) -> ParseTree:
    source = code.encode("utf-8")
    lex = scan(source, grammar)

    raw_nodes: list[RawNode] = []
    for region in lex.regions:
        if region.kind == "line_comment":
            raw_nodes.append(
                RawNode(region.start, region.end, grammar.line_comment_node_type, hint=0)
            )
        elif region.kind == "block_comment":
            raw_nodes.append(
                RawNode(region.start, region.end, grammar.block_comment_node_type, hint=0)
            )
        elif region.kind == "error":
            raw_nodes.append(RawNode(region.start, region.end, "ERROR", hint=0))

    raw_nodes.extend(find_imports(source, lex.blanked, grammar))
    raw_nodes.extend(find_functions(source, lex.blanked, grammar))

    root_raw = RawNode(0, len(source), grammar.root_node_type, hint=-1)
    root = _assemble(root_raw, raw_nodes, tag_map)
    return ParseTree(language=grammar.language, root=root, source_bytes=source)
