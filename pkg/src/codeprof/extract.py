"""Online extraction: parse each sample, map rule-matched grammar nodes to
normalized concept nodes, and assemble documents/tables.

Traversal recurses beneath matched nodes so nested concepts (a comment inside
a function) become children of the enclosing concept node; the stored snippet
is the matched node's full source span, collapsing its subtree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import pandas as pd

from .ir import (
    NodeMetadata,
    UbsrDocument,
    UbsrNode,
    UbsrNodeType,
    build_document,
    count_lines,
    validate_document,
)
from .languages import Registry, default_registry
from .parsing.grammars import GrammarDirectory, default_grammars
from .parsing.parser import parse
from .parsing.tree import ParseTree, TreeNode
from .rules import ExtractionError, RuleDatabase, default_rule_database, run_extractor
from .tables import to_tabular


class OnError(str, Enum):
    SKIP_FILE = "skip_file"
    FAIL_FAST = "fail_fast"


@dataclass(frozen=True)
class ExtractionOptions:
    languages: frozenset[str] | None = None  # None = no filter
    on_error: OnError = OnError.SKIP_FILE
    include_unmatched_stats: bool = False


@dataclass
class CorpusResult:
    node_table: pd.DataFrame
    edge_table: pd.DataFrame
    error_log: list[tuple[str, str]] = field(default_factory=list)
    unmatched_stats: Counter | None = None

    def __iter__(self):
        # allow tuple-style unpacking: node_table, edge_table, error_log
        return iter((self.node_table, self.edge_table, self.error_log))


class _DocBuilder:
    def __init__(self, language: str, code: str, source_path: str):
        self.nodes: list[dict] = []
        root_meta = NodeMetadata(
            info="",
            language=language,
            original_code=code,
            loc_original_code=count_lines(code),
        )
        self.nodes.append(
            {
                "id": 0,
                "code_snippet": f"{UbsrNodeType.ROOT.value} {language}",
                "node_type": UbsrNodeType.ROOT,
                "parents": [],
                "children": [],
                "metadata": root_meta,
            }
        )
        self.source_path = source_path

    def add(self, node_type: UbsrNodeType, value: str, meta: NodeMetadata, parent_id: int) -> int:
        node_id = len(self.nodes)
        self.nodes.append(
            {
                "id": node_id,
                "code_snippet": f"{node_type.value} {value}",
                "node_type": node_type,
                "parents": [parent_id],
                "children": [],
                "metadata": meta,
            }
        )
        self.nodes[parent_id]["children"].append(node_id)
        return node_id

    def build(self) -> UbsrDocument:
        frozen = [
            UbsrNode(
                id=n["id"],
                code_snippet=n["code_snippet"],
                node_type=n["node_type"],
                parents=tuple(n["parents"]),
                children=tuple(n["children"]),
                metadata=n["metadata"],
            )
            for n in self.nodes
        ]
        return build_document(frozen, source_path=self.source_path)


def extract(
    code: str,
    language: str,
    db: RuleDatabase | None = None,
    source_path: str = "",
    registry: Registry | None = None,
    grammars: GrammarDirectory | None = None,
    unmatched: Counter | None = None,
) -> UbsrDocument:
    """Extract one sample into a document: root node plus one concept node per
    rule-matched grammar node, ids assigned in pre-order starting at 0."""
    db = db if db is not None else default_rule_database()
    tree = parse(code, language, rules=db, registry=registry, grammars=grammars)
    builder = _DocBuilder(language, code, source_path)
    _traverse(tree, tree.root, db, builder, parent_id=0, unmatched=unmatched)
    return builder.build()


def _traverse(
    tree: ParseTree,
    node: TreeNode,
    db: RuleDatabase,
    builder: _DocBuilder,
    parent_id: int,
    unmatched: Counter | None,
) -> None:
    for child in node.children:
        rule = db.lookup(tree.language, child.node_type)
        next_parent = parent_id
        if rule is not None:
            span_text = tree.snippet(child)
            info = ""
            try:
                value = run_extractor(rule.extractor, span_text)
            except ExtractionError as err:
                # degrade, don't drop: keep the raw span and note the failure
                value = span_text
                info = f"extractor_error:{err.stage_index}"
            meta = NodeMetadata(
                info=info,
                language=tree.language,
                original_code=span_text,
                loc_original_code=count_lines(span_text),
            )
            next_parent = builder.add(rule.ubsr_node_type, value, meta, parent_id)
        elif unmatched is not None:
            unmatched[(tree.language, child.node_type)] += 1
        _traverse(tree, child, db, builder, next_parent, unmatched)


def extract_corpus(
    inputs: list[tuple[str, str, str]],
    db: RuleDatabase | None = None,
    options: ExtractionOptions | None = None,
    registry: Registry | None = None,
    grammars: GrammarDirectory | None = None,
) -> CorpusResult:
    """Extract (path, code, language) samples into concatenated tables.

    Files are processed independently in input order; failures are recorded
    in the error log (or raised under fail_fast).
    """
    db = db if db is not None else default_rule_database()
    options = options or ExtractionOptions()
    registry = registry or default_registry()
    grammars = grammars or default_grammars()

    unmatched: Counter | None = Counter() if options.include_unmatched_stats else None
    docs: list[UbsrDocument] = []
    errors: list[tuple[str, str]] = []
    for path, code, language in inputs:
        if options.languages is not None and language not in options.languages:
            continue
        try:
            doc = extract(
                code,
                language,
                db=db,
                source_path=path,
                registry=registry,
                grammars=grammars,
                unmatched=unmatched,
            )
            violations = validate_document(doc)
            if violations:
                raise ValueError(f"invalid document: {violations[0]}")
            docs.append(doc)
        except Exception as err:  # noqa: BLE001 - per-file isolation is the contract
            if options.on_error is OnError.FAIL_FAST:
                raise
            errors.append((path, str(err)))
    node_table, edge_table = to_tabular(docs)
    return CorpusResult(
        node_table=node_table,
        edge_table=edge_table,
        error_log=errors,
        unmatched_stats=unmatched,
    )
