"""Concrete syntax trees produced by the grammar-bundle parser, plus the two
pruning strategies and the s-expression rendering used in prompts.

Trees are immutable; pruning returns new trees sharing unpruned nodes.
Spans are byte offsets into the UTF-8 encoding of the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TreeNode:
    node_type: str
    byte_span: tuple[int, int]
    children: tuple["TreeNode", ...] = ()
    concept_tags: frozenset[str] = field(default_factory=frozenset)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class ParseTree:
    language: str
    root: TreeNode
    source_bytes: bytes = b""

    @property
    def text(self) -> str:
        return self.source_bytes.decode("utf-8", errors="replace")

    def snippet(self, node: TreeNode) -> str:
        start, end = node.byte_span
        return self.source_bytes[start:end].decode("utf-8", errors="replace")

    def size(self) -> int:
        return sum(1 for _ in self.root.walk())

    def height(self) -> int:
        def depth(node: TreeNode) -> int:
            return 1 + max((depth(c) for c in node.children), default=0)

        return depth(self.root)


def prune_depth(tree: ParseTree, max_depth: int) -> ParseTree:
    """Keep exactly the nodes at depth <= max_depth (root is depth 0).

    max_depth = 1 keeps the root and its direct children; spans are
    unchanged, so pruned nodes' source is still reachable via the parent.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    def cut(node: TreeNode, depth: int) -> TreeNode:
        if depth >= max_depth:
            return TreeNode(node.node_type, node.byte_span, (), node.concept_tags)
        return TreeNode(
            node.node_type,
            node.byte_span,
            tuple(cut(c, depth + 1) for c in node.children),
            node.concept_tags,
        )

    return ParseTree(tree.language, cut(tree.root, 0), tree.source_bytes)


def prune_concept(tree: ParseTree, concepts: set[str] | frozenset[str]) -> ParseTree:
    """Keep nodes tagged with any of ``concepts``, their ancestors, and the root.

    Relative order of surviving nodes is preserved.
    """
    if not concepts:
        raise ValueError("concepts must be non-empty")
    wanted = frozenset(concepts)

    def keep(node: TreeNode) -> TreeNode | None:
        kept_children = tuple(c for c in (keep(child) for child in node.children) if c)
        if kept_children or (node.concept_tags & wanted):
            return TreeNode(node.node_type, node.byte_span, kept_children, node.concept_tags)
        return None

    kept_root = keep(tree.root)
    if kept_root is None:
        kept_root = TreeNode(tree.root.node_type, tree.root.byte_span, (), tree.root.concept_tags)
    return ParseTree(tree.language, kept_root, tree.source_bytes)


def render_sexpr(tree: ParseTree) -> str:
    """Deterministic parenthesized rendering of node types.

    One "(type" token per node, so whitespace token count equals node count.
    """

    def render(node: TreeNode) -> str:
        if not node.children:
            return f"({node.node_type})"
        inner = " ".join(render(c) for c in node.children)
        return f"({node.node_type} {inner})"

    return render(tree.root)


def token_count(rendered: str) -> int:
    """Whitespace-delimited token count of a rendering (tokenizer-neutral)."""
    return len(rendered.split())
