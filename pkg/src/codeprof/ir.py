"""Normalized syntactic representation: node/edge graph per code sample.

Every downstream stage (metrics, annotation, reporting) consumes this model,
either directly or through its tabular projection (see tables.py).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

PARENT_RELATION = "parent_node"


class UbsrNodeType(str, Enum):
    """The four node kinds of the v1 schema."""

    ROOT = "ubsr_root"
    PACKAGE = "ubsr_package"
    FUNCTION = "ubsr_function"
    COMMENT = "ubsr_comment"


#: node types that carry an extracted concept (everything but the root)
CONCEPT_NODE_TYPES = (UbsrNodeType.PACKAGE, UbsrNodeType.FUNCTION, UbsrNodeType.COMMENT)

#: concept label <-> node type (labels are used for tagging and pruning)
CONCEPT_FOR_NODE_TYPE = {
    UbsrNodeType.PACKAGE: "package",
    UbsrNodeType.FUNCTION: "function",
    UbsrNodeType.COMMENT: "comment",
}
NODE_TYPE_FOR_CONCEPT = {v: k for k, v in CONCEPT_FOR_NODE_TYPE.items()}


def count_lines(text: str) -> int:
    """Number of newline-delimited lines in ``text`` ("" counts as 0).

    A trailing newline does not open an extra line: "a\\n" is one line,
    "a\\nb" is two.
    """
    if not text:
        return 0
    return text.count("\n") + (0 if text.endswith("\n") else 1)


@dataclass(frozen=True)
class NodeMetadata:
    """Per-node metadata block.

    ``loc_original_code`` must equal ``count_lines(original_code)``; documents
    violating this are rejected by :func:`validate_document`.
    """

    info: str = ""
    language: str = ""
    original_code: str = ""
    loc_original_code: int = 0


@dataclass(frozen=True)
class UbsrNode:
    id: int
    code_snippet: str
    node_type: UbsrNodeType
    parents: tuple[int, ...] = ()
    children: tuple[int, ...] = ()
    metadata: NodeMetadata = field(default_factory=NodeMetadata)


@dataclass(frozen=True, eq=True)
class UbsrEdge:
    source: int
    target: int
    directed_relation: str = PARENT_RELATION
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class UbsrDocument:
    """One code sample's node/edge graph.

    Well-formed documents have exactly one root node (id 0, no parents), an
    acyclic parent/child structure in which every node is reachable from the
    root, and an edge list that mirrors the node adjacency exactly.
    """

    nodes: tuple[UbsrNode, ...]
    edges: tuple[UbsrEdge, ...]
    source_path: str = ""

    def node_by_id(self, node_id: int) -> UbsrNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    @property
    def root(self) -> UbsrNode:
        for node in self.nodes:
            if node.node_type is UbsrNodeType.ROOT:
                return node
        raise ValueError("document has no root node")


def derive_edges(nodes: tuple[UbsrNode, ...] | list[UbsrNode]) -> tuple[UbsrEdge, ...]:
    """Parent->child edge list implied by the node adjacency, in node order."""
    edges = []
    for node in nodes:
        for child in node.children:
            edges.append(UbsrEdge(source=node.id, target=child))
    return tuple(edges)


def build_document(nodes: list[UbsrNode], source_path: str = "") -> UbsrDocument:
    """Assemble a document, deriving the edge list from the node adjacency."""
    frozen = tuple(nodes)
    return UbsrDocument(nodes=frozen, edges=derive_edges(frozen), source_path=source_path)


def validate_document(doc: UbsrDocument) -> list[str]:
    """Check every schema invariant; returns one description per violation.

    An empty list means the document is well-formed. Violations are data,
    not exceptions: callers that require validity raise on a non-empty
    result (see tables.to_tabular).
    """
    violations: list[str] = []
    by_id: dict[int, UbsrNode] = {}

    for node in doc.nodes:
        if node.id < 0:
            violations.append(f"node {node.id}: id must be non-negative")
        if node.id in by_id:
            violations.append(f"node {node.id}: duplicate id")
        else:
            by_id[node.id] = node

    roots = [n for n in doc.nodes if n.node_type is UbsrNodeType.ROOT]
    if len(roots) != 1:
        violations.append(f"document: expected exactly one root node, found {len(roots)}")
    else:
        root = roots[0]
        if root.id != 0:
            violations.append(f"node {root.id}: root node must have id 0")
        if root.parents:
            violations.append(f"node {root.id}: root node must have empty parents")

    # referential integrity and parent/child symmetry
    for node in doc.nodes:
        for pid in node.parents:
            parent = by_id.get(pid)
            if parent is None:
                violations.append(f"node {node.id}: parent {pid} does not exist")
            elif node.id not in parent.children:
                violations.append(
                    f"node {node.id}: lists parent {pid} but {pid} does not list it as child"
                )
        for cid in node.children:
            child = by_id.get(cid)
            if child is None:
                violations.append(f"node {node.id}: child {cid} does not exist")
            elif node.id not in child.parents:
                violations.append(
                    f"node {node.id}: lists child {cid} but {cid} does not list it as parent"
                )

    # acyclicity (DFS over child links, only meaningful on intact ids)
    if not violations:
        state: dict[int, int] = {}  # 0=visiting, 1=done

        def visit(nid: int, stack: list[int]) -> None:
            if state.get(nid) == 1:
                return
            if state.get(nid) == 0:
                violations.append(f"node {nid}: cycle through {stack + [nid]}")
                return
            state[nid] = 0
            for cid in by_id[nid].children:
                visit(cid, stack + [nid])
            state[nid] = 1

        for node in doc.nodes:
            if node.id not in state:
                visit(node.id, [])

    # reachability from the root
    if len(roots) == 1 and not violations:
        seen: set[int] = set()
        frontier = [roots[0].id]
        while frontier:
            nid = frontier.pop()
            if nid in seen:
                continue
            seen.add(nid)
            frontier.extend(by_id[nid].children)
        for node in doc.nodes:
            if node.id not in seen:
                violations.append(f"node {node.id}: not reachable from root")

    # line-count consistency
    for node in doc.nodes:
        meta = node.metadata
        if meta.loc_original_code < 0:
            violations.append(f"node {node.id}: loc_original_code must be >= 0")
        elif meta.loc_original_code != count_lines(meta.original_code):
            violations.append(
                f"node {node.id}: loc_original_code {meta.loc_original_code} "
                f"!= {count_lines(meta.original_code)} lines in original_code"
            )

    # edge list must mirror the adjacency exactly, one edge per pair
    expected = {(n.id, c) for n in doc.nodes for c in n.children}
    seen_pairs: set[tuple[int, int]] = set()
    for edge in doc.edges:
        pair = (edge.source, edge.target)
        if edge.directed_relation != PARENT_RELATION:
            violations.append(
                f"edge {pair}: directed_relation {edge.directed_relation!r} "
                f"is not {PARENT_RELATION!r}"
            )
        if pair in seen_pairs:
            violations.append(f"edge {pair}: duplicate edge for pair")
        seen_pairs.add(pair)
        if pair not in expected:
            violations.append(f"edge {pair}: no matching parent/child entry in node lists")
    for pair in sorted(expected - seen_pairs):
        violations.append(f"edge {pair}: parent/child entry has no matching edge")

    return violations
