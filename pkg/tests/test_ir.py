from __future__ import annotations

from hypothesis import given

from codeprof.ir import (
    NodeMetadata,
    UbsrDocument,
    UbsrEdge,
    UbsrNode,
    UbsrNodeType,
    build_document,
    count_lines,
    derive_edges,
    validate_document,
)
from strategies import documents


def root_node(**overrides) -> UbsrNode:
    fields = dict(
        id=0,
        code_snippet="ubsr_root python",
        node_type=UbsrNodeType.ROOT,
        parents=(),
        children=(),
        metadata=NodeMetadata(language="python"),
    )
    fields.update(overrides)
    return UbsrNode(**fields)


def test_count_lines():
    assert count_lines("") == 0
    assert count_lines("a") == 1
    assert count_lines("a\n") == 1
    assert count_lines("a\nb") == 2
    assert count_lines("a\nb\n") == 2
    assert count_lines("\n") == 1


def test_minimal_document_is_valid():
    doc = UbsrDocument(nodes=(root_node(),), edges=(), source_path="x.py")
    assert validate_document(doc) == []


def test_symmetry_violation_is_reported():
    nodes = (
        root_node(children=(1,)),
        UbsrNode(
            id=1,
            code_snippet="ubsr_package math",
            node_type=UbsrNodeType.PACKAGE,
            parents=(),  # missing back-reference
            metadata=NodeMetadata(original_code="import math", loc_original_code=1),
        ),
    )
    doc = UbsrDocument(nodes=nodes, edges=(UbsrEdge(0, 1),))
    violations = validate_document(doc)
    assert any("does not list it as parent" in v for v in violations)


def test_duplicate_id_is_reported():
    doc = UbsrDocument(nodes=(root_node(), root_node()), edges=())
    violations = validate_document(doc)
    assert any("duplicate id" in v for v in violations)
    assert any("exactly one root" in v for v in violations)


def test_dangling_reference_reported():
    doc = UbsrDocument(nodes=(root_node(children=(9,)),), edges=(UbsrEdge(0, 9),))
    assert any("child 9 does not exist" in v for v in validate_document(doc))


def test_cycle_reported():
    a = UbsrNode(
        id=1,
        code_snippet="ubsr_package a",
        node_type=UbsrNodeType.PACKAGE,
        parents=(0, 2),
        children=(2,),
    )
    b = UbsrNode(
        id=2,
        code_snippet="ubsr_package b",
        node_type=UbsrNodeType.PACKAGE,
        parents=(1,),
        children=(1,),
    )
    doc = build_document([root_node(children=(1,)), a, b])
    assert any("cycle" in v for v in validate_document(doc))


def test_unreachable_node_reported():
    lone = UbsrNode(
        id=5, code_snippet="ubsr_comment x", node_type=UbsrNodeType.COMMENT, parents=(5,)
    )
    # self-parenting also breaks symmetry; use two nodes pointing at each other
    a = UbsrNode(
        id=1,
        code_snippet="ubsr_package a",
        node_type=UbsrNodeType.PACKAGE,
        parents=(2,),
        children=(2,),
    )
    b = UbsrNode(
        id=2,
        code_snippet="ubsr_package b",
        node_type=UbsrNodeType.PACKAGE,
        parents=(1,),
        children=(1,),
    )
    doc = build_document([root_node(), a, b])
    violations = validate_document(doc)
    assert violations  # cycle or unreachable, depending on traversal
    del lone


def test_loc_mismatch_reported():
    bad = UbsrNode(
        id=1,
        code_snippet="ubsr_comment x",
        node_type=UbsrNodeType.COMMENT,
        parents=(0,),
        metadata=NodeMetadata(original_code="a\nb", loc_original_code=1),
    )
    doc = build_document([root_node(children=(1,)), bad])
    assert any("loc_original_code" in v for v in validate_document(doc))


def test_edge_relation_and_mirroring_checked():
    child = UbsrNode(
        id=1, code_snippet="ubsr_package m", node_type=UbsrNodeType.PACKAGE, parents=(0,)
    )
    nodes = (root_node(children=(1,)), child)
    doc = UbsrDocument(nodes=nodes, edges=(UbsrEdge(0, 1, directed_relation="calls"),))
    assert any("directed_relation" in v for v in validate_document(doc))
    doc = UbsrDocument(nodes=nodes, edges=())
    assert any("has no matching edge" in v for v in validate_document(doc))
    doc = UbsrDocument(nodes=nodes, edges=(UbsrEdge(0, 1), UbsrEdge(0, 1)))
    assert any("duplicate edge" in v for v in validate_document(doc))


@given(documents())
def test_generated_documents_are_valid(doc):
    assert validate_document(doc) == []


@given(documents())
def test_derived_edges_mirror_adjacency(doc):
    pairs = {(e.source, e.target) for e in derive_edges(doc.nodes)}
    assert pairs == {(n.id, c) for n in doc.nodes for c in n.children}
