from __future__ import annotations

import random

import pytest

from codeprof.languages import UnknownLanguageError
from codeprof.parsing import (
    parse,
    prune_concept,
    prune_depth,
    render_sexpr,
    token_count,
)
from codeprof.parsing.tree import ParseTree, TreeNode

PY_SAMPLE = (
    "import math\n"
    "from os.path import join\n"
    "\n"
    "# helper\n"
    "def area(r):\n"
    "    # circle\n"
    "    return math.pi * r * r\n"
)


def types_at_depths(node: TreeNode, depth: int = 0):
    yield node.node_type, depth
    for child in node.children:
        yield from types_at_depths(child, depth + 1)


def random_tree(rng: random.Random, depth: int = 0) -> TreeNode:
    n_children = 0 if depth >= 4 else rng.randint(0, 3)
    children = tuple(random_tree(rng, depth + 1) for _ in range(n_children))
    tags = frozenset({rng.choice(["package", "function", "comment"])}) if rng.random() < 0.3 else frozenset()
    return TreeNode(
        node_type=rng.choice(["a", "b", "c", "stmt"]),
        byte_span=(0, 1),
        children=children,
        concept_tags=tags,
    )


def random_parse_tree(seed: int) -> ParseTree:
    rng = random.Random(seed)
    return ParseTree(language="synthetic", root=random_tree(rng), source_bytes=b"")


class TestParse:
    def test_python_import_has_import_statement_child(self):
        tree = parse("import math", "python")
        assert [c.node_type for c in tree.root.children] == ["import_statement"]

    def test_empty_input_root_only(self):
        tree = parse("", "python")
        assert tree.root.node_type == "module"
        assert tree.root.children == ()

    def test_cpp_include_directive(self):
        tree = parse("#include <stdio.h>", "cpp")
        assert any(n.node_type == "preproc_include" for n in tree.root.walk())

    def test_deterministic(self):
        assert parse(PY_SAMPLE, "python") == parse(PY_SAMPLE, "python")

    def test_unregistered_language(self):
        with pytest.raises(UnknownLanguageError):
            parse("x", "klingon")

    def test_spans_nest_and_children_ordered(self, paradigm_corpora):
        for path in sorted(paradigm_corpora.rglob("*")):
            if not path.is_file():
                continue
            language = {"cpp": "cpp", "ts": "typescript", "scala": "scala"}[path.suffix[1:]]
            tree = parse(path.read_text(), language)
            for node in tree.root.walk():
                starts = [c.byte_span[0] for c in node.children]
                assert starts == sorted(starts)
                for child in node.children:
                    assert node.byte_span[0] <= child.byte_span[0]
                    assert child.byte_span[1] <= node.byte_span[1]

    def test_concept_tags_follow_rules(self):
        tree = parse(PY_SAMPLE, "python")
        tagged = {n.node_type: n.concept_tags for n in tree.root.walk() if n.concept_tags}
        assert tagged["import_statement"] == frozenset({"package"})
        assert tagged["comment"] == frozenset({"comment"})
        assert tagged["function_definition"] == frozenset({"function"})

    def test_unterminated_block_comment_yields_error_node(self):
        tree = parse("/* never closed\nint x;\n", "cpp")
        assert any(n.node_type == "ERROR" for n in tree.root.walk())

    def test_comment_markers_inside_strings_ignored(self):
        tree = parse('s = "# not a comment"\n# real\n', "python")
        comments = [n for n in tree.root.walk() if n.node_type == "comment"]
        assert len(comments) == 1


class TestPruneDepth:
    def test_noop_at_full_height(self):
        tree = parse(PY_SAMPLE, "python")
        assert prune_depth(tree, tree.height()) == tree

    def test_depth_one_keeps_root_and_direct_children(self):
        tree = parse(PY_SAMPLE, "python")
        pruned = prune_depth(tree, 1)
        assert pruned.root.children
        for child in pruned.root.children:
            assert child.children == ()

    def test_python_import_fixture_level_cut(self):
        tree = parse("import math", "python")
        pruned = prune_depth(tree, 1)
        # oracle: manual level cut of the full parse
        expected = [
            (t, d) for (t, d) in types_at_depths(tree.root) if d <= 1
        ]
        assert list(types_at_depths(pruned.root)) == expected
        assert [c.node_type for c in pruned.root.children] == ["import_statement"]
        assert pruned.root.children[0].children == ()

    def test_invalid_depth(self):
        tree = parse("import math", "python")
        with pytest.raises(ValueError):
            prune_depth(tree, 0)

    @pytest.mark.parametrize("seed", range(25))
    def test_level_cut_oracle_random_trees(self, seed):
        tree = random_parse_tree(seed)
        height = tree.height()
        for k in range(1, height + 1):
            pruned = prune_depth(tree, k)
            expected = [(t, d) for (t, d) in types_at_depths(tree.root) if d <= k]
            assert list(types_at_depths(pruned.root)) == expected

    @pytest.mark.parametrize("seed", range(25))
    def test_monotone_in_depth(self, seed):
        tree = random_parse_tree(seed)
        sizes = [prune_depth(tree, k).size() for k in range(1, tree.height() + 1)]
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        assert sizes[-1] == tree.size()


class TestPruneConcept:
    def test_comment_free_file_prunes_to_root(self):
        tree = parse("x = 1\ny = 2\n", "python")
        pruned = prune_concept(tree, {"comment"})
        assert pruned.root.children == ()

    def test_package_prune_keeps_import_paths(self):
        tree = parse(PY_SAMPLE, "python")
        pruned = prune_concept(tree, {"package"})
        types = [t for t, _ in types_at_depths(pruned.root)]
        assert "import_statement" in types
        assert "import_from_statement" in types
        assert "comment" not in types
        assert "function_definition" not in types

    def test_empty_concepts_rejected(self):
        tree = parse(PY_SAMPLE, "python")
        with pytest.raises(ValueError):
            prune_concept(tree, set())

    @pytest.mark.parametrize("seed", range(25))
    def test_tagged_nodes_and_ancestors_survive(self, seed):
        tree = random_parse_tree(seed)
        concepts = {"package", "comment"}
        pruned = prune_concept(tree, concepts)

        def count_tagged(node):
            return (1 if node.concept_tags & concepts else 0) + sum(
                count_tagged(c) for c in node.children
            )

        assert count_tagged(pruned.root) == count_tagged(tree.root)
        assert pruned.size() <= tree.size()

        def only_justified(node, under_tagged=False):
            # every kept node is tagged, an ancestor of a tagged node, or root
            for child in node.children:
                assert child.concept_tags & concepts or child.children
                only_justified(child)

        only_justified(pruned.root)


def parse_sexpr(text: str):
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        assert tokens[pos] == "("
        pos += 1
        name = tokens[pos]
        pos += 1
        children = []
        while tokens[pos] == "(":
            children.append(read())
        assert tokens[pos] == ")"
        pos += 1
        return (name, children)

    return read()


def is_prefix_structure(sub, full) -> bool:
    name, children = sub
    full_name, full_children = full
    if name != full_name:
        return False
    if not children:
        return True
    if len(children) != len(full_children):
        return False
    return all(is_prefix_structure(s, f) for s, f in zip(children, full_children))


class TestRender:
    def test_single_root(self):
        assert render_sexpr(parse("", "python")) == "(module)"

    def test_import_rendering(self):
        rendered = render_sexpr(parse("import math", "python"))
        assert "import_statement" in rendered

    def test_token_count_equals_node_count(self):
        tree = parse(PY_SAMPLE, "python")
        assert token_count(render_sexpr(tree)) == tree.size()

    @pytest.mark.parametrize("seed", range(25))
    def test_depth_prune_renders_prefix_structure(self, seed):
        tree = random_parse_tree(seed)
        full = parse_sexpr(render_sexpr(tree))
        for k in range(1, tree.height() + 1):
            sub = parse_sexpr(render_sexpr(prune_depth(tree, k)))
            assert is_prefix_structure(sub, full)

    @pytest.mark.parametrize("seed", range(10))
    def test_pruned_token_count_never_exceeds_unpruned(self, seed):
        tree = random_parse_tree(seed)
        base = token_count(render_sexpr(tree))
        for k in range(1, tree.height() + 1):
            assert token_count(render_sexpr(prune_depth(tree, k))) <= base
        assert token_count(render_sexpr(prune_concept(tree, {"package"}))) <= base
