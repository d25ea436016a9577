from __future__ import annotations

import random
import string

import pytest

from codeprof.extract import extract_corpus
from codeprof.semantic import (
    ConceptList,
    DimensionError,
    SemanticRule,
    SemanticRuleSet,
    annotate,
    load_pending,
    load_ruleset,
    normalize_package,
    ruleset_to_csv_text,
    save_pending,
    save_ruleset,
)

LANGS = ["python", "cpp", "scala", "golang"]
CONCEPTS = ["Mathematics", "Database", "Testing", "Others"]


def random_ruleset(rng: random.Random, size: int = 30) -> SemanticRuleSet:
    rules = []
    seen = set()
    for _ in range(size):
        name = "".join(rng.choices(string.ascii_lowercase + "-._", k=rng.randint(1, 10)))
        language = rng.choice(LANGS)
        key = (normalize_package(name), language)
        if key in seen or not key[0]:
            continue
        seen.add(key)
        rules.append(
            SemanticRule(
                package_name=name,
                language=language,
                concepts={"Functionality": rng.choice(CONCEPTS)},
            )
        )
    return SemanticRuleSet(rules, ("Functionality",))


class TestConceptList:
    def test_others_excluded(self):
        with pytest.raises(ValueError, match="Others"):
            ConceptList("Functionality", ("Mathematics", "Others"))

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            ConceptList("Functionality", ("A", "A"))


class TestLookup:
    def test_exact_match(self):
        rs = SemanticRuleSet(
            [SemanticRule("scikit-learn", "python", {"Functionality": "Machine Learning"})],
            ("Functionality",),
        )
        assert rs.lookup("scikit-learn", "python", "Functionality") == "Machine Learning"
        assert rs.lookup("SCIKIT-LEARN  ", "python", "Functionality") == "Machine Learning"

    def test_absent_package(self):
        rs = SemanticRuleSet([], ("Functionality",))
        assert rs.lookup("missing", "python", "Functionality") is None

    def test_unknown_dimension(self):
        rs = SemanticRuleSet([], ("Functionality",))
        with pytest.raises(DimensionError):
            rs.lookup("x", "python", "Frameworks")

    def test_prefix_is_not_a_match(self):
        rs = SemanticRuleSet(
            [SemanticRule("numpy", "python", {"Functionality": "Mathematics"})],
            ("Functionality",),
        )
        assert rs.lookup("num", "python", "Functionality") is None
        assert rs.lookup("numpyx", "python", "Functionality") is None

    def test_trie_equals_linear_scan_randomized(self):
        rng = random.Random(424242)
        checked = 0
        for _ in range(60):
            rs = random_ruleset(rng)
            known = [(r.package_name, r.language) for r in rs.rules()]
            for _ in range(170):
                if known and rng.random() < 0.5:
                    package, language = rng.choice(known)
                    if rng.random() < 0.3:
                        package = package[: max(1, len(package) - 1)]  # near miss
                else:
                    package = "".join(rng.choices(string.ascii_lowercase, k=rng.randint(1, 8)))
                    language = rng.choice(LANGS)
                assert rs.lookup(package, language, "Functionality") == rs.lookup_linear(
                    package, language, "Functionality"
                )
                checked += 1
        assert checked >= 10_000

    def test_prefix_listing(self):
        rs = SemanticRuleSet(
            [
                SemanticRule("numpy", "python", {"Functionality": "Mathematics"}),
                SemanticRule("numba", "python", {"Functionality": "Mathematics"}),
                SemanticRule("pandas", "python", {"Functionality": "Data Processing"}),
            ],
            ("Functionality",),
        )
        assert rs.packages_with_prefix("python", "num") == ["numba", "numpy"]


class TestAnnotate:
    def make_tables(self, code: str, language: str = "python", path: str = "a.py"):
        return extract_corpus([(path, code, language)]).node_table

    def test_unknown_package_goes_pending(self):
        table = self.make_tables("import frobnicate")
        rs = SemanticRuleSet([], ("Functionality",))
        result = annotate(table, rs, "Functionality")
        assert result.pending == [("frobnicate", "python")]
        root_row = result.table.iloc[0]
        assert root_row["concept_Functionality"] == []

    def test_known_package_mapped(self):
        table = self.make_tables("import math")
        rs = SemanticRuleSet(
            [SemanticRule("math", "python", {"Functionality": "Mathematics"})],
            ("Functionality",),
        )
        result = annotate(table, rs, "Functionality")
        assert result.table.iloc[0]["concept_Functionality"] == ["Mathematics"]
        assert result.pending == []

    def test_comma_joined_values_looked_up_individually(self):
        table = self.make_tables("import a.b, c")
        rs = SemanticRuleSet(
            [
                SemanticRule("a", "python", {"Functionality": "Database"}),
                SemanticRule("c", "python", {"Functionality": "Testing"}),
            ],
            ("Functionality",),
        )
        result = annotate(table, rs, "Functionality")
        assert result.table.iloc[0]["concept_Functionality"] == ["Database", "Testing"]

    def test_pending_deduplicated_and_disjoint_from_mapped(self):
        code = "import mystery\nimport mystery\nimport math\n"
        table = self.make_tables(code)
        rs = SemanticRuleSet(
            [SemanticRule("math", "python", {"Functionality": "Mathematics"})],
            ("Functionality",),
        )
        result = annotate(table, rs, "Functionality")
        assert result.pending == [("mystery", "python")]

    def test_idempotent(self, corpus_inputs, semantic_csv):
        table = extract_corpus(corpus_inputs).node_table
        rs = load_ruleset(semantic_csv)
        first = annotate(table, rs, "Functionality")
        second = annotate(first.table.drop(columns=["concept_Functionality"]), rs, "Functionality")
        assert first.pending == second.pending
        assert list(first.table["concept_Functionality"]) == list(
            second.table["concept_Functionality"]
        )


class TestPersistence:
    def test_csv_round_trip(self, tmp_path):
        rs = random_ruleset(random.Random(5))
        path = tmp_path / "rules.csv"
        save_ruleset(rs, path)
        loaded = load_ruleset(path)
        assert loaded.dimensions == rs.dimensions
        assert loaded.rules() == rs.rules()
        assert ruleset_to_csv_text(loaded) == ruleset_to_csv_text(rs)

    def test_header_contract(self, tmp_path):
        rs = SemanticRuleSet(
            [SemanticRule("numpy", "python", {"Functionality": "Mathematics"})],
            ("Functionality",),
        )
        path = tmp_path / "rules.csv"
        save_ruleset(rs, path)
        header = path.read_text().splitlines()[0]
        assert header == "package,language,concept_Functionality"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("name,lang\nx,y\n")
        with pytest.raises(ValueError):
            load_ruleset(path)

    def test_pending_round_trip(self, tmp_path):
        pending = [("frobnicate", "python"), ("jwt-cpp", "cpp")]
        path = tmp_path / "pending.csv"
        save_pending(pending, path)
        assert load_pending(path) == pending
