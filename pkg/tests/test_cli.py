from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest
from click.testing import CliRunner

from codeprof.cli import main
from codeprof.offline import (
    PruningSpec,
    StubCompleter,
    build_base_rule_prompt,
    build_semantic_mapping_prompts,
)
from codeprof.rules import default_rules_dir, load_rules
from codeprof.semantic import ConceptList, load_pending, load_ruleset


@pytest.fixture
def runner():
    return CliRunner()


def artifact_bytes(out_dir: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


class TestProfile:
    def test_bundled_corpus(self, runner, corpus_dir, semantic_csv, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["profile", str(corpus_dir), "--out", str(out),
             "--semantic-db", str(semantic_csv)],
        )
        assert result.exit_code == 0, result.output
        for name in ("nodes.parquet", "edges.parquet", "metrics.parquet", "pending.csv"):
            assert (out / name).exists(), name
        pending = load_pending(out / "pending.csv")
        assert ("./ui_helpers", "typescript") in pending

    def test_empty_input_dir(self, runner, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        out = tmp_path / "out"
        result = runner.invoke(main, ["profile", str(empty), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "nodes.parquet").exists()

    def test_missing_rules_dir_named_in_error(self, runner, corpus_dir, tmp_path):
        result = runner.invoke(
            main,
            ["profile", str(corpus_dir), "--out", str(tmp_path / "o"),
             "--rules", str(tmp_path / "no_such_rules")],
        )
        assert result.exit_code != 0
        assert "no_such_rules" in result.output

    def test_profile_twice_is_byte_identical(self, runner, corpus_dir, semantic_csv, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            result = runner.invoke(
                main,
                ["profile", str(corpus_dir), "--out", str(out),
                 "--semantic-db", str(semantic_csv)],
            )
            assert result.exit_code == 0, result.output
            outs.append(artifact_bytes(out))
        assert outs[0] == outs[1]

    def test_jsonl_format(self, runner, corpus_dir, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["profile", str(corpus_dir), "--out", str(out), "--format", "jsonl"]
        )
        assert result.exit_code == 0, result.output
        assert (out / "nodes.jsonl").exists()


class TestReport:
    @pytest.fixture
    def tables(self, runner, corpus_dir, semantic_csv, tmp_path):
        out = tmp_path / "tables"
        result = runner.invoke(
            main,
            ["profile", str(corpus_dir), "--out", str(out),
             "--semantic-db", str(semantic_csv)],
        )
        assert result.exit_code == 0, result.output
        return out

    def test_report_language_keys_match_corpus(self, runner, tables, corpus_inputs, tmp_path):
        report_path = tmp_path / "report.json"
        result = runner.invoke(main, ["report", str(tables), "--out", str(report_path)])
        assert result.exit_code == 0, result.output
        payload = json.loads(report_path.read_text())
        assert set(payload["language_distribution"]) == {lang for _, _, lang in corpus_inputs}
        assert payload["totals"]["files"] == len(corpus_inputs)

    def test_regeneration_is_byte_identical(self, runner, tables, tmp_path):
        paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
        for path in paths:
            result = runner.invoke(main, ["report", str(tables), "--out", str(path)])
            assert result.exit_code == 0, result.output
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_missing_tables_rejected(self, runner, tmp_path):
        empty = tmp_path / "nope"
        empty.mkdir()
        result = runner.invoke(main, ["report", str(empty), "--out", str(tmp_path / "r.json")])
        assert result.exit_code != 0


class TestRulegen:
    def test_dry_run_prints_deterministic_prompt(self, runner):
        args = [
            "rulegen", "--test-language", "scala", "--concept", "package",
            "--exemplar", "haskell", "--exemplar", "elm", "--dry-run",
        ]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == 0, first.output
        assert first.output == second.output
        assert "## Test input (language: scala)" in first.output

    def test_stub_end_to_end_commit(self, runner, tmp_path):
        rules_dir = tmp_path / "rules"
        shutil.copytree(default_rules_dir(), rules_dir)
        stub_dir = tmp_path / "stub"
        test_snippet = "import given scala.math"
        db = load_rules(rules_dir)
        bundle = build_base_rule_prompt(
            "scala", "package", ["haskell", "elm"],
            PruningSpec(mode="concept"), test_snippet=test_snippet, db=db,
        )
        response = (
            "```json\n"
            + json.dumps(
                {
                    "language": "scala",
                    "ast_node_type": "import_given",
                    "ubsr_node_type": "ubsr_package",
                    "extractor": [
                        {"op": "regex_capture", "pattern": "given\\s+([\\w.]+)", "group": 1}
                    ],
                }
            )
            + "\n```\n"
        )
        StubCompleter(stub_dir).record(bundle.rendered, response)
        result = runner.invoke(
            main,
            [
                "rulegen", "--test-language", "scala", "--concept", "package",
                "--exemplar", "haskell", "--exemplar", "elm",
                "--pruning", "concept", "--test-snippet", test_snippet,
                "--expected", "scala.math",
                "--completer", f"stub:{stub_dir}", "--rules", str(rules_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        assert load_rules(rules_dir).lookup("scala", "import_given") is not None

    def test_validation_reject_exits_nonzero_and_commits_nothing(self, runner, tmp_path):
        rules_dir = tmp_path / "rules"
        shutil.copytree(default_rules_dir(), rules_dir)
        stub_dir = tmp_path / "stub"
        test_snippet = "import given scala.math"
        db = load_rules(rules_dir)
        bundle = build_base_rule_prompt(
            "scala", "package", ["haskell"],
            PruningSpec(mode="concept"), test_snippet=test_snippet, db=db,
        )
        response = (
            "```json\n"
            + json.dumps(
                {
                    "language": "scala",
                    "ast_node_type": "import_given",
                    "ubsr_node_type": "ubsr_package",
                    "extractor": [{"op": "trim"}],  # returns the whole snippet
                }
            )
            + "\n```\n"
        )
        StubCompleter(stub_dir).record(bundle.rendered, response)
        before = (rules_dir / "scala.json").read_bytes()
        result = runner.invoke(
            main,
            [
                "rulegen", "--test-language", "scala", "--concept", "package",
                "--exemplar", "haskell", "--pruning", "concept",
                "--test-snippet", test_snippet, "--expected", "scala.math",
                "--completer", f"stub:{stub_dir}", "--rules", str(rules_dir),
            ],
        )
        assert result.exit_code != 0
        assert (rules_dir / "scala.json").read_bytes() == before

    def test_paradigm_mismatch_fails(self, runner):
        result = runner.invoke(
            main,
            ["rulegen", "--test-language", "cpp", "--concept", "package",
             "--exemplar", "python", "--dry-run"],
        )
        assert result.exit_code != 0
        assert "paradigm" in result.output


class TestSemmap:
    def test_stub_end_to_end_61_packages(self, runner, tmp_path, concepts_json):
        pending_path = tmp_path / "pending.csv"
        packages = [(f"pkg{i:03d}", "python") for i in range(61)]
        pending_path.write_text(
            "package,language\n" + "\n".join(f"{p},{lang}" for p, lang in packages) + "\n"
        )
        concept_list = ConceptList(
            "Functionality",
            tuple(json.loads(concepts_json.read_text())["concepts"]),
        )
        stub = StubCompleter(tmp_path / "stub")
        bundles = build_semantic_mapping_prompts(packages, concept_list)
        for bundle in bundles:
            rows = "\n".join(
                f"{pkg} | {lang} | Mathematics" for pkg, lang in bundle.test_input
            )
            stub.record(bundle.rendered, rows + "\n<end>\n")
        db_path = tmp_path / "semantic.csv"
        result = runner.invoke(
            main,
            [
                "semmap", "--pending", str(pending_path),
                "--concepts", str(concepts_json), "--semantic-db", str(db_path),
                "--completer", f"stub:{tmp_path / 'stub'}",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "committed 61 semantic row(s)" in result.output
        rs = load_ruleset(db_path)
        assert len(rs) == 61
        assert rs.lookup("pkg060", "python", "Functionality") == "Mathematics"

    def test_dry_run_prints_prompts(self, runner, tmp_path, concepts_json):
        pending_path = tmp_path / "pending.csv"
        pending_path.write_text("package,language\nfoo,python\n")
        result = runner.invoke(
            main,
            ["semmap", "--pending", str(pending_path), "--concepts", str(concepts_json),
             "--semantic-db", str(tmp_path / "db.csv"), "--dry-run"],
        )
        assert result.exit_code == 0, result.output
        assert "Add <end> at the end of your response." in result.output
