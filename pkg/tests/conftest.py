from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
sys.path.insert(0, str(TESTS_DIR))  # makes `oracles` importable

FIXTURES = TESTS_DIR / "fixtures"


@pytest.fixture(scope="session")
def paradigm_corpora() -> Path:
    return FIXTURES / "paradigms"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def semantic_csv() -> Path:
    return FIXTURES / "semantic" / "functionality.csv"


@pytest.fixture(scope="session")
def concepts_json() -> Path:
    return FIXTURES / "semantic" / "functionality_concepts.json"


def load_corpus_inputs(corpus_dir: Path) -> list[tuple[str, str, str]]:
    from codeprof.languages import default_registry

    registry = default_registry()
    inputs = []
    for path in sorted(corpus_dir.iterdir()):
        language = registry.detect_by_extension(path.name)
        if language:
            inputs.append((path.name, path.read_text("utf-8"), language))
    return inputs


@pytest.fixture(scope="session")
def corpus_inputs(corpus_dir) -> list[tuple[str, str, str]]:
    return load_corpus_inputs(corpus_dir)


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1].replace("test_", "", 1)
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {outcome}", flush=True)
