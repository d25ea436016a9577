from __future__ import annotations

import pytest

from codeprof.languages import Paradigm, UnknownLanguageError, default_registry

#: the full language table: (language, paradigm, known, supported concepts)
EXPECTED = {
    "c": (Paradigm.C_LIKE, True, {"package", "function", "comment"}),
    "java": (Paradigm.C_LIKE, True, {"package", "function", "comment"}),
    "csharp": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "cpp": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "objective_c": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "rust": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "golang": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "kotlin": (Paradigm.C_LIKE, False, {"package", "function", "comment"}),
    "python": (Paradigm.SCRIPTING_DYNAMIC, True, {"package", "function", "comment"}),
    "javascript": (Paradigm.SCRIPTING_DYNAMIC, True, {"package", "function", "comment"}),
    "dart": (Paradigm.SCRIPTING_DYNAMIC, False, {"package", "function", "comment"}),
    "typescript": (Paradigm.SCRIPTING_DYNAMIC, False, {"package", "function", "comment"}),
    "qml": (Paradigm.SCRIPTING_DYNAMIC, False, {"package", "comment"}),
    "perl": (Paradigm.SCRIPTING_DYNAMIC, False, {"package", "function"}),
    "haskell": (Paradigm.FUNCTIONAL_EXPRESSION, True, {"package", "function", "comment"}),
    "elm": (Paradigm.FUNCTIONAL_EXPRESSION, True, {"package", "function", "comment"}),
    "agda": (Paradigm.FUNCTIONAL_EXPRESSION, False, {"package", "function", "comment"}),
    "d": (Paradigm.FUNCTIONAL_EXPRESSION, False, {"package", "function", "comment"}),
    "nim": (Paradigm.FUNCTIONAL_EXPRESSION, False, {"package", "function", "comment"}),
    "scala": (Paradigm.FUNCTIONAL_EXPRESSION, False, {"package", "function", "comment"}),
    "ocaml": (Paradigm.FUNCTIONAL_EXPRESSION, False, {"package", "comment"}),
}


def test_exactly_21_languages():
    assert len(default_registry()) == 21
    assert {e.language for e in default_registry().entries()} == set(EXPECTED)


@pytest.mark.parametrize("language", sorted(EXPECTED))
def test_registry_matches_table(language):
    paradigm, known, concepts = EXPECTED[language]
    entry = default_registry().entry(language)
    assert entry.paradigm == paradigm
    assert entry.known == known
    assert entry.concepts == concepts


def test_na_cells():
    registry = default_registry()
    assert not registry.entry("qml").supports("function")
    assert not registry.entry("perl").supports("comment")
    assert not registry.entry("ocaml").supports("function")


def test_known_languages_two_per_paradigm():
    registry = default_registry()
    assert sorted(registry.known_languages(Paradigm.C_LIKE)) == ["c", "java"]
    assert sorted(registry.known_languages(Paradigm.SCRIPTING_DYNAMIC)) == [
        "javascript",
        "python",
    ]
    assert sorted(registry.known_languages(Paradigm.FUNCTIONAL_EXPRESSION)) == ["elm", "haskell"]


def test_unknown_language_raises():
    with pytest.raises(UnknownLanguageError):
        default_registry().entry("klingon")


def test_extension_detection():
    registry = default_registry()
    assert registry.detect_by_extension("foo.py") == "python"
    assert registry.detect_by_extension("foo.cc") == "cpp"
    assert registry.detect_by_extension("foo.h") == "c"
    assert registry.detect_by_extension("foo.hh") == "cpp"
    assert registry.detect_by_extension("foo.txt") is None
    assert registry.detect_by_extension("Makefile") is None
