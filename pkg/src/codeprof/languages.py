"""Language registry: the 21 supported languages, their paradigm grouping,
exemplar ("known") flags, and per-language concept support.

The registry ships as a versioned data file so deployments can extend it
without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

BASE_CONCEPTS = ("package", "function", "comment")


class Paradigm(str, Enum):
    C_LIKE = "c_like"
    SCRIPTING_DYNAMIC = "scripting_dynamic"
    FUNCTIONAL_EXPRESSION = "functional_expression"


class UnknownLanguageError(KeyError):
    def __init__(self, language: str):
        super().__init__(f"language {language!r} is not registered")
        self.language = language


@dataclass(frozen=True)
class LanguageEntry:
    language: str
    paradigm: Paradigm
    known: bool
    concepts: frozenset[str]
    extensions: tuple[str, ...]

    def supports(self, concept: str) -> bool:
        return concept in self.concepts


class Registry:
    """Immutable language registry keyed by canonical lowercase name."""

    def __init__(self, entries: list[LanguageEntry], version: int = 1):
        self.version = version
        self._entries = {e.language: e for e in entries}
        self._by_extension: dict[str, str] = {}
        for entry in entries:
            for ext in entry.extensions:
                self._by_extension.setdefault(ext, entry.language)

    def __contains__(self, language: str) -> bool:
        return language in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> list[LanguageEntry]:
        return list(self._entries.values())

    def entry(self, language: str) -> LanguageEntry:
        try:
            return self._entries[language]
        except KeyError:
            raise UnknownLanguageError(language) from None

    def paradigm(self, language: str) -> Paradigm:
        return self.entry(language).paradigm

    def known_languages(self, paradigm: Paradigm | None = None) -> list[str]:
        return [
            e.language
            for e in self._entries.values()
            if e.known and (paradigm is None or e.paradigm == paradigm)
        ]

    def detect_by_extension(self, filename: str) -> str | None:
        """Map a file name to a registered language via its suffix."""
        dot = filename.rfind(".")
        if dot < 0:
            return None
        return self._by_extension.get(filename[dot:].lower())


def load_registry(path: str | None = None) -> Registry:
    """Load the registry from a data file (defaults to the bundled one)."""
    if path is None:
        raw = resources.files("codeprof.data").joinpath("registry.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    payload = json.loads(raw)
    entries = []
    for item in payload["languages"]:
        concepts = frozenset(item["concepts"])
        unknown = concepts - set(BASE_CONCEPTS)
        if unknown:
            raise ValueError(f"registry entry {item['language']}: unknown concepts {unknown}")
        entries.append(
            LanguageEntry(
                language=item["language"],
                paradigm=Paradigm(item["paradigm"]),
                known=bool(item["known"]),
                concepts=concepts,
                extensions=tuple(item.get("extensions", ())),
            )
        )
    return Registry(entries, version=int(payload.get("version", 1)))


@lru_cache(maxsize=1)
def default_registry() -> Registry:
    return load_registry()
