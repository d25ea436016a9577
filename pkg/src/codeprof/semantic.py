"""Semantic annotation: map extracted package names to concepts per dimension.

The rule set is a (package, language) -> {dimension: concept} table persisted
as CSV, indexed by a per-language character trie. Lookups are exact-match;
packages without a rule are recorded as pending for the next offline round.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from .ir import UbsrNodeType

OTHERS = "Others"
PENDING_HEADER = ["package", "language"]


class DimensionError(KeyError):
    def __init__(self, dimension: str, known: tuple[str, ...]):
        super().__init__(f"unknown dimension {dimension!r}; rule set has {known}")
        self.dimension = dimension


@dataclass(frozen=True)
class ConceptList:
    """The allowed concept names of one dimension; "Others" is the implicit
    fallback and must not appear in the list."""

    dimension: str
    concepts: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.concepts)) != len(self.concepts):
            raise ValueError(f"dimension {self.dimension!r}: duplicate concept names")
        if OTHERS in self.concepts:
            raise ValueError(f"{OTHERS!r} is the implicit fallback; leave it out of the list")

    def __contains__(self, concept: str) -> bool:
        return concept in self.concepts


@dataclass(frozen=True)
class SemanticRule:
    package_name: str
    language: str
    concepts: dict  # dimension -> concept name


def normalize_package(name: str) -> str:
    return name.strip().lower()


class _TrieNode:
    __slots__ = ("children", "value")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.value: dict | None = None


class _Trie:
    def __init__(self):
        self.root = _TrieNode()

    def insert(self, key: str, value: dict) -> None:
        node = self.root
        for ch in key:
            node = node.children.setdefault(ch, _TrieNode())
        node.value = value

    def get(self, key: str) -> dict | None:
        node = self.root
        for ch in key:
            node = node.children.get(ch)
            if node is None:
                return None
        return node.value

    def items_with_prefix(self, prefix: str) -> list[tuple[str, dict]]:
        node = self.root
        for ch in prefix:
            node = node.children.get(ch)
            if node is None:
                return []
        out: list[tuple[str, dict]] = []

        def walk(n: _TrieNode, acc: str) -> None:
            if n.value is not None:
                out.append((acc, n.value))
            for ch in sorted(n.children):
                walk(n.children[ch], acc + ch)

        walk(node, prefix)
        return out


class SemanticRuleSet:
    """Rules plus a per-language prefix index; lookup is exact-match."""

    def __init__(self, rules: list[SemanticRule], dimensions: tuple[str, ...]):
        self.dimensions = tuple(dimensions)
        self._rules: dict[tuple[str, str], SemanticRule] = {}
        self._tries: dict[str, _Trie] = {}
        for rule in rules:
            key = (normalize_package(rule.package_name), rule.language)
            if key in self._rules:
                raise ValueError(f"duplicate semantic rule for {key}")
            normalized = SemanticRule(
                package_name=key[0], language=rule.language, concepts=dict(rule.concepts)
            )
            self._rules[key] = normalized
            self._tries.setdefault(rule.language, _Trie()).insert(key[0], normalized.concepts)

    def __len__(self) -> int:
        return len(self._rules)

    def rules(self) -> list[SemanticRule]:
        return [self._rules[key] for key in sorted(self._rules)]

    def _check_dimension(self, dimension: str) -> None:
        if dimension not in self.dimensions:
            raise DimensionError(dimension, self.dimensions)

    def lookup(self, package: str, language: str, dimension: str) -> str | None:
        """Concept for (package, language) under ``dimension``; None when the
        package has no rule (an unknown package)."""
        self._check_dimension(dimension)
        trie = self._tries.get(language)
        if trie is None:
            return None
        concepts = trie.get(normalize_package(package))
        if concepts is None:
            return None
        return concepts.get(dimension)

    def lookup_linear(self, package: str, language: str, dimension: str) -> str | None:
        """Reference lookup by linear scan; must agree with lookup()."""
        self._check_dimension(dimension)
        key = (normalize_package(package), language)
        for (pkg, lang), rule in self._rules.items():
            if (pkg, lang) == key:
                return rule.concepts.get(dimension)
        return None

    def packages_with_prefix(self, language: str, prefix: str) -> list[str]:
        trie = self._tries.get(language)
        if trie is None:
            return []
        return [name for name, _ in trie.items_with_prefix(normalize_package(prefix))]


# ---------------------------------------------------------------------------
# persistence: CSV with header package,language,concept_<dimension>[,...]
# ---------------------------------------------------------------------------


def _dimension_columns(dimensions: tuple[str, ...]) -> list[str]:
    return [f"concept_{d}" for d in dimensions]


def ruleset_to_csv_text(rs: SemanticRuleSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["package", "language", *_dimension_columns(rs.dimensions)])
    for rule in rs.rules():
        writer.writerow(
            [rule.package_name, rule.language]
            + [rule.concepts.get(d, "") for d in rs.dimensions]
        )
    return buf.getvalue()


def save_ruleset(rs: SemanticRuleSet, path: str | Path) -> None:
    Path(path).write_text(ruleset_to_csv_text(rs), "utf-8")


def load_ruleset(path: str | Path) -> SemanticRuleSet:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["package", "language"]:
            raise ValueError(f"{path}: expected header package,language,concept_<dimension>...")
        dimensions = []
        for col in header[2:]:
            if not col.startswith("concept_"):
                raise ValueError(f"{path}: bad concept column {col!r}")
            dimensions.append(col[len("concept_"):])
        rules = []
        for row in reader:
            if not row:
                continue
            concepts = {
                d: row[2 + i] for i, d in enumerate(dimensions) if 2 + i < len(row) and row[2 + i]
            }
            rules.append(SemanticRule(package_name=row[0], language=row[1], concepts=concepts))
    return SemanticRuleSet(rules, tuple(dimensions))


def save_pending(pending: list[tuple[str, str]], path: str | Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PENDING_HEADER)
    writer.writerows(pending)
    Path(path).write_text(buf.getvalue(), "utf-8")


def load_pending(path: str | Path) -> list[tuple[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PENDING_HEADER:
            raise ValueError(f"{path}: expected header {','.join(PENDING_HEADER)}")
        return [(row[0], row[1]) for row in reader if row]


# ---------------------------------------------------------------------------
# annotation
# ---------------------------------------------------------------------------


@dataclass
class AnnotationResult:
    table: pd.DataFrame
    pending: list[tuple[str, str]] = field(default_factory=list)

    def __iter__(self):
        return iter((self.table, self.pending))


def _package_values(code_snippet: str) -> list[str]:
    # concept value follows the node type name; multi-package extractions are
    # comma-space joined by the extractor contract
    value = code_snippet.split(" ", 1)[1] if " " in code_snippet else ""
    return [normalize_package(part) for part in value.split(", ") if part.strip()]


def annotate(
    node_table: pd.DataFrame, rs: SemanticRuleSet, dimension: str
) -> AnnotationResult:
    """Add a ``concept_<dimension>`` column carrying, per document, the list
    of concepts of its packages; unknown packages land in the pending list.

    Idempotent for a fixed rule set; pending pairs are deduplicated and never
    include packages that have rules.
    """
    rs._check_dimension(dimension)
    concepts_by_doc: dict[str, list[str]] = {}
    pending: list[tuple[str, str]] = []
    seen_pending: set[tuple[str, str]] = set()

    package_rows = node_table[node_table["node_type"] == UbsrNodeType.PACKAGE.value]
    for row in package_rows.itertuples(index=False):
        doc_concepts = concepts_by_doc.setdefault(str(row.doc_id), [])
        for package in _package_values(str(row.code_snippet)):
            concept = rs.lookup(package, str(row.language), dimension)
            if concept is None:
                key = (package, str(row.language))
                if key not in seen_pending:
                    seen_pending.add(key)
                    pending.append(key)
            else:
                doc_concepts.append(concept)

    column = f"concept_{dimension}"
    annotated = node_table.copy()
    annotated[column] = [
        concepts_by_doc.get(str(doc_id), []) for doc_id in annotated["doc_id"]
    ]
    return AnnotationResult(table=annotated, pending=pending)
