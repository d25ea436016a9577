"""Gated, versioned commits into the rule databases.

Commits are optimistic single-writer: the caller supplies the version it
read; a mismatch means someone committed in between and the commit fails.
File replacement is atomic (write-new + os.replace), so a crashed commit
never leaves a half-written database.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from ..rules import (
    VERSION_FILENAME,
    RuleDatabase,
    RuleError,
    SyntacticRule,
    language_file_text,
    load_rules,
    run_extractor,
)
from ..semantic import (
    OTHERS,
    ConceptList,
    SemanticRule,
    SemanticRuleSet,
    load_ruleset,
    ruleset_to_csv_text,
)


class CommitError(RuntimeError):
    pass


class StaleVersionError(CommitError):
    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"stale version stamp: database is at {actual}, commit expected {expected}"
        )
        self.expected = expected
        self.actual = actual


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def commit_rule(db_path: str | Path, rule: SyntacticRule, expected_version: int) -> int:
    """Insert an accepted rule; returns the new database version."""
    db_path = Path(db_path)
    db = load_rules(db_path) if db_path.exists() else RuleDatabase()
    if db.version != expected_version:
        raise StaleVersionError(expected_version, db.version)
    try:
        db.add(rule)  # re-checks (language, ast_node_type) uniqueness
    except RuleError as err:
        raise CommitError(str(err)) from None
    # sanity: the committed pipeline must still run on its own snippet
    if rule.test_snippet:
        run_extractor(rule.extractor, rule.test_snippet)
    db.version += 1
    db_path.mkdir(parents=True, exist_ok=True)
    _atomic_write(db_path / f"{rule.language}.json", language_file_text(db, rule.language))
    _atomic_write(db_path / VERSION_FILENAME, f"{db.version}\n")
    return db.version


def semantic_version_path(db_path: str | Path) -> Path:
    return Path(str(db_path) + ".version")


def load_semantic_version(db_path: str | Path) -> int:
    vp = semantic_version_path(db_path)
    return int(vp.read_text().strip()) if vp.exists() else 0


def commit_semantic_rows(
    db_path: str | Path,
    rows: list[tuple[str, str, str]],
    concept_list: ConceptList,
    expected_version: int,
) -> int:
    """Merge parsed (package, language, concept) rows into the semantic CSV;
    returns the new version."""
    db_path = Path(db_path)
    dimension = concept_list.dimension
    actual_version = load_semantic_version(db_path)
    if actual_version != expected_version:
        raise StaleVersionError(expected_version, actual_version)

    if db_path.exists():
        rs = load_ruleset(db_path)
        dimensions = rs.dimensions if dimension in rs.dimensions else (*rs.dimensions, dimension)
        rules = {(r.package_name, r.language): dict(r.concepts) for r in rs.rules()}
    else:
        dimensions = (dimension,)
        rules = {}

    for package, language, concept in rows:
        if concept != OTHERS and concept not in concept_list:
            raise CommitError(
                f"concept {concept!r} for {package!r} is outside the "
                f"{dimension} concept list"
            )
        key = (package.strip().lower(), language)
        existing = rules.setdefault(key, {})
        if existing.get(dimension) is not None and existing[dimension] != concept:
            raise CommitError(
                f"package {key} already mapped to {existing[dimension]!r} "
                f"for dimension {dimension}"
            )
        existing[dimension] = concept

    merged = SemanticRuleSet(
        [
            SemanticRule(package_name=pkg, language=lang, concepts=concepts)
            for (pkg, lang), concepts in rules.items()
        ],
        tuple(dimensions),
    )
    new_version = actual_version + 1
    db_path.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(db_path, ruleset_to_csv_text(merged))
    _atomic_write(semantic_version_path(db_path), f"{new_version}\n")
    return new_version
