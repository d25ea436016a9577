"""Base syntactic rule database: grammar node type -> normalized node type,
plus the declarative extractor pipeline that pulls the concept value
(package name, function name, comment text) out of a matched node's source.

Extractors are a closed, declarative stage vocabulary rather than embedded
script strings: deterministic, safe to store in data files, and portable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .ir import CONCEPT_FOR_NODE_TYPE, UbsrNodeType

#: op name -> required parameter names, in canonical order
STAGE_SPECS: dict[str, tuple[str, ...]] = {
    "split_once": ("separator", "take_index"),
    "split_all": ("separator",),
    "token_at": ("separator", "index"),
    "segment_at": ("separator", "index"),
    "trim": (),
    "strip_prefix": ("text",),
    "regex_capture": ("pattern", "group"),
    "dedup": (),
    "join": ("separator",),
}

#: stages that consume a list (everything else is scalar->scalar and is
#: lifted element-wise over list values)
_LIST_IN = {"dedup", "join"}
_LIST_OUT = {"split_all", "dedup"}


class RuleError(ValueError):
    """Malformed rule, stage, or rule file."""


class UnknownStageError(RuleError):
    def __init__(self, op: str):
        super().__init__(f"unknown extractor stage op {op!r}")
        self.op = op


class ExtractionError(RuntimeError):
    """A stage could not be applied to the value it received."""

    def __init__(self, stage_index: int, message: str):
        super().__init__(f"stage {stage_index}: {message}")
        self.stage_index = stage_index


@dataclass(frozen=True)
class Stage:
    op: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, op: str, **params: Any) -> "Stage":
        spec = STAGE_SPECS.get(op)
        if spec is None:
            raise UnknownStageError(op)
        if set(params) != set(spec):
            raise RuleError(f"stage {op!r} takes params {spec}, got {tuple(params)}")
        return cls(op=op, params=tuple((name, params[name]) for name in spec))

    @classmethod
    def from_dict(cls, payload: dict) -> "Stage":
        data = dict(payload)
        op = data.pop("op", None)
        if not isinstance(op, str):
            raise RuleError(f"stage missing string 'op': {payload!r}")
        return cls.make(op, **data)

    def to_dict(self) -> dict:
        return {"op": self.op, **dict(self.params)}

    def param(self, name: str) -> Any:
        return dict(self.params)[name]


def stages(*specs: dict) -> tuple[Stage, ...]:
    """Build a stage pipeline from plain dicts (convenience for rule authors)."""
    return tuple(Stage.from_dict(s) for s in specs)


def _apply_scalar(stage: Stage, value: str, idx: int) -> Any:
    op = stage.op
    p = dict(stage.params)
    if op == "split_once":
        parts = value.split(p["separator"], 1)
        take = p["take_index"]
        if not -len(parts) <= take < len(parts):
            raise ExtractionError(
                idx, f"split_once index {take} out of range for {len(parts)} part(s)"
            )
        return parts[take]
    if op == "split_all":
        return value.split(p["separator"])
    if op == "token_at":
        tokens = [t for t in value.split(p["separator"]) if t]
        index = p["index"]
        if not -len(tokens) <= index < len(tokens):
            raise ExtractionError(
                idx, f"token_at index {index} out of range for {len(tokens)} token(s)"
            )
        return tokens[index]
    if op == "segment_at":
        segments = value.split(p["separator"])
        index = p["index"]
        if not -len(segments) <= index < len(segments):
            raise ExtractionError(
                idx, f"segment_at index {index} out of range for {len(segments)} segment(s)"
            )
        return segments[index]
    if op == "trim":
        return value.strip()
    if op == "strip_prefix":
        text = p["text"]
        return value[len(text):] if value.startswith(text) else value
    if op == "regex_capture":
        match = re.search(p["pattern"], value)
        if match is None:
            raise ExtractionError(idx, f"pattern {p['pattern']!r} did not match")
        group = match.group(p["group"])
        if group is None:
            raise ExtractionError(idx, f"group {p['group']} did not participate in match")
        return group
    raise UnknownStageError(op)


def run_extractor(program: tuple[Stage, ...], code_snippet: str) -> str:
    """Evaluate the stage pipeline on a source span; returns the concept value.

    Values flow as a scalar or a flat list of strings. Scalar stages lift
    element-wise over lists; list stages require a list. The final value must
    be a scalar. Any inapplicable stage raises :class:`ExtractionError`
    carrying the stage index.
    """
    value: Any = code_snippet
    for idx, stage in enumerate(program):
        is_list = isinstance(value, list)
        if stage.op in _LIST_IN:
            if not is_list:
                raise ExtractionError(idx, f"{stage.op} requires a list value")
            if stage.op == "dedup":
                value = list(dict.fromkeys(value))
            else:  # join
                value = stage.param("separator").join(value)
        elif is_list:
            if stage.op in _LIST_OUT:
                raise ExtractionError(idx, f"{stage.op} cannot be applied to a list")
            value = [_apply_scalar(stage, item, idx) for item in value]
        else:
            value = _apply_scalar(stage, value, idx)
    if isinstance(value, list):
        raise ExtractionError(len(program), "program ended with a list; final value must be scalar")
    return value


# ---------------------------------------------------------------------------
# rules and the database
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SyntacticRule:
    """Maps one grammar node type of one language to a normalized node type."""

    language: str
    ast_node_type: str
    ubsr_node_type: UbsrNodeType
    extractor: tuple[Stage, ...]
    test_snippet: str = ""
    expected: str = ""

    def __post_init__(self) -> None:
        if self.ubsr_node_type is UbsrNodeType.ROOT:
            raise RuleError("rules cannot target the root node type")

    @property
    def concept(self) -> str:
        return CONCEPT_FOR_NODE_TYPE[self.ubsr_node_type]


@dataclass
class RuleDatabase:
    """Rules indexed by (language, ast_node_type), plus a version stamp.

    Treated as immutable during extraction; offline commits write a new
    version through :mod:`codeprof.offline.commit`.
    """

    rules: dict[tuple[str, str], SyntacticRule] = field(default_factory=dict)
    version: int = 0

    def lookup(self, language: str, ast_node_type: str) -> SyntacticRule | None:
        return self.rules.get((language, ast_node_type))

    def add(self, rule: SyntacticRule) -> None:
        key = (rule.language, rule.ast_node_type)
        if key in self.rules:
            raise RuleError(f"duplicate rule for {key}")
        self.rules[key] = rule

    def languages(self) -> list[str]:
        return sorted({language for language, _ in self.rules})

    def rules_for(self, language: str, concept: str | None = None) -> list[SyntacticRule]:
        out = [r for (lang, _), r in sorted(self.rules.items()) if lang == language]
        if concept is not None:
            out = [r for r in out if r.concept == concept]
        return out

    def concept_tag_map(self, language: str) -> dict[str, str]:
        """ast node type -> concept label, for parse-time tagging."""
        return {
            ast_node_type: rule.concept
            for (lang, ast_node_type), rule in self.rules.items()
            if lang == language
        }

    def copy(self) -> "RuleDatabase":
        return RuleDatabase(rules=dict(self.rules), version=self.version)


def _rule_to_payload(rule: SyntacticRule) -> dict:
    return {
        "ubsr_node_type": rule.ubsr_node_type.value,
        "extractor": [stage.to_dict() for stage in rule.extractor],
        "test_snippet": rule.test_snippet,
        "expected": rule.expected,
    }


def _rule_from_payload(language: str, ast_node_type: str, payload: dict) -> SyntacticRule:
    try:
        node_type = UbsrNodeType(payload["ubsr_node_type"])
        extractor = tuple(Stage.from_dict(s) for s in payload["extractor"])
    except KeyError as err:
        raise RuleError(f"rule {language}/{ast_node_type}: missing field {err}") from None
    return SyntacticRule(
        language=language,
        ast_node_type=ast_node_type,
        ubsr_node_type=node_type,
        extractor=extractor,
        test_snippet=payload.get("test_snippet", ""),
        expected=payload.get("expected", ""),
    )


VERSION_FILENAME = "version"


def language_file_text(db: RuleDatabase, language: str) -> str:
    """Canonical byte-stable serialization of one language's rule file."""
    payload = {
        rule.ast_node_type: _rule_to_payload(rule) for rule in db.rules_for(language)
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_rules(db: RuleDatabase, path: str | Path) -> None:
    """Write the database as one JSON file per language plus a version stamp."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    for language in db.languages():
        (root / f"{language}.json").write_text(language_file_text(db, language), "utf-8")
    (root / VERSION_FILENAME).write_text(f"{db.version}\n", "utf-8")


def _pairs_rejecting_duplicates(pairs: list[tuple[str, Any]]) -> dict:
    out: dict = {}
    for key, value in pairs:
        if key in out:
            raise RuleError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _load_language_file(path: Path, language: str, db: RuleDatabase) -> None:
    try:
        payload = json.loads(
            path.read_text("utf-8"), object_pairs_hook=_pairs_rejecting_duplicates
        )
    except json.JSONDecodeError as err:
        raise RuleError(f"{path}: malformed JSON ({err})") from None
    except RuleError as err:
        raise RuleError(f"{path}: {err}") from None
    if not isinstance(payload, dict):
        raise RuleError(f"{path}: top level must be a map of ast node types")
    for ast_node_type, rule_payload in payload.items():
        rule = _rule_from_payload(language, ast_node_type, rule_payload)
        db.add(rule)


def load_rules(path: str | Path) -> RuleDatabase:
    """Load a rule database from a directory of per-language files, or from
    a single ``<language>.json`` file."""
    path = Path(path)
    db = RuleDatabase()
    if path.is_dir():
        for file in sorted(path.glob("*.json")):
            _load_language_file(file, file.stem, db)
        version_file = path / VERSION_FILENAME
        db.version = int(version_file.read_text().strip()) if version_file.exists() else 0
    elif path.is_file():
        _load_language_file(path, path.stem, db)
    else:
        raise FileNotFoundError(f"rules path {path} does not exist")
    return db


def default_rules_dir() -> Path:
    from importlib import resources

    return Path(str(resources.files("codeprof.data").joinpath("rules")))


_default_db: RuleDatabase | None = None


def default_rule_database() -> RuleDatabase:
    """The bundled rule database covering all 21 registered languages."""
    global _default_db
    if _default_db is None:
        _default_db = load_rules(default_rules_dir())
    return _default_db
