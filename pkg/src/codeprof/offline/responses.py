"""Parsing and validation of completer responses."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from ..ir import UbsrNodeType
from ..rules import ExtractionError, RuleError, Stage, SyntacticRule, run_extractor
from ..semantic import OTHERS, ConceptList
from .prompts import MAPPING_SENTINEL

log = logging.getLogger(__name__)

_FENCE = re.compile(r"```(?:json)?\s*\n(.*?)```", re.DOTALL)


class ResponseParseError(ValueError):
    pass


class TruncatedResponseError(ResponseParseError):
    pass


def parse_base_rule_response(text: str) -> SyntacticRule:
    """Extract the candidate rule from the response's fenced JSON block.

    The block must be a flat object with language, ast_node_type,
    ubsr_node_type and extractor; unknown extractor stage ops are rejected
    by name.
    """
    match = _FENCE.search(text)
    if not match:
        raise ResponseParseError("response contains no fenced rule block")
    try:
        payload = json.loads(match.group(1))
    except json.JSONDecodeError as err:
        raise ResponseParseError(f"fenced block is not valid JSON: {err}") from None
    if not isinstance(payload, dict):
        raise ResponseParseError("fenced block must hold a JSON object")
    missing = {"language", "ast_node_type", "ubsr_node_type", "extractor"} - set(payload)
    if missing:
        raise ResponseParseError(f"rule object missing fields {sorted(missing)}")
    try:
        node_type = UbsrNodeType(payload["ubsr_node_type"])
    except ValueError:
        raise ResponseParseError(
            f"unknown ubsr_node_type {payload['ubsr_node_type']!r}"
        ) from None
    if not isinstance(payload["extractor"], list):
        raise ResponseParseError("extractor must be a list of stages")
    try:
        extractor = tuple(Stage.from_dict(stage) for stage in payload["extractor"])
        return SyntacticRule(
            language=str(payload["language"]),
            ast_node_type=str(payload["ast_node_type"]),
            ubsr_node_type=node_type,
            extractor=extractor,
        )
    except RuleError as err:
        raise ResponseParseError(str(err)) from None


@dataclass(frozen=True)
class CaseResult:
    snippet: str
    expected: str
    actual: str | None
    error: str | None

    @property
    def matched(self) -> bool:
        return self.error is None and self.actual == self.expected


@dataclass(frozen=True)
class ValidationReport:
    rule: SyntacticRule
    cases: tuple[CaseResult, ...]
    verdict: str  # "accept" | "reject"
    reasons: tuple[str, ...]

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


def validate_candidate(
    rule: SyntacticRule, test_cases: list[tuple[str, str]]
) -> ValidationReport:
    """Apply the candidate's extractor to every test case; accept only on
    exact output match across all of them."""
    cases = []
    reasons = []
    for snippet, expected in test_cases:
        try:
            actual = run_extractor(rule.extractor, snippet)
            error = None
        except ExtractionError as err:
            actual = None
            error = str(err)
        case = CaseResult(snippet=snippet, expected=expected, actual=actual, error=error)
        cases.append(case)
        if case.error is not None:
            reasons.append(f"extractor failed on {snippet!r}: {case.error}")
        elif not case.matched:
            reasons.append(f"output mismatch on {snippet!r}: got {actual!r}, want {expected!r}")
    if not test_cases:
        reasons.append("no test cases supplied")
    verdict = "accept" if not reasons else "reject"
    return ValidationReport(rule=rule, cases=tuple(cases), verdict=verdict, reasons=tuple(reasons))


@dataclass
class MappingParse:
    rows: list[tuple[str, str, str]] = field(default_factory=list)
    coerced: list[tuple[str, str, str]] = field(default_factory=list)  # original concept kept
    row_errors: list[str] = field(default_factory=list)


def parse_semantic_mapping_response(text: str, concept_list: ConceptList) -> MappingParse:
    """Parse (package, language, concept) rows up to the <end> sentinel.

    A missing sentinel means the generation was truncated and the whole
    response is rejected; rows after the sentinel are ignored; rows with a
    concept outside the list are coerced to "Others" with a warning; malformed
    rows produce row-level errors and parsing continues.
    """
    if MAPPING_SENTINEL not in text:
        raise TruncatedResponseError(
            f"response is missing the {MAPPING_SENTINEL} sentinel (truncated generation?)"
        )
    body = text.split(MAPPING_SENTINEL, 1)[0]
    result = MappingParse()
    for raw_line in body.splitlines():
        line = raw_line.strip().strip("|").strip()
        if not line or set(line) <= {"-", "|", " ", ":"}:
            continue  # blank or markdown separator row
        cells = [cell.strip() for cell in line.split("|")]
        if len(cells) < 3:
            if cells and cells[0].lower() not in ("package",):
                result.row_errors.append(f"malformed row: {raw_line!r}")
            continue
        package, language, concept = cells[0], cells[1], cells[2]
        if package.lower() == "package" and language.lower() == "language":
            continue  # header row
        if concept != OTHERS and concept not in concept_list:
            log.warning(
                "concept %r for package %r is outside the %s list; coerced to %r",
                concept, package, concept_list.dimension, OTHERS,
            )
            result.coerced.append((package, language, concept))
            concept = OTHERS
        result.rows.append((package, language, concept))
    return result
