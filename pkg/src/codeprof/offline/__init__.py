"""Offline, completer-aided rule synthesis: prompts, parsing, validation,
and gated commits."""

from .commit import CommitError, StaleVersionError, commit_rule, commit_semantic_rows
from .completer import (
    CompleterError,
    GenerationLimits,
    HttpCompleter,
    StubCompleter,
    completer_from_spec,
    prompt_key,
)
from .prompts import (
    DEFAULT_BATCH_SIZE,
    Exemplar,
    ParadigmMismatchError,
    PromptBuildError,
    PromptBundle,
    PruningSpec,
    build_base_rule_prompt,
    build_concept_list_prompt,
    build_semantic_mapping_prompts,
)
from .responses import (
    CaseResult,
    MappingParse,
    ResponseParseError,
    TruncatedResponseError,
    ValidationReport,
    parse_base_rule_response,
    parse_semantic_mapping_response,
    validate_candidate,
)

__all__ = [
    "CaseResult",
    "CommitError",
    "CompleterError",
    "DEFAULT_BATCH_SIZE",
    "Exemplar",
    "GenerationLimits",
    "HttpCompleter",
    "MappingParse",
    "ParadigmMismatchError",
    "PromptBuildError",
    "PromptBundle",
    "PruningSpec",
    "ResponseParseError",
    "StaleVersionError",
    "StubCompleter",
    "TruncatedResponseError",
    "ValidationReport",
    "build_base_rule_prompt",
    "build_concept_list_prompt",
    "build_semantic_mapping_prompts",
    "commit_rule",
    "commit_semantic_rows",
    "completer_from_spec",
    "parse_base_rule_response",
    "parse_semantic_mapping_response",
    "prompt_key",
    "validate_candidate",
]
