"""Prompt assembly for the three offline prompt families: base syntactic rule
generation, concept-list definition, and semantic package mapping.

Rendering is deterministic so prompt hashes are stable fixture keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..languages import Registry, default_registry
from ..parsing.grammars import GrammarDirectory, default_grammars
from ..parsing.parser import parse
from ..parsing.tree import prune_concept, prune_depth, render_sexpr
from ..rules import STAGE_SPECS, RuleDatabase, default_rule_database
from ..semantic import ConceptList

DEFAULT_BATCH_SIZE = 30

SYSTEM_TAXONOMIST = "You are a taxonomist for programming language packages"
SYSTEM_PROFESSIONAL = "You are an enterprise software professional"
SYSTEM_MAPPER = (
    "You are a discriminating and conservative programming specialist, "
    "responsible for classifying programming language packages"
)
SYSTEM_RULE_WRITER = (
    "You are an expert in programming language grammars and static analysis"
)

MAPPING_SENTINEL = "<end>"

_CONCEPT_GOALS = {
    "package": (
        "The rule maps the AST node type that represents an imported package or "
        "library to the normalized node type \"ubsr_package\", and its extractor "
        "pipeline must return the package/library name(s); multiple names are "
        "joined with \", \"."
    ),
    "function": (
        "The rule maps the AST node type that represents a function definition "
        "to the normalized node type \"ubsr_function\", and its extractor "
        "pipeline must return the function name."
    ),
    "comment": (
        "The rule maps the AST node type that represents a comment to the "
        "normalized node type \"ubsr_comment\", and its extractor pipeline must "
        "return the comment text without comment markers."
    ),
}


class PromptBuildError(ValueError):
    pass


class ParadigmMismatchError(PromptBuildError):
    def __init__(self, test_language: str, exemplar: str):
        super().__init__(
            f"exemplar language {exemplar!r} is from a different syntactic paradigm "
            f"than test language {test_language!r}; pass cross_paradigm=True to override"
        )
        self.test_language = test_language
        self.exemplar = exemplar


@dataclass(frozen=True)
class PruningSpec:
    """AST pruning applied to prompt exemplars and the test input."""

    mode: str = "concept"  # "depth" | "concept" | "none"
    depth: int = 2

    def apply(self, tree, concept: str | None = None):
        if self.mode == "depth":
            return prune_depth(tree, self.depth)
        if self.mode == "concept":
            if not concept:
                raise PromptBuildError("concept pruning needs a concept")
            return prune_concept(tree, {concept})
        if self.mode == "none":
            return tree
        raise PromptBuildError(f"unknown pruning mode {self.mode!r}")


@dataclass(frozen=True)
class Exemplar:
    language: str
    code: str
    rendered_ast: str
    expected: str  # the rule block(s) shown to the model


@dataclass(frozen=True)
class PromptBundle:
    kind: str  # base_rule | concept_list | semantic_mapping
    system_instruction: str
    instruction: str
    exemplars: tuple[Exemplar, ...] = ()
    test_input: tuple = ()
    rendered: str = ""
    metadata: dict = field(default_factory=dict)


def _rule_response_block(language: str, ast_node_type: str, ubsr_node_type: str, extractor) -> str:
    payload = {
        "language": language,
        "ast_node_type": ast_node_type,
        "ubsr_node_type": ubsr_node_type,
        "extractor": [stage.to_dict() for stage in extractor],
    }
    return "```json\n" + json.dumps(payload, indent=2, sort_keys=True) + "\n```"


def _stage_vocabulary() -> str:
    lines = []
    for op in sorted(STAGE_SPECS):
        params = ", ".join(STAGE_SPECS[op])
        lines.append(f"- {op}({params})" if params else f"- {op}()")
    return "\n".join(lines)


def base_rule_instruction(concept: str) -> str:
    """Instruction text; common across syntactic paradigms for each concept."""
    return (
        "Given example programming languages with a small code snippet, its "
        "pruned AST, and the extraction rule used for that language, write the "
        "equivalent rule for the test language.\n"
        f"{_CONCEPT_GOALS[concept]}\n"
        "Think step by step: first identify which AST node type in the test "
        "input represents the concept, then derive the extractor pipeline from "
        "the code snippet text.\n"
        "The extractor is a pipeline of stages drawn only from this closed "
        "vocabulary (any other operation is rejected):\n"
        f"{_stage_vocabulary()}\n"
        "Respond with exactly one fenced ```json block of the form\n"
        '{"language": ..., "ast_node_type": ..., "ubsr_node_type": ..., '
        '"extractor": [{"op": ..., ...}, ...]}\n'
        "followed by the output of applying the rule to the test code snippet."
    )


def _exemplar_for(
    language: str,
    concept: str,
    pruning: PruningSpec,
    db: RuleDatabase,
    registry: Registry,
    grammars: GrammarDirectory,
) -> Exemplar:
    rules = db.rules_for(language, concept)
    if not rules:
        raise PromptBuildError(f"no {concept} rules available for exemplar {language!r}")
    code = "\n".join(rule.test_snippet for rule in rules)
    tree = parse(code, language, rules=db, registry=registry, grammars=grammars)
    rendered = render_sexpr(pruning.apply(tree, concept))
    blocks = "\n".join(
        _rule_response_block(language, r.ast_node_type, r.ubsr_node_type.value, r.extractor)
        + f"\nOutput when applied: {r.expected!r}"
        for r in rules
    )
    return Exemplar(language=language, code=code, rendered_ast=rendered, expected=blocks)


def build_base_rule_prompt(
    test_language: str,
    concept: str,
    exemplar_languages,
    pruning: PruningSpec | None = None,
    test_snippet: str | None = None,
    cross_paradigm: bool = False,
    db: RuleDatabase | None = None,
    registry: Registry | None = None,
    grammars: GrammarDirectory | None = None,
) -> PromptBundle:
    """Assemble the few-shot rule-generation prompt.

    Exemplars must come from the registry's known languages and, unless
    ``cross_paradigm`` is set, share the test language's paradigm.
    """
    registry = registry or default_registry()
    grammars = grammars or default_grammars()
    db = db if db is not None else default_rule_database()
    pruning = pruning or PruningSpec()

    test_entry = registry.entry(test_language)
    if concept not in _CONCEPT_GOALS:
        raise PromptBuildError(f"unknown concept {concept!r}")
    if not test_entry.supports(concept):
        raise PromptBuildError(
            f"language {test_language!r} has no {concept} concept (registry NA cell)"
        )

    if isinstance(exemplar_languages, (set, frozenset)):
        exemplar_languages = sorted(exemplar_languages)
    exemplar_languages = list(dict.fromkeys(exemplar_languages))
    if not exemplar_languages:
        raise PromptBuildError("at least one exemplar language is required")
    for exemplar in exemplar_languages:
        entry = registry.entry(exemplar)
        if not entry.known:
            raise PromptBuildError(
                f"{exemplar!r} is not a known exemplar language"
            )
        if entry.paradigm != test_entry.paradigm and not cross_paradigm:
            raise ParadigmMismatchError(test_language, exemplar)

    if test_snippet is None:
        own_rules = db.rules_for(test_language, concept)
        if not own_rules:
            raise PromptBuildError(
                f"no test snippet given and no bundled snippet for "
                f"({test_language}, {concept})"
            )
        test_snippet = "\n".join(r.test_snippet for r in own_rules)

    exemplars = tuple(
        _exemplar_for(lang, concept, pruning, db, registry, grammars)
        for lang in exemplar_languages
    )
    test_tree = parse(test_snippet, test_language, rules=db, registry=registry, grammars=grammars)
    test_rendered = render_sexpr(pruning.apply(test_tree, concept))

    instruction = base_rule_instruction(concept)
    sections = [f"System: {SYSTEM_RULE_WRITER}", "", "## Instructions", instruction, ""]
    pruning_label = (
        f"depth-{pruning.depth} pruned" if pruning.mode == "depth"
        else "concept-pruned" if pruning.mode == "concept" else "unpruned"
    )
    for i, ex in enumerate(exemplars, start=1):
        sections += [
            f"## Example {i} (language: {ex.language})",
            "Code:",
            "```",
            ex.code,
            "```",
            f"AST ({pruning_label}):",
            "```",
            ex.rendered_ast,
            "```",
            "Rule:",
            ex.expected,
            "",
        ]
    sections += [
        f"## Test input (language: {test_language})",
        "Code:",
        "```",
        test_snippet,
        "```",
        f"AST ({pruning_label}):",
        "```",
        test_rendered,
        "```",
        f"Write the {concept} rule for language \"{test_language}\".",
    ]
    rendered = "\n".join(sections)
    return PromptBundle(
        kind="base_rule",
        system_instruction=SYSTEM_RULE_WRITER,
        instruction=instruction,
        exemplars=exemplars,
        test_input=(test_language, test_snippet, test_rendered),
        rendered=rendered,
        metadata={"concept": concept, "pruning": pruning.mode},
    )


def build_concept_list_prompt(
    dimension: str,
    mandatory_concepts: list[str] | tuple[str, ...] = (),
    previous_list: list[str] | tuple[str, ...] | None = None,
    system_instruction: str = SYSTEM_TAXONOMIST,
) -> PromptBundle:
    """Concept-list definition prompt; pass ``previous_list`` for the
    follow-up round that asks for missing concepts."""
    if previous_list is None:
        task = (
            "Your task is to provide a comprehensive, non-overlapping, and flat "
            f"list of software library concepts based on {dimension}"
        )
        sections = [f"System: {system_instruction}", "", "## Task", task]
        if mandatory_concepts:
            sections += [
                "",
                "## Context",
                "The following concepts are mandatory and must be included in the list:",
            ]
            sections += [f"- {c}" for c in mandatory_concepts]
        sections += [
            "",
            "Respond with one concept per line, prefixed by \"- \".",
        ]
    else:
        task = (
            f"List all {dimension}-based concepts of software libraries which are "
            "missing in this list and have no overlap with any of the items in this list"
        )
        sections = [f"System: {system_instruction}", "", "## Task", task, "", "## List"]
        sections += [f"- {c}" for c in previous_list]
        sections += ["", "Respond with one missing concept per line, prefixed by \"- \"."]
    rendered = "\n".join(sections)
    return PromptBundle(
        kind="concept_list",
        system_instruction=system_instruction,
        instruction=task,
        rendered=rendered,
        metadata={"dimension": dimension},
    )


def _mapping_table(rows: list[tuple[str, ...]], header: tuple[str, ...]) -> str:
    lines = [" | ".join(header)]
    lines += [" | ".join(row) for row in rows]
    return "\n".join(lines)


def build_semantic_mapping_prompts(
    packages: list[tuple[str, str]],
    concept_list: ConceptList,
    few_shots: list[tuple[str, str, str]] | None = None,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> list[PromptBundle]:
    """One prompt per batch of at most ``batch_size`` packages, preserving
    input order; empty input yields no prompts."""
    if not concept_list.concepts:
        raise PromptBuildError("concept list is empty")
    if batch_size < 1:
        raise PromptBuildError("batch_size must be >= 1")
    few_shots = few_shots or []

    task = (
        "Your task is to categorize the following packages in the given "
        f"programming languages based on their {concept_list.dimension}."
    )
    context = (
        "Choose the concepts from the following list: "
        + ", ".join(concept_list.concepts)
        + ". Given the package name and language in tabular format, add a "
        '"Concept" column and output the updated tabular data. Do not include '
        "concepts outside of this provided list. If you are absolutely not able "
        'to categorize a package, categorize it as "Others". '
        f"Add {MAPPING_SENTINEL} at the end of your response."
    )

    bundles = []
    for start in range(0, len(packages), batch_size):
        batch = packages[start : start + batch_size]
        sections = [f"System: {SYSTEM_MAPPER}", "", "## Task", task, "", "## Context", context]
        if few_shots:
            sections += [
                "",
                "## Examples",
                _mapping_table(
                    [tuple(fs) for fs in few_shots], ("Package", "Language", "Concept")
                ),
            ]
        sections += [
            "",
            "## Packages",
            _mapping_table([tuple(b) for b in batch], ("Package", "Language")),
        ]
        rendered = "\n".join(sections)
        bundles.append(
            PromptBundle(
                kind="semantic_mapping",
                system_instruction=SYSTEM_MAPPER,
                instruction=task,
                test_input=tuple(batch),
                rendered=rendered,
                metadata={
                    "dimension": concept_list.dimension,
                    "batch_index": start // batch_size,
                },
            )
        )
    return bundles
