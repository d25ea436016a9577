"""HTTP API backing the rule studio UI.

Read endpoints serve registry data and parse previews; the generate ->
validate -> commit flow mirrors the CLI but adds accept-token gating:
/rule/validate issues a short-lived token for an accepted candidate and
/rule/commit requires it, so nothing lands in the database without a
validation verdict. Error bodies are ``{"code": ..., "message": ...}``.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import time

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .ir import UbsrNodeType
from .languages import default_registry, load_registry
from .offline.commit import CommitError, StaleVersionError, commit_rule
from .offline.completer import CompleterError, completer_from_spec
from .offline.prompts import ParadigmMismatchError, PromptBuildError, PruningSpec, build_base_rule_prompt
from .offline.responses import ResponseParseError, parse_base_rule_response, validate_candidate
from .parsing.parser import parse
from .parsing.tree import prune_concept, prune_depth, render_sexpr, token_count
from .rules import RuleError, Stage, SyntacticRule, default_rules_dir, load_rules
from .languages import UnknownLanguageError

ACCEPT_TOKEN_TTL_SECONDS = 600.0


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class PruningModel(BaseModel):
    mode: str = "none"  # none | depth | concept
    depth: int = 2
    concepts: list[str] = Field(default_factory=lambda: ["package", "function", "comment"])


class ParsePreviewRequest(BaseModel):
    code: str
    language: str
    pruning: PruningModel = Field(default_factory=PruningModel)


class GenerateRequest(BaseModel):
    test_language: str
    concept: str
    exemplars: list[str]
    pruning: PruningModel = Field(default_factory=lambda: PruningModel(mode="concept"))
    test_snippet: str | None = None
    cross_paradigm: bool = False
    dry: bool = False


class CandidateRuleModel(BaseModel):
    language: str
    ast_node_type: str
    ubsr_node_type: str
    extractor: list[dict]


class TestCaseModel(BaseModel):
    snippet: str
    expected: str


class ValidateRequest(BaseModel):
    candidate_rule: CandidateRuleModel
    test_cases: list[TestCaseModel]


class CommitRequest(BaseModel):
    candidate_rule: CandidateRuleModel
    version: int
    token: str


def _candidate_from_model(model: CandidateRuleModel) -> SyntacticRule:
    try:
        return SyntacticRule(
            language=model.language,
            ast_node_type=model.ast_node_type,
            ubsr_node_type=UbsrNodeType(model.ubsr_node_type),
            extractor=tuple(Stage.from_dict(s) for s in model.extractor),
        )
    except (RuleError, ValueError) as err:
        raise ApiError(422, "malformed_rule", str(err)) from None


def _fingerprint(rule: SyntacticRule) -> str:
    payload = {
        "language": rule.language,
        "ast_node_type": rule.ast_node_type,
        "ubsr_node_type": rule.ubsr_node_type.value,
        "extractor": [s.to_dict() for s in rule.extractor],
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def create_app(
    rules_dir: str | None = None,
    completer_spec: str | None = None,
    auth_token: str | None = None,
    cors_origins: list[str] | None = None,
    registry_path: str | None = None,
    clock=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="codeprof rule studio", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    registry = load_registry(registry_path) if registry_path else default_registry()
    rules_path = rules_dir if rules_dir is not None else str(default_rules_dir())
    completer = completer_from_spec(completer_spec) if completer_spec else None
    accept_tokens: dict[str, tuple[str, float]] = {}

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, err: ApiError):
        return JSONResponse(status_code=err.status, content={"code": err.code, "message": err.message})

    @app.middleware("http")
    async def _auth(request: Request, call_next):
        if auth_token and request.method != "OPTIONS":
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {auth_token}":
                return JSONResponse(
                    status_code=401,
                    content={"code": "unauthorized", "message": "bearer token required"},
                )
        return await call_next(request)

    def _apply_pruning(tree, pruning: PruningModel):
        if pruning.mode == "none":
            return tree
        if pruning.mode == "depth":
            if pruning.depth < 1:
                raise ApiError(422, "bad_pruning", "depth must be >= 1")
            return prune_depth(tree, pruning.depth)
        if pruning.mode == "concept":
            return prune_concept(tree, set(pruning.concepts))
        raise ApiError(422, "bad_pruning", f"unknown pruning mode {pruning.mode!r}")

    @app.get("/languages")
    def languages():
        return [
            {
                "language": e.language,
                "paradigm": e.paradigm.value,
                "known": e.known,
                "supported_concepts": sorted(e.concepts),
            }
            for e in registry.entries()
        ]

    @app.get("/rules/version")
    def rules_version():
        return {"version": load_rules(rules_path).version}

    @app.post("/parse-preview")
    def parse_preview(request: ParsePreviewRequest):
        db = load_rules(rules_path)
        try:
            tree = parse(request.code, request.language, rules=db, registry=registry)
        except UnknownLanguageError as err:
            raise ApiError(400, "unknown_language", str(err)) from None
        except FileNotFoundError as err:
            raise ApiError(400, "no_grammar", str(err)) from None
        pruned = _apply_pruning(tree, request.pruning)
        rendered = render_sexpr(pruned)
        tagged = sorted(
            {n.node_type for n in pruned.root.walk() if n.concept_tags}
        )
        return {
            "rendered_ast": rendered,
            "token_count": token_count(rendered),
            "node_count": pruned.size(),
            "unpruned_token_count": token_count(render_sexpr(tree)),
            "tagged_node_types": tagged,
        }

    @app.post("/rule/generate")
    def rule_generate(request: GenerateRequest):
        db = load_rules(rules_path)
        mode = request.pruning.mode if request.pruning.mode != "none" else "none"
        pruning = PruningSpec(mode=mode, depth=request.pruning.depth)
        try:
            bundle = build_base_rule_prompt(
                request.test_language,
                request.concept,
                request.exemplars,
                pruning=pruning,
                test_snippet=request.test_snippet,
                cross_paradigm=request.cross_paradigm,
                db=db,
                registry=registry,
            )
        except ParadigmMismatchError as err:
            raise ApiError(409, "paradigm_mismatch", str(err)) from None
        except (PromptBuildError, UnknownLanguageError) as err:
            raise ApiError(422, "bad_request", str(err)) from None
        if request.dry:
            return {"prompt": bundle.rendered, "response": None, "candidate_rule": None}
        if completer is None:
            raise ApiError(503, "no_completer", "service started without a completer")
        try:
            response = completer.complete(bundle.rendered)
        except CompleterError as err:
            raise ApiError(502, "completer_error", str(err)) from None
        candidate = None
        parse_error = None
        try:
            rule = parse_base_rule_response(response)
            candidate = {
                "language": rule.language,
                "ast_node_type": rule.ast_node_type,
                "ubsr_node_type": rule.ubsr_node_type.value,
                "extractor": [s.to_dict() for s in rule.extractor],
            }
        except ResponseParseError as err:
            parse_error = str(err)
        return {
            "prompt": bundle.rendered,
            "response": response,
            "candidate_rule": candidate,
            "parse_error": parse_error,
        }

    @app.post("/rule/validate")
    def rule_validate(request: ValidateRequest):
        rule = _candidate_from_model(request.candidate_rule)
        report = validate_candidate(rule, [(c.snippet, c.expected) for c in request.test_cases])
        token = None
        if report.accepted:
            token = secrets.token_urlsafe(16)
            accept_tokens[token] = (_fingerprint(rule), clock() + ACCEPT_TOKEN_TTL_SECONDS)
        return {
            "verdict": report.verdict,
            "reasons": list(report.reasons),
            "cases": [
                {
                    "snippet": c.snippet,
                    "expected": c.expected,
                    "actual": c.actual,
                    "error": c.error,
                    "matched": c.matched,
                }
                for c in report.cases
            ],
            "accept_token": token,
        }

    @app.post("/rule/commit")
    def rule_commit(request: CommitRequest):
        rule = _candidate_from_model(request.candidate_rule)
        entry = accept_tokens.get(request.token)
        if entry is None:
            raise ApiError(403, "no_accept_token", "commit requires a valid accept token")
        fingerprint, expires = entry
        if clock() > expires:
            accept_tokens.pop(request.token, None)
            raise ApiError(403, "token_expired", "accept token expired; re-validate the rule")
        if fingerprint != _fingerprint(rule):
            raise ApiError(403, "token_mismatch", "accept token was issued for a different rule")
        try:
            version = commit_rule(rules_path, rule, expected_version=request.version)
        except StaleVersionError as err:
            raise ApiError(409, "stale_version", str(err)) from None
        except CommitError as err:
            raise ApiError(409, "commit_conflict", str(err)) from None
        accept_tokens.pop(request.token, None)
        return {"version": version}

    return app
