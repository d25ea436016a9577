"""Command-line surface: the online profiling path (profile, report) and the
offline rule workflows (rulegen, semmap), plus the studio service launcher.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .extract import ExtractionOptions, OnError, extract_corpus
from .languages import default_registry, load_registry
from .metrics import COMMENT_SCOPES, metrics_table
from .offline.commit import commit_rule, commit_semantic_rows, load_semantic_version
from .offline.completer import completer_from_spec
from .offline.prompts import (
    DEFAULT_BATCH_SIZE,
    PruningSpec,
    build_base_rule_prompt,
    build_semantic_mapping_prompts,
)
from .offline.responses import parse_base_rule_response, parse_semantic_mapping_response, validate_candidate
from .report import DEFAULT_CCR_BUCKET_EDGES, DEFAULT_GENERATED_AT, build_report, write_report
from .rules import default_rules_dir, load_rules
from .semantic import ConceptList, annotate, load_pending, load_ruleset, save_pending
from .tables import EDGE_COLUMNS, NODE_COLUMNS, read_table, write_table

TABLE_BASENAMES = {"nodes": NODE_COLUMNS, "edges": EDGE_COLUMNS, "metrics": None}


def _parse_pruning(spec: str) -> PruningSpec:
    if spec == "concept":
        return PruningSpec(mode="concept")
    if spec == "none":
        return PruningSpec(mode="none")
    if spec.startswith("depth:"):
        return PruningSpec(mode="depth", depth=int(spec.split(":", 1)[1]))
    raise click.BadParameter(f"pruning must be concept, none, or depth:<k>, got {spec!r}")


@click.group()
def main() -> None:
    """Multi-lingual code data profiler."""


@main.command()
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--rules", "rules_dir", type=click.Path(path_type=Path), default=None,
              help="Rule database directory (defaults to the bundled rules).")
@click.option("--registry", "registry_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Language registry data file.")
@click.option("--semantic-db", type=click.Path(path_type=Path), default=None,
              help="Semantic rule set CSV; enables concept annotation.")
@click.option("--dimension", default="Functionality", show_default=True)
@click.option("--languages", default=None, help="Comma-separated language filter.")
@click.option("--language-override", default=None,
              help="Treat every input file as this language (skips extension detection).")
@click.option("--format", "fmt", type=click.Choice(["parquet", "jsonl"]), default="parquet",
              show_default=True)
@click.option("--comments-scope", type=click.Choice(list(COMMENT_SCOPES)), default="transitive",
              show_default=True)
@click.option("--on-error", type=click.Choice([e.value for e in OnError]),
              default=OnError.SKIP_FILE.value, show_default=True)
def profile(input_dir, out_dir, rules_dir, registry_path, semantic_db, dimension, languages,
            language_override, fmt, comments_scope, on_error) -> None:
    """Profile a directory of source files into node/edge/metrics tables."""
    registry = load_registry(str(registry_path)) if registry_path else default_registry()
    if rules_dir is not None and not Path(rules_dir).exists():
        raise click.ClickException(f"rules directory does not exist: {rules_dir}")
    db = load_rules(rules_dir) if rules_dir else load_rules(default_rules_dir())

    inputs = []
    for path in sorted(p for p in Path(input_dir).rglob("*") if p.is_file()):
        language = language_override or registry.detect_by_extension(path.name)
        if language is None:
            continue
        inputs.append((str(path.relative_to(input_dir)), path.read_text("utf-8"), language))

    options = ExtractionOptions(
        languages=frozenset(languages.split(",")) if languages else None,
        on_error=OnError(on_error),
    )
    result = extract_corpus(inputs, db=db, options=options, registry=registry)
    for path, reason in result.error_log:
        click.echo(f"skipped {path}: {reason}", err=True)

    node_table = result.node_table
    pending: list[tuple[str, str]] = []
    if semantic_db:
        if not Path(semantic_db).exists():
            raise click.ClickException(f"semantic rule set does not exist: {semantic_db}")
        ruleset = load_ruleset(semantic_db)
        annotated = annotate(node_table, ruleset, dimension)
        node_table = annotated.table
        pending = annotated.pending

    metrics = metrics_table(node_table, comments_scope=comments_scope)

    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = "parquet" if fmt == "parquet" else "jsonl"
    write_table(node_table, out_dir / f"nodes.{suffix}", fmt)
    write_table(result.edge_table, out_dir / f"edges.{suffix}", fmt)
    write_table(metrics, out_dir / f"metrics.{suffix}", fmt)
    save_pending(pending, out_dir / "pending.csv")
    click.echo(
        f"profiled {metrics.shape[0]} file(s): {node_table.shape[0]} nodes, "
        f"{result.edge_table.shape[0]} edges, {len(pending)} pending package(s) -> {out_dir}"
    )


@main.command()
@click.argument("tables_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["parquet", "jsonl"]), default=None,
              help="Table format (inferred from the files present by default).")
@click.option("--corpus-id", default=None, help="Defaults to the tables directory name.")
@click.option("--bucket-edges", default=None,
              help="Comma-separated CCR bucket edges "
                   f"(default {','.join(str(e) for e in DEFAULT_CCR_BUCKET_EDGES)}).")
@click.option("--generated-at", default=DEFAULT_GENERATED_AT, show_default=True,
              help="Timestamp stamped into the report; fixed by default so reports "
                   "are byte-identical across runs.")
def report(tables_dir, out_path, fmt, corpus_id, bucket_edges, generated_at) -> None:
    """Aggregate persisted tables into a profiling report (JSON)."""
    if fmt is None:
        fmt = "parquet" if (tables_dir / "nodes.parquet").exists() else "jsonl"
    suffix = "parquet" if fmt == "parquet" else "jsonl"
    nodes_path = tables_dir / f"nodes.{suffix}"
    metrics_path = tables_dir / f"metrics.{suffix}"
    if not nodes_path.exists() or not metrics_path.exists():
        raise click.ClickException(f"missing tables in {tables_dir} (expected {nodes_path.name})")
    node_table = read_table(nodes_path, fmt, columns=NODE_COLUMNS)
    metrics = read_table(metrics_path, fmt)
    edges = tuple(float(e) for e in bucket_edges.split(",")) if bucket_edges else DEFAULT_CCR_BUCKET_EDGES
    rpt = build_report(
        node_table,
        metrics,
        corpus_id=corpus_id or tables_dir.name,
        bucket_edges=edges,
        generated_at=generated_at,
    )
    write_report(rpt, out_path)
    click.echo(f"report written to {out_path}")


@main.command()
@click.option("--test-language", required=True)
@click.option("--concept", required=True, type=click.Choice(["package", "function", "comment"]))
@click.option("--exemplar", "exemplars", multiple=True, required=True,
              help="Known exemplar language; repeatable.")
@click.option("--pruning", default="concept", show_default=True,
              help="concept, none, or depth:<k>.")
@click.option("--test-snippet", default=None)
@click.option("--test-file", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--expected", default=None,
              help="Expected extraction for the test snippet (validation case).")
@click.option("--case", "cases", nargs=2, multiple=True, metavar="SNIPPET EXPECTED",
              help="Extra validation case; repeatable.")
@click.option("--completer", "completer_spec", default=None,
              help="stub:<fixture-dir> or http (required unless --dry-run).")
@click.option("--rules", "rules_dir", type=click.Path(path_type=Path), default=None,
              help="Rule database directory to commit into (defaults to bundled).")
@click.option("--cross-paradigm", is_flag=True, default=False)
@click.option("--dry-run", is_flag=True, default=False, help="Print the prompt and exit.")
def rulegen(test_language, concept, exemplars, pruning, test_snippet, test_file, expected,
            cases, completer_spec, rules_dir, cross_paradigm, dry_run) -> None:
    """Generate, validate, and commit one base syntactic rule."""
    if test_file is not None:
        test_snippet = Path(test_file).read_text("utf-8")
    rules_path = Path(rules_dir) if rules_dir else default_rules_dir()
    db = load_rules(rules_path)
    try:
        bundle = build_base_rule_prompt(
            test_language,
            concept,
            list(exemplars),
            pruning=_parse_pruning(pruning),
            test_snippet=test_snippet,
            cross_paradigm=cross_paradigm,
            db=db,
        )
    except Exception as err:
        raise click.ClickException(str(err)) from err
    if dry_run:
        click.echo(bundle.rendered)
        return
    if completer_spec is None:
        raise click.ClickException("--completer is required unless --dry-run is given")

    completer = completer_from_spec(completer_spec)
    response = completer.complete(bundle.rendered)
    try:
        candidate = parse_base_rule_response(response)
    except Exception as err:
        raise click.ClickException(f"could not parse candidate rule: {err}") from err

    test_cases = list(cases)
    if expected is not None:
        test_cases.insert(0, (bundle.test_input[1], expected))
    if not test_cases:
        raise click.ClickException("no validation cases; pass --expected or --case")
    verdict = validate_candidate(candidate, test_cases)
    for case in verdict.cases:
        status = "ok" if case.matched else f"FAIL ({case.error or case.actual!r})"
        click.echo(f"  case {case.snippet!r} -> expected {case.expected!r}: {status}")
    if not verdict.accepted:
        click.echo("rule rejected; not committed", err=True)
        for reason in verdict.reasons:
            click.echo(f"  {reason}", err=True)
        sys.exit(1)
    version = commit_rule(rules_path, candidate, expected_version=db.version)
    click.echo(
        f"accepted: committed ({candidate.language}, {candidate.ast_node_type}) "
        f"-> {candidate.ubsr_node_type.value}; database version {version}"
    )


def _load_concepts(path: Path, dimension: str) -> ConceptList:
    text = path.read_text("utf-8")
    if path.suffix == ".json":
        payload = json.loads(text)
        if isinstance(payload, dict):
            return ConceptList(payload.get("dimension", dimension), tuple(payload["concepts"]))
        return ConceptList(dimension, tuple(payload))
    return ConceptList(dimension, tuple(line.strip() for line in text.splitlines() if line.strip()))


@main.command()
@click.option("--pending", "pending_path", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="CSV of (package, language) pairs to map.")
@click.option("--dimension", default="Functionality", show_default=True)
@click.option("--concepts", "concepts_path", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Concept list (JSON list/object or one name per line).")
@click.option("--semantic-db", required=True, type=click.Path(path_type=Path))
@click.option("--few-shots", "few_shots_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="CSV of package,language,concept example rows.")
@click.option("--batch-size", default=DEFAULT_BATCH_SIZE, show_default=True)
@click.option("--completer", "completer_spec", default=None)
@click.option("--dry-run", is_flag=True, default=False, help="Print the prompts and exit.")
def semmap(pending_path, dimension, concepts_path, semantic_db, few_shots_path, batch_size,
           completer_spec, dry_run) -> None:
    """Map pending packages to semantic concepts and commit the rows."""
    packages = load_pending(pending_path)
    concept_list = _load_concepts(concepts_path, dimension)
    few_shots = None
    if few_shots_path:
        import csv as _csv

        with open(few_shots_path, newline="", encoding="utf-8") as fh:
            reader = _csv.reader(fh)
            header = next(reader, None)
            few_shots = [tuple(row[:3]) for row in reader if row]
    prompts = build_semantic_mapping_prompts(
        packages, concept_list, few_shots=few_shots, batch_size=batch_size
    )
    if dry_run:
        for i, bundle in enumerate(prompts):
            click.echo(f"--- prompt {i + 1}/{len(prompts)} ---")
            click.echo(bundle.rendered)
        return
    if completer_spec is None:
        raise click.ClickException("--completer is required unless --dry-run is given")
    completer = completer_from_spec(completer_spec)

    rows: list[tuple[str, str, str]] = []
    for bundle in prompts:
        response = completer.complete(bundle.rendered)
        parsed = parse_semantic_mapping_response(response, concept_list)
        for error in parsed.row_errors:
            click.echo(f"  {error}", err=True)
        rows.extend(parsed.rows)
    version = commit_semantic_rows(
        semantic_db, rows, concept_list, expected_version=load_semantic_version(semantic_db)
    )
    click.echo(f"committed {len(rows)} semantic row(s); database version {version}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True)
@click.option("--rules", "rules_dir", type=click.Path(path_type=Path), default=None)
@click.option("--completer", "completer_spec", default=None)
@click.option("--auth-token", default=None, help="Require this bearer token on every request.")
@click.option("--cors-origin", multiple=True, help="Allowed CORS origin; repeatable.")
def studio(host, port, rules_dir, completer_spec, auth_token, cors_origin) -> None:
    """Run the rule-studio HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(
        rules_dir=str(rules_dir) if rules_dir else None,
        completer_spec=completer_spec,
        auth_token=auth_token,
        cors_origins=list(cors_origin) or None,
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
