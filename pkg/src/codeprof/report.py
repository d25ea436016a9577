"""Corpus-level profiling report: language distribution, CCR histogram,
semantic concept distribution, and node totals.

Reports are pure aggregations of the persisted tables, so regenerating one
from the same tables is byte-identical. The ``generated_at`` stamp therefore
defaults to a fixed epoch value; callers that want wall-clock stamps pass one
explicitly.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from .ir import UbsrNodeType

DEFAULT_GENERATED_AT = "1970-01-01T00:00:00Z"
DEFAULT_CCR_BUCKET_EDGES = (1.0, 2.0, 5.0, 10.0, 20.0)


@dataclass(frozen=True)
class ProfileReport:
    corpus_id: str
    generated_at: str
    totals: dict
    language_distribution: dict
    ccr_histogram: dict
    concept_distribution: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "corpus_id": self.corpus_id,
            "generated_at": self.generated_at,
            "totals": self.totals,
            "language_distribution": self.language_distribution,
            "ccr_histogram": self.ccr_histogram,
            "concept_distribution": self.concept_distribution,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _bucket_label(lo: float, hi: float | None) -> str:
    return f"[{lo:g}, {hi:g})" if hi is not None else f"[{lo:g}, inf)"


def ccr_histogram(values: list[float], edges: tuple[float, ...]) -> dict:
    """Bucket counts over [0, inf); ``edges`` are the interior boundaries."""
    if list(edges) != sorted(edges) or any(e <= 0 for e in edges):
        raise ValueError("bucket edges must be positive and ascending")
    bounds = [0.0, *edges, None]
    buckets = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        count = sum(1 for v in values if v >= lo and (hi is None or v < hi))
        buckets.append({"range": _bucket_label(lo, hi), "count": count})
    return {"edges": list(edges), "buckets": buckets}


def build_report(
    node_table: pd.DataFrame,
    metrics: pd.DataFrame,
    corpus_id: str,
    bucket_edges: tuple[float, ...] = DEFAULT_CCR_BUCKET_EDGES,
    generated_at: str = DEFAULT_GENERATED_AT,
) -> ProfileReport:
    """Aggregate the persisted tables into a report; no other inputs."""
    language_distribution = Counter(str(lang) for lang in metrics["language"])

    node_totals = {t.value: 0 for t in UbsrNodeType}
    for node_type, count in node_table.groupby("node_type")["id"].count().items():
        node_totals[str(node_type)] = int(count)

    concept_distribution: dict[str, dict[str, int]] = {}
    concept_columns = [c for c in node_table.columns if c.startswith("concept_")]
    for column in concept_columns:
        dimension = column[len("concept_"):]
        counts: Counter = Counter()
        seen_docs = set()
        for doc_id, value in zip(node_table["doc_id"], node_table[column]):
            if doc_id in seen_docs:
                continue  # every row of a document carries the same list
            seen_docs.add(doc_id)
            counts.update(str(v) for v in value)
        concept_distribution[dimension] = dict(sorted(counts.items()))

    return ProfileReport(
        corpus_id=corpus_id,
        generated_at=generated_at,
        totals={
            "files": int(metrics.shape[0]),
            "nodes": node_totals,
        },
        language_distribution=dict(sorted(language_distribution.items())),
        ccr_histogram=ccr_histogram([float(v) for v in metrics["ccr"]], bucket_edges),
        concept_distribution=concept_distribution,
    )


def write_report(report: ProfileReport, path: str | Path) -> None:
    Path(path).write_text(report.to_json(), "utf-8")
