"""Higher-order syntactic metrics derived from the node tables: per-document
concept counts, comment line totals, code-comment ratio, mean function length.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import pandas as pd

from .ir import UbsrDocument, UbsrNodeType
from .tables import TableFormatError

#: which comment nodes contribute to the comment line total:
#: "direct" counts only the root's comment children; "transitive" counts all
#: comment nodes, so comments nested in functions still count.
COMMENT_SCOPES = ("direct", "transitive")

METRIC_COLUMNS = [
    "doc_id",
    "language",
    "loc_snippet",
    "package_count",
    "function_count",
    "comment_count",
    "total_comment_loc",
    "ccr",
    "mean_function_loc",
]


@dataclass(frozen=True)
class SyntacticProfileRow:
    doc_id: str
    language: str
    loc_snippet: int
    package_count: int
    function_count: int
    comment_count: int
    total_comment_loc: int
    ccr: float
    mean_function_loc: float


def _ccr(loc_snippet: int, total_comment_loc: int) -> float:
    return loc_snippet / total_comment_loc if total_comment_loc > 0 else 0


def compute_ccr(doc: UbsrDocument, comments_scope: str = "transitive") -> float:
    """Code-comment ratio: snippet lines over comment lines, 0 when there are
    no comment lines.

    The "direct" scope divides by the comment lines of the root's direct
    children only; "transitive" (default) counts every comment node.
    """
    if comments_scope not in COMMENT_SCOPES:
        raise ValueError(f"comments_scope must be one of {COMMENT_SCOPES}")
    root = doc.root
    loc_snippet = root.metadata.loc_original_code
    if comments_scope == "direct":
        comments = (doc.node_by_id(cid) for cid in root.children)
    else:
        comments = iter(doc.nodes)
    total_comment_loc = sum(
        n.metadata.loc_original_code for n in comments if n.node_type is UbsrNodeType.COMMENT
    )
    return _ccr(loc_snippet, total_comment_loc)


def profile_rows(
    node_table: pd.DataFrame, comments_scope: str = "transitive"
) -> list[SyntacticProfileRow]:
    """One metrics row per document, in first-appearance order."""
    if comments_scope not in COMMENT_SCOPES:
        raise ValueError(f"comments_scope must be one of {COMMENT_SCOPES}")
    required = {"doc_id", "id", "node_type", "children", "language", "loc_original_code"}
    missing = required - set(node_table.columns)
    if missing:
        raise TableFormatError(f"node table missing columns {sorted(missing)}")

    rows: list[SyntacticProfileRow] = []
    for doc_id, group in node_table.groupby("doc_id", sort=False):
        by_type = group.groupby("node_type")["id"].count()
        root_rows = group[group["node_type"] == UbsrNodeType.ROOT.value]
        if len(root_rows) != 1:
            raise TableFormatError(f"document {doc_id!r} must have exactly one root row")
        root = root_rows.iloc[0]

        comment_rows = group[group["node_type"] == UbsrNodeType.COMMENT.value]
        if comments_scope == "direct":
            direct_ids = set(root["children"])
            comment_rows = comment_rows[comment_rows["id"].isin(direct_ids)]
        function_rows = group[group["node_type"] == UbsrNodeType.FUNCTION.value]

        loc_snippet = int(root["loc_original_code"])
        total_comment_loc = int(comment_rows["loc_original_code"].sum())
        function_count = int(by_type.get(UbsrNodeType.FUNCTION.value, 0))
        rows.append(
            SyntacticProfileRow(
                doc_id=str(doc_id),
                language=str(root["language"]),
                loc_snippet=loc_snippet,
                package_count=int(by_type.get(UbsrNodeType.PACKAGE.value, 0)),
                function_count=function_count,
                comment_count=int(by_type.get(UbsrNodeType.COMMENT.value, 0)),
                total_comment_loc=total_comment_loc,
                ccr=_ccr(loc_snippet, total_comment_loc),
                mean_function_loc=(
                    float(function_rows["loc_original_code"].sum()) / function_count
                    if function_count
                    else 0
                ),
            )
        )
    return rows


def metrics_table(
    node_table: pd.DataFrame, comments_scope: str = "transitive"
) -> pd.DataFrame:
    rows = profile_rows(node_table, comments_scope=comments_scope)
    return pd.DataFrame([asdict(r) for r in rows], columns=METRIC_COLUMNS)
