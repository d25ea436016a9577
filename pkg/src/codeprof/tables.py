"""Wide-table projection of documents and its parquet/jsonl persistence.

The node and edge tables are pandas DataFrames with a fixed column contract;
``from_tabular`` inverts ``to_tabular`` exactly, so the tables are the
canonical interchange format between the extractor and the profiler stages.
"""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd

from .ir import (
    NodeMetadata,
    UbsrDocument,
    UbsrEdge,
    UbsrNode,
    UbsrNodeType,
    validate_document,
)

NODE_COLUMNS = [
    "doc_id",
    "id",
    "code_snippet",
    "node_type",
    "parents",
    "children",
    "info",
    "language",
    "original_code",
    "loc_original_code",
]
EDGE_COLUMNS = ["doc_id", "source", "target", "directed_relation", "metadata"]


class TableFormatError(ValueError):
    """A table does not satisfy the column/row contract."""


def to_tabular(docs: list[UbsrDocument]) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Project documents onto the (node_table, edge_table) pair.

    ``doc_id`` is the document's source_path, which therefore must be unique
    across the input. Row order is document order, then node id / edge order.
    Edge metadata is stored JSON-encoded so the tables persist losslessly to
    columnar formats.
    """
    seen_paths: set[str] = set()
    node_rows = []
    edge_rows = []
    for doc in docs:
        violations = validate_document(doc)
        if violations:
            raise TableFormatError(
                f"document {doc.source_path!r} is invalid: {violations[0]}"
            )
        if doc.source_path in seen_paths:
            raise TableFormatError(f"duplicate source_path {doc.source_path!r}")
        seen_paths.add(doc.source_path)
        for node in sorted(doc.nodes, key=lambda n: n.id):
            node_rows.append(
                {
                    "doc_id": doc.source_path,
                    "id": node.id,
                    "code_snippet": node.code_snippet,
                    "node_type": node.node_type.value,
                    "parents": list(node.parents),
                    "children": list(node.children),
                    "info": node.metadata.info,
                    "language": node.metadata.language,
                    "original_code": node.metadata.original_code,
                    "loc_original_code": node.metadata.loc_original_code,
                }
            )
        for edge in doc.edges:
            edge_rows.append(
                {
                    "doc_id": doc.source_path,
                    "source": edge.source,
                    "target": edge.target,
                    "directed_relation": edge.directed_relation,
                    "metadata": json.dumps(edge.metadata, sort_keys=True),
                }
            )
    node_table = pd.DataFrame(node_rows, columns=NODE_COLUMNS)
    edge_table = pd.DataFrame(edge_rows, columns=EDGE_COLUMNS)
    return node_table, edge_table


def from_tabular(node_table: pd.DataFrame, edge_table: pd.DataFrame) -> list[UbsrDocument]:
    """Rebuild documents from their tabular projection.

    Inverse of :func:`to_tabular` on its image. Document order follows first
    appearance in the node table.
    """
    for col in NODE_COLUMNS:
        if col not in node_table.columns:
            raise TableFormatError(f"node table missing column {col!r}")
    for col in EDGE_COLUMNS:
        if col not in edge_table.columns:
            raise TableFormatError(f"edge table missing column {col!r}")

    nodes_by_doc: dict[str, list[UbsrNode]] = {}
    for row in node_table.to_dict("records"):
        node = UbsrNode(
            id=int(row["id"]),
            code_snippet=str(row["code_snippet"]),
            node_type=UbsrNodeType(row["node_type"]),
            parents=tuple(int(p) for p in row["parents"]),
            children=tuple(int(c) for c in row["children"]),
            metadata=NodeMetadata(
                info=str(row["info"]),
                language=str(row["language"]),
                original_code=str(row["original_code"]),
                loc_original_code=int(row["loc_original_code"]),
            ),
        )
        nodes_by_doc.setdefault(str(row["doc_id"]), []).append(node)

    edges_by_doc: dict[str, list[UbsrEdge]] = {}
    for row in edge_table.to_dict("records"):
        doc_id = str(row["doc_id"])
        meta = row["metadata"]
        if isinstance(meta, str):
            meta = json.loads(meta) if meta else {}
        edge = UbsrEdge(
            source=int(row["source"]),
            target=int(row["target"]),
            directed_relation=str(row["directed_relation"]),
            metadata=dict(meta),
        )
        ids = {n.id for n in nodes_by_doc.get(doc_id, [])}
        if edge.source not in ids or edge.target not in ids:
            raise TableFormatError(
                f"edge ({edge.source}, {edge.target}) in doc {doc_id!r} "
                "references a node id that is not in the node table"
            )
        edges_by_doc.setdefault(doc_id, []).append(edge)

    docs = []
    for doc_id, nodes in nodes_by_doc.items():
        docs.append(
            UbsrDocument(
                nodes=tuple(nodes),
                edges=tuple(edges_by_doc.get(doc_id, [])),
                source_path=doc_id,
            )
        )
    return docs


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

FORMATS = ("parquet", "jsonl")


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown table format {fmt!r}; expected one of {FORMATS}")


def write_table(table: pd.DataFrame, path: str | Path, fmt: str = "parquet") -> None:
    _check_format(fmt)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "parquet":
        table.to_parquet(path, index=False)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            for row in table.to_dict("records"):
                fh.write(json.dumps(row, sort_keys=True) + "\n")


def read_table(
    path: str | Path, fmt: str | None = None, columns: list[str] | None = None
) -> pd.DataFrame:
    """Read a persisted table; ``columns`` fixes the header for empty jsonl files."""
    path = Path(path)
    if fmt is None:
        fmt = "parquet" if path.suffix == ".parquet" else "jsonl"
    _check_format(fmt)
    if fmt == "parquet":
        table = pd.read_parquet(path)
        # pyarrow round-trips list columns as numpy arrays; normalize to lists
        for col in ("parents", "children"):
            if col in table.columns:
                table[col] = table[col].map(list)
        return table
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    if rows:
        return pd.DataFrame(rows, columns=columns or list(rows[0].keys()))
    return pd.DataFrame(columns=columns or [])
