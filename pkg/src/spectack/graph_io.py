"""Edge-list and CSV file formats.

Edge-list format: UTF-8 with LF line endings; `#`-prefixed comment text is
ignored; the first data line holds the node count n, then one `u v` line per
edge, 0-based with u < v, in ascending order.

Label/feature CSVs have a header row and one row per node id, in order:
labels are a single integer column, features are F real columns.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import GraphFormatError
from .graph import Graph, from_edge_list

__all__ = [
    "edge_list_text",
    "save_edge_list",
    "load_edge_list",
    "load_labels_csv",
    "save_labels_csv",
    "load_features_csv",
]


def edge_list_text(g: Graph) -> str:
    """Canonical serialization: the exact bytes save_edge_list writes."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edge_list())
    return "\n".join(lines) + "\n"


def save_edge_list(g: Graph, sink) -> None:
    """Write the canonical edge-list text to a path or text stream."""
    text = edge_list_text(g)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8", newline="\n")


def load_edge_list(source) -> Graph:
    """Parse an edge-list file (path or text stream) into a Graph."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    n: int | None = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise GraphFormatError(f"line {lineno}: expected node count, got {raw!r}")
            try:
                n = int(fields[0])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad node count {fields[0]!r}") from None
            if n < 1:
                raise GraphFormatError(f"line {lineno}: node count must be >= 1, got {n}")
            continue
        if len(fields) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer endpoint in {raw!r}") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: explicit self-loop ({u}, {v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: edge ({u}, {v}) out of range for n={n}")
        pairs.append((u, v))
    if n is None:
        raise GraphFormatError("empty edge-list file (missing node count)")
    return from_edge_list(n, pairs)


def load_labels_csv(path) -> np.ndarray:
    """Single integer column with a header row, one row per node."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if len(rows) < 2:
        raise GraphFormatError(f"{path}: labels CSV needs a header and at least one row")
    labels = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 1:
            raise GraphFormatError(f"{path}:{lineno}: expected one label column, got {row!r}")
        try:
            labels.append(int(row[0]))
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: non-integer label {row[0]!r}") from None
    return np.array(labels, dtype=np.int64)


def save_labels_csv(labels, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"])
        for value in np.asarray(labels).tolist():
            writer.writerow([int(value)])


def load_features_csv(path) -> np.ndarray:
    """F real columns with a header row, one row per node."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if len(rows) < 2:
        raise GraphFormatError(f"{path}: features CSV needs a header and at least one row")
    width = len(rows[0])
    feats = np.empty((len(rows) - 1, width))
    for i, row in enumerate(rows[1:]):
        if len(row) != width:
            raise GraphFormatError(f"{path}: row {i + 2} has {len(row)} columns, expected {width}")
        try:
            feats[i] = [float(x) for x in row]
        except ValueError:
            raise GraphFormatError(f"{path}: non-numeric feature in row {i + 2}") from None
    return feats
