"""Text formats: edge lists, label files, meta-graph dumps, embeddings, reports.

Edge list: one ``u<TAB>v<TAB>w`` line per edge with 0-based ids, ``#`` comment
lines ignored, optional ``n=<int>`` header line. Labels: one integer per line,
line index = vertex id.
"""
from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np

from .errors import GraphError, MetaSpectralError, ParseError
from .graph import WeightedGraph, build_graph
from .metagraph import MetaGraph
from .pipeline import Clustering


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            yield lineno, raw.rstrip("\r\n")


def parse_edge_list(lines, source: str = "<input>") -> WeightedGraph:
    """Parse ``(lineno, text)`` pairs in edge-list format."""
    n = None
    rows = []
    for lineno, line in lines:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text.startswith("n="):
            if n is not None or rows:
                raise ParseError(f"{source}:{lineno}: 'n=' header must precede all edges")
            try:
                n = int(text[2:])
            except ValueError:
                raise ParseError(f"{source}:{lineno}: bad vertex count {text[2:]!r}") from None
            if n < 1:
                raise ParseError(f"{source}:{lineno}: vertex count must be positive")
            continue
        parts = text.split("\t") if "\t" in text else text.split()
        if len(parts) != 3:
            raise ParseError(f"{source}:{lineno}: expected 'u<TAB>v<TAB>w', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise ParseError(f"{source}:{lineno}: cannot parse {line!r}") from None
        if not np.isfinite(w):
            raise ParseError(f"{source}:{lineno}: weight must be finite")
        rows.append((u, v, w))
    try:
        return build_graph(np.array(rows, dtype=float).reshape(-1, 3), n=n)
    except GraphError as exc:
        raise type(exc)(f"{source}: {exc}") from None


def read_edge_list(path) -> WeightedGraph:
    return parse_edge_list(_lines(path), source=str(path))


def write_edge_list(G: WeightedGraph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"n={G.n}\n")
        for u, v, w in G.edges():
            fh.write(f"{u}\t{v}\t{w!r}\n")


def read_labels(path, k: int | None = None) -> Clustering:
    labels = []
    for lineno, line in _lines(path):
        text = line.strip()
        if not text:
            continue
        try:
            labels.append(int(text))
        except ValueError:
            raise ParseError(f"{path}:{lineno}: expected an integer label, got {line!r}") from None
    if not labels:
        raise ParseError(f"{path}: no labels")
    arr = np.array(labels, dtype=np.int64)
    if k is None:
        k = int(arr.max()) + 1
    try:
        return Clustering(arr, k)
    except MetaSpectralError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def write_labels(clustering, path) -> None:
    labels = clustering.labels if isinstance(clustering, Clustering) else np.asarray(clustering)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{int(x)}\n" for x in labels)


def write_meta_graph(M: MetaGraph, path) -> None:
    """``k`` on the first line, then the ``k x k`` adjacency as TSV rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{M.k}\n")
        for row in M.adjacency:
            fh.write("\t".join(repr(float(x)) for x in row) + "\n")


def read_meta_graph(path) -> MetaGraph:
    lines = [(i, l) for i, l in _lines(path) if l.strip()]
    if not lines:
        raise ParseError(f"{path}: empty meta-graph file")
    try:
        k = int(lines[0][1])
    except ValueError:
        raise ParseError(f"{path}:{lines[0][0]}: expected k") from None
    if len(lines) != k + 1:
        raise ParseError(f"{path}: expected {k} matrix rows, found {len(lines) - 1}")
    rows = []
    for lineno, line in lines[1:]:
        try:
            row = [float(x) for x in line.split("\t")]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad matrix row") from None
        if len(row) != k:
            raise ParseError(f"{path}:{lineno}: expected {k} entries, found {len(row)}")
        rows.append(row)
    return MetaGraph(np.array(rows))


def write_embedding(points, path, labels=None) -> None:
    """CSV with header ``vertex,x1..xl[,label]``; ``path`` may be an open text file."""
    points = np.asarray(points)
    if hasattr(path, "write"):
        _write_embedding(points, path, labels)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_embedding(points, fh, labels)


def _write_embedding(points, fh, labels):
    w = csv.writer(fh, lineterminator="\n")
    header = ["vertex"] + [f"x{j + 1}" for j in range(points.shape[1])]
    if labels is not None:
        header.append("label")
    w.writerow(header)
    for u, row in enumerate(points):
        out = [u] + [repr(float(x)) for x in row]
        if labels is not None:
            out.append(int(labels[u]))
        w.writerow(out)


def write_text(path, text: str) -> None:
    if os.path.dirname(str(path)):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
