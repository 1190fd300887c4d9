"""Plain-text hypergraph and colouring files.

Hypergraph::

    hg 1
    n <n> k <k>
    e v1 v2 ... vk        (one line per edge, 0-based, ascending)

Colouring::

    col 1 q <q>
    <vertex> <colour>     (n lines)

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import os

from .hypergraph import Colouring, Hypergraph


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class RangeError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _content_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def write_hypergraph(H: Hypergraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("hg 1\n")
        fh.write(f"n {H.n} k {H.k}\n")
        for e in H.edges:
            fh.write("e " + " ".join(map(str, e)) + "\n")


def read_hypergraph(path: str | os.PathLike) -> Hypergraph:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty hypergraph file") from None
    if header != ["hg", "1"]:
        raise ParseError(f"expected header 'hg 1', got {' '.join(header)!r}", lineno)
    try:
        lineno, dims = next(lines)
    except StopIteration:
        raise ParseError("missing 'n <n> k <k>' line") from None
    if len(dims) != 4 or dims[0] != "n" or dims[2] != "k":
        raise ParseError("expected 'n <n> k <k>'", lineno)
    n, k = _ints([dims[1], dims[3]], lineno)
    if n < 0 or k < 2:
        raise RangeError(f"invalid dimensions n={n} k={k}", lineno)

    edges = []
    seen = set()
    for lineno, tokens in lines:
        if tokens[0] != "e":
            raise ParseError(f"unknown record {tokens[0]!r}", lineno)
        verts = _ints(tokens[1:], lineno)
        if len(verts) != k:
            raise ParseError(f"edge has {len(verts)} vertices, expected {k}", lineno)
        if any(v < 0 or v >= n for v in verts):
            raise RangeError(f"vertex id outside [0, {n})", lineno)
        if len(set(verts)) != k:
            raise ParseError("edge repeats a vertex", lineno)
        key = tuple(sorted(verts))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    return Hypergraph(n, k, edges)


def write_colouring(X: Colouring, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"col 1 q {X.q}\n")
        for v, c in enumerate(X.colours):
            fh.write(f"{v} {c}\n")


def read_colouring(path: str | os.PathLike, n: int | None = None) -> Colouring:
    """Read a colouring; if ``n`` is given the file must cover exactly ``n`` vertices."""
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty colouring file") from None
    if len(header) != 4 or header[:3] != ["col", "1", "q"]:
        raise ParseError("expected header 'col 1 q <q>'", lineno)
    (q,) = _ints(header[3:], lineno)
    if q < 1:
        raise RangeError(f"q must be positive, got {q}", lineno)

    assigned: dict[int, int] = {}
    for lineno, tokens in lines:
        if len(tokens) != 2:
            raise ParseError("expected '<vertex> <colour>'", lineno)
        v, c = _ints(tokens, lineno)
        if v < 0 or (n is not None and v >= n):
            raise RangeError(f"vertex {v} out of range", lineno)
        if not 1 <= c <= q:
            raise RangeError(f"colour {c} outside [1, {q}]", lineno)
        if v in assigned:
            raise ParseError(f"vertex {v} coloured twice", lineno)
        assigned[v] = c
    size = n if n is not None else len(assigned)
    missing = [v for v in range(size) if v not in assigned]
    if missing or len(assigned) != size:
        raise ParseError(f"colouring does not cover vertices 0..{size - 1} exactly")
    return Colouring([assigned[v] for v in range(size)], q)
