"""Reading edge lists and timestamped traces; writing edge lists.

Edge lists are SNAP-style: one whitespace-separated pair of vertex tokens per
line, ``#`` starts a comment line.  Traces carry a leading timestamp,
``t u v``.  Tokens are arbitrary non-whitespace strings; internal vertex ids
are assigned in order of first appearance and the token of every vertex is
kept in ``graph.labels``.
"""
from __future__ import annotations

import io as _io
from dataclasses import dataclass

import numpy as np

from .graph import UndirectedGraph


class ParseError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def _lines(source):
    """Yield (lineno, stripped text) from bytes, str, a path-like or a file object."""
    if isinstance(source, (bytes, bytearray)):
        source = _io.StringIO(bytes(source).decode("utf-8"))
    elif isinstance(source, str):
        source = _io.StringIO(source)
    for lineno, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.strip()
        if line and not line.startswith("#"):
            yield lineno, line


class _Interner:
    def __init__(self):
        self.index = {}
        self.tokens = []

    def __call__(self, tok):
        i = self.index.get(tok)
        if i is None:
            i = self.index[tok] = len(self.tokens)
            self.tokens.append(tok)
        return i


def parse_edge_list(source) -> UndirectedGraph:
    intern = _Interner()
    u, v = [], []
    for lineno, line in _lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 tokens, found {len(parts)}", lineno)
        u.append(intern(parts[0]))
        v.append(intern(parts[1]))
    n = len(intern.tokens)
    return UndirectedGraph.from_edges(u, v, ids=np.arange(n), labels=intern.tokens, n=n)


def read_edge_list(path) -> UndirectedGraph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh)


def write_edge_list(graph: UndirectedGraph, stream) -> None:
    """Write one ``u v`` line per edge, using labels when the graph has them."""
    names = graph.labels if graph.labels is not None else [str(i) for i in graph.ids]
    for a, b in graph.edges:
        stream.write(f"{names[a]} {names[b]}\n")


def save_edge_list(graph: UndirectedGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_edge_list(graph, fh)


@dataclass(frozen=True)
class Trace:
    """Timestamped edge stream sorted by time (stable).

    ``u`` and ``v`` index into ``labels``; repeated pairs are kept.
    """

    times: np.ndarray
    u: np.ndarray
    v: np.ndarray
    labels: tuple

    def __len__(self):
        return len(self.times)

    def records(self):
        return [(float(t), self.labels[a], self.labels[b]) for t, a, b in zip(self.times, self.u, self.v)]

    def snapshot(self, t: float) -> UndirectedGraph:
        """Graph of the distinct edges with timestamp <= t."""
        k = int(np.searchsorted(self.times, t, side="right"))
        n = len(self.labels)
        return UndirectedGraph.from_edges(self.u[:k], self.v[:k], ids=np.arange(n),
                                          labels=self.labels, n=n)


def parse_trace(source) -> Trace:
    intern = _Interner()
    t, u, v = [], [], []
    for lineno, line in _lines(source):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 3 tokens, found {len(parts)}", lineno)
        try:
            ts = float(parts[0])
        except ValueError:
            raise ParseError(f"non-numeric timestamp {parts[0]!r}", lineno) from None
        if ts != ts:
            raise ParseError("timestamp is NaN", lineno)
        t.append(ts)
        u.append(intern(parts[1]))
        v.append(intern(parts[2]))
    times = np.asarray(t, dtype=float)
    order = np.argsort(times, kind="stable")
    return Trace(times[order], np.asarray(u, np.int64)[order], np.asarray(v, np.int64)[order],
                 tuple(intern.tokens))


def read_trace(path) -> Trace:
    with open(path, "rb") as fh:
        return parse_trace(fh)
