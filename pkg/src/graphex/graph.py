"""Finite graph containers and degree statistics.

Graphs are stored as canonical edge arrays over dense internal indices
``0..n-1``.  Each internal index carries an opaque integer vertex id (``ids``)
and, for simulated graphs, the latent coordinate of the underlying Poisson
point.  Graphs never contain isolated vertices: constructors drop them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _canonical_pairs(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    if len(lo) == 0:
        return np.empty((0, 2), dtype=np.int64)
    n = int(hi.max()) + 1
    key = np.unique(lo.astype(np.int64) * n + hi)
    return np.stack([key // n, key % n], axis=1)


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    """Simple undirected graph with optional self-loops.

    Use :meth:`from_edges` rather than the raw constructor; it canonicalises
    the edge set and removes isolated vertices.
    """

    edges: np.ndarray
    ids: np.ndarray
    latent: Optional[np.ndarray] = None
    labels: Optional[tuple] = None
    _nonself_degree: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        e = self.edges
        n = len(self.ids)
        deg = np.zeros(n, dtype=np.int64)
        if len(e):
            off = e[:, 0] != e[:, 1]
            np.add.at(deg, e[off, 0], 1)
            np.add.at(deg, e[off, 1], 1)
        object.__setattr__(self, "_nonself_degree", _readonly(deg))

    @classmethod
    def from_edges(cls, u, v, ids=None, latent=None, labels=None, n=None):
        """Build a graph from endpoint index arrays.

        ``u`` and ``v`` index into ``ids``/``latent``/``labels`` (all of length
        ``n``).  Duplicate and reversed pairs collapse; vertices without any
        incident edge are discarded and the survivors are renumbered in index
        order.
        """
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if n is None:
            if ids is not None:
                n = len(ids)
            elif latent is not None:
                n = len(latent)
            elif labels is not None:
                n = len(labels)
            else:
                n = int(max(u.max(initial=-1), v.max(initial=-1)) + 1)
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValueError("edge endpoint outside the vertex range")
        pairs = _canonical_pairs(u, v)

        used = np.zeros(n, dtype=bool)
        used[pairs.ravel()] = True
        remap = np.cumsum(used) - 1
        pairs = remap[pairs] if len(pairs) else pairs
        keep = np.flatnonzero(used)

        ids = keep.copy() if ids is None else np.asarray(ids, dtype=np.int64)[keep]
        if latent is not None:
            latent = _readonly(np.asarray(latent, dtype=float)[keep].copy())
        if labels is not None:
            labels = tuple(labels[i] for i in keep)
        return cls(
            edges=_readonly(np.ascontiguousarray(pairs, dtype=np.int64)),
            ids=_readonly(np.ascontiguousarray(ids)),
            latent=latent,
            labels=labels,
        )

    @classmethod
    def empty(cls):
        return cls.from_edges([], [], n=0)

    @property
    def num_vertices(self) -> int:
        return len(self.ids)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def self_loop_mask(self) -> np.ndarray:
        return self.edges[:, 0] == self.edges[:, 1]

    @property
    def nonself_degrees(self) -> np.ndarray:
        """Per-vertex count of distinct neighbours other than the vertex itself."""
        return self._nonself_degree

    def degrees(self, include_self_loops: bool = True) -> np.ndarray:
        deg = self._nonself_degree
        if not include_self_loops:
            return deg
        deg = deg.copy()
        loops = self.edges[self.self_loop_mask, 0]
        deg[loops] += 1
        return deg

    def index_of(self, vertex_id) -> int:
        hits = np.flatnonzero(self.ids == vertex_id)
        if len(hits) == 0:
            raise KeyError(f"unknown vertex id {vertex_id!r}")
        return int(hits[0])

    def induced_subgraph(self, keep: np.ndarray) -> "UndirectedGraph":
        """Subgraph on the vertices where the boolean mask ``keep`` is set.

        Vertex ids, latent coordinates and labels are carried over; vertices
        left without edges are dropped.
        """
        keep = np.asarray(keep, dtype=bool)
        if keep.shape != (self.num_vertices,):
            raise ValueError("mask length must equal the number of vertices")
        e = self.edges
        sel = keep[e[:, 0]] & keep[e[:, 1]]
        return UndirectedGraph.from_edges(
            e[sel, 0], e[sel, 1], ids=self.ids, latent=self.latent,
            labels=self.labels, n=self.num_vertices,
        )

    def edge_set(self) -> set:
        """Edges as a set of frozensets of vertex ids (for comparisons)."""
        ids = self.ids
        return {frozenset((int(ids[a]), int(ids[b]))) for a, b in self.edges}

    def __eq__(self, other):
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        same_latent = (self.latent is None and other.latent is None) or (
            self.latent is not None and other.latent is not None
            and np.array_equal(self.latent, other.latent))
        return (np.array_equal(self.edges, other.edges)
                and np.array_equal(self.ids, other.ids) and same_latent)

    __hash__ = None

    def __repr__(self):
        return (f"UndirectedGraph(|V|={self.num_vertices}, |E|={self.num_edges}, "
                f"self_loops={count_self_loops(self)})")


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Two-part graph; ``edges[:, 0]`` indexes the left part, ``edges[:, 1]`` the right."""

    edges: np.ndarray
    left_ids: np.ndarray
    right_ids: np.ndarray
    left_latent: Optional[np.ndarray] = None
    right_latent: Optional[np.ndarray] = None

    @classmethod
    def from_edges(cls, left, right, n_left, n_right, left_latent=None, right_latent=None):
        left = np.asarray(left, dtype=np.int64).ravel()
        right = np.asarray(right, dtype=np.int64).ravel()
        if left.shape != right.shape:
            raise ValueError("endpoint arrays differ in length")
        if len(left) and (left.min() < 0 or left.max() >= n_left
                          or right.min() < 0 or right.max() >= n_right):
            raise ValueError("edge endpoint outside the vertex range")
        key = np.unique(left * n_right + right)
        pairs = np.stack([key // n_right, key % n_right], axis=1) if n_right else np.empty((0, 2), np.int64)

        def compact(col, n, latent):
            used = np.zeros(n, dtype=bool)
            used[col] = True
            remap = np.cumsum(used) - 1
            keep = np.flatnonzero(used)
            lat = None if latent is None else _readonly(np.asarray(latent, float)[keep].copy())
            return remap[col], _readonly(keep), lat

        lcol, lids, llat = compact(pairs[:, 0], n_left, left_latent)
        rcol, rids, rlat = compact(pairs[:, 1], n_right, right_latent)
        e = np.ascontiguousarray(np.stack([lcol, rcol], axis=1), dtype=np.int64)
        return cls(_readonly(e), lids, rids, llat, rlat)

    @property
    def num_left(self) -> int:
        return len(self.left_ids)

    @property
    def num_right(self) -> int:
        return len(self.right_ids)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def left_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.num_left)

    def right_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.num_right)

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (np.array_equal(self.edges, other.edges)
                and np.array_equal(self.left_ids, other.left_ids)
                and np.array_equal(self.right_ids, other.right_ids))

    __hash__ = None


@dataclass(frozen=True)
class DegreeSummary:
    counts: dict
    include_self_loops: bool

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def non_self_degree(graph: UndirectedGraph, v) -> int:
    """Number of distinct neighbours of vertex id ``v`` other than ``v`` itself."""
    return int(graph.nonself_degrees[graph.index_of(v)])


def degree_summary(graph: UndirectedGraph, include_self_loops: bool = True) -> DegreeSummary:
    deg = graph.degrees(include_self_loops)
    values, counts = np.unique(deg, return_counts=True)
    return DegreeSummary({int(k): int(c) for k, c in zip(values, counts)}, include_self_loops)


def count_self_loops(graph: UndirectedGraph) -> int:
    return int(np.count_nonzero(graph.self_loop_mask))


def graph_from_pairs(pairs: Sequence) -> UndirectedGraph:
    """Convenience constructor from ``[(a, b), ...]`` with integer vertex ids."""
    pairs = list(pairs)
    if not pairs:
        return UndirectedGraph.empty()
    arr = np.asarray(pairs, dtype=np.int64)
    uniq, inv = np.unique(arr.ravel(), return_inverse=True)
    inv = inv.reshape(arr.shape)
    return UndirectedGraph.from_edges(inv[:, 0], inv[:, 1], ids=uniq)
