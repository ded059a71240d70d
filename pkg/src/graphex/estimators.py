"""Tail-index estimators computed from degree statistics."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .graph import BipartiteGraph, UndirectedGraph, count_self_loops


class UndefinedEstimateError(ArithmeticError):
    """The estimator formula is undefined for this graph (e.g. log|E| = 0)."""


@dataclass(frozen=True)
class EstimateReport:
    sigma_hat: float
    n1: float
    np: float
    p: float
    v_count: int
    e_count: int
    self_loop_count: int
    clamped: bool = False
    sigma_hat_clamped: Optional[float] = None
    estimator: str = "nsvr"

    def to_dict(self) -> dict:
        return asdict(self)


def _pow_int(base: float, k: np.ndarray) -> np.ndarray:
    """base**k for nonnegative integer k by binary exponentiation (exact to rounding)."""
    k = np.asarray(k, dtype=np.int64).copy()
    out = np.ones(k.shape)
    b = np.full(k.shape, float(base))
    while np.any(k):
        odd = (k & 1).astype(bool)
        out[odd] *= b[odd]
        k >>= 1
        b *= b
    return out


def _histogram(degrees: np.ndarray):
    return np.unique(np.asarray(degrees, dtype=np.int64), return_counts=True)


def n_p_from_degrees(degrees, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    k, c = _histogram(degrees)
    if p == 1.0:
        return float(c[k > 0].sum())
    return p * float(np.sum(c * (1.0 - _pow_int(1.0 - p, k))))


def count_N_p(graph: UndirectedGraph, p: float) -> float:
    """p * sum over vertices of 1 - (1-p)^d, d the number of non-self neighbours.

    For p = 1 this is the number of vertices with at least one non-self
    neighbour.
    """
    return n_p_from_degrees(graph.nonself_degrees, p)


def _nsvr(n1: float, npv: float, p: float) -> float:
    if npv < 1.0:
        return 0.0
    return (math.log(n1) - math.log(npv)) / (-math.log(p)) - 1.0


def estimate_sigma_nsvr(graph: UndirectedGraph, p: float = 0.5, clamp: bool = False) -> EstimateReport:
    """sigma_hat = (log N_1 - log N_p) / (-log p) - 1, or 0 when N_p < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    deg = graph.nonself_degrees
    n1 = n_p_from_degrees(deg, 1.0)
    npv = n_p_from_degrees(deg, p)
    s = _nsvr(n1, npv, p)
    return EstimateReport(
        sigma_hat=s, n1=n1, np=npv, p=p,
        v_count=graph.num_vertices, e_count=graph.num_edges,
        self_loop_count=count_self_loops(graph),
        clamped=clamp, sigma_hat_clamped=min(max(s, 0.0), 1.0) if clamp else None,
    )


def sigma_cr_from_counts(v_count: int, e_count: int) -> float:
    if v_count < 1:
        raise UndefinedEstimateError("CR estimate needs at least one vertex")
    if e_count <= 1:
        raise UndefinedEstimateError("CR estimate needs at least two edges")
    return 2.0 * math.log(v_count) / math.log(e_count) - 1.0


CR_EDGE_COUNTS = ("unordered", "adjacency")


def cr_edge_count(graph: UndirectedGraph, edge_count: str = "unordered") -> int:
    """Edge count used by the CR estimator.

    ``unordered`` counts each edge once (self-loops included); ``adjacency``
    counts nonzero entries of the symmetric adjacency matrix, i.e. each
    non-loop edge twice and each self-loop once.
    """
    if edge_count == "unordered":
        return graph.num_edges
    if edge_count == "adjacency":
        return 2 * graph.num_edges - count_self_loops(graph)
    raise ValueError(f"edge_count must be one of {CR_EDGE_COUNTS}")


def estimate_sigma_cr(graph: UndirectedGraph, edge_count: str = "unordered") -> float:
    """2 log|V| / log|E| - 1, with self-loops counted as edges."""
    return sigma_cr_from_counts(graph.num_vertices, cr_edge_count(graph, edge_count))


def bipartite_M(degrees) -> float:
    """(1/2) * sum of 1 - 2^{-deg} over the vertices of one part."""
    return n_p_from_degrees(degrees, 0.5)


def estimate_sigma_bipartite(bgraph: BipartiteGraph, paper_literal: bool = False) -> EstimateReport:
    """Tail-index of the left part with p = 1/2.

    Returns (log|V| - log M) / log 2 - 1; ``paper_literal`` drops the final
    ``- 1``, which makes the estimate converge to 1 + sigma instead of sigma.
    """
    if bgraph.num_left == 0 or bgraph.num_right == 0:
        raise ValueError("both parts must be non-empty")
    deg = bgraph.left_degrees()
    v = float(bgraph.num_left)
    m = bipartite_M(deg)
    if m < 1.0:
        s = 0.0
    else:
        s = (math.log(v) - math.log(m)) / math.log(2.0)
        if not paper_literal:
            s -= 1.0
    return EstimateReport(
        sigma_hat=s, n1=v, np=m, p=0.5, v_count=bgraph.num_left,
        e_count=bgraph.num_edges, self_loop_count=0,
        estimator="bipartite-literal" if paper_literal else "bipartite",
    )
