"""Sampling finite graphex graphs and p-sampling existing graphs.

A graph at size ``alpha`` is generated in two tiers.  Latent points in a
*core* window are drawn explicitly from the Poisson process; every core pair
whose dominating weight ``g(x) g(y)`` exceeds 1/2 is tossed directly, and the
remaining pairs are reached by thinning a Poisson stream of candidate pairs
drawn proportionally to ``g``.  Points outside the core carry so little weight
that each touches the core through at most a handful of edges; they are
generated only when a candidate edge lands on them.  The only approximation
is the truncation: edges touching latent points outside ``truncation_bounds``
and edges between two low-weight points are omitted, and both are bounded in
expectation by the budget.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .graph import BipartiteGraph, UndirectedGraph
from .models import BipartiteModelSpec, ModelSpec, _bisect, truncation_bounds

KAPPA = 2.0  # candidate-pair rate multiplier; needs 1 - exp(-KAPPA t) >= t for t <= 1/2
HEAVY = 0.5

TAGS = {"sample": 0, "bipartite": 1, "psample": 2, "replicate": 3}


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for the stream labelled by ``(seed, *keys)``."""
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


# ---------------------------------------------------------------------------
# core windows


def _dust_ok(measure, size, lo, hi, budget, g_other_max):
    m = measure.g_mass(lo, hi)
    m2 = measure.g2_mass(lo, hi)
    return 0.5 * (size * m) ** 2 + size * m2 <= budget and (
        g_other_max * float(measure.g((hi if measure.dust_side == "lower" else lo))) <= HEAVY)


@lru_cache(maxsize=1024)
def core_window(model: ModelSpec, size: float, budget: float = 1e-3) -> tuple:
    """Split the truncation window into (window, core) for the two-tier sampler.

    Points of the window outside the core are "dust": pairs of dust points
    are dropped, and their expected number of edges plus dust self-loops is
    at most ``budget / 2``.
    """
    m = model.measure
    window = truncation_bounds(model, size, budget / 2)
    lo, hi = window
    if m.dust_side is None:
        return window, window
    if m.dust_side == "upper":
        gmax = float(m.g(lo))
        # smallest X with [X, hi] acceptable as dust, searched over t = log1p(X)
        t = _bisect(lambda t: _dust_ok(m, size, math.expm1(t), hi, budget / 2, gmax),
                    math.log1p(lo), math.log1p(hi))
        return window, (lo, min(math.expm1(t), hi))
    gmax = float(m.g(hi))
    # largest X with [lo, X] acceptable as dust, searched over t = -log(X)
    t = _bisect(lambda t: _dust_ok(m, size, lo, math.exp(-t), budget / 2, gmax),
                -math.log(hi), -math.log(lo))
    return window, (max(math.exp(-t), lo), hi)


def _dust_interval(measure, window, core):
    if measure.dust_side == "upper":
        return core[1], window[1]
    if measure.dust_side == "lower":
        return window[0], core[0]
    return None


# ---------------------------------------------------------------------------
# pair machinery


def _weighted_index(rng, weights_cdf, n):
    u = rng.random(n) * weights_cdf[-1]
    return np.minimum(np.searchsorted(weights_cdf, u, side="right"), len(weights_cdf) - 1)


def _heavy_pairs_sym(g):
    """All unordered pairs i < j (as index arrays) with g[i] * g[j] > HEAVY."""
    if len(g) < 2:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    gmax = g.max()
    # only points that could pair heavily with the heaviest one take part
    cand = np.flatnonzero(g * gmax > HEAVY * (1 - 1e-12))
    order = cand[np.argsort(-g[cand], kind="stable")]
    gs = g[order]
    with np.errstate(divide="ignore"):
        thr = np.where(gs > 0, HEAVY / gs, np.inf) * (1 - 1e-12)
    lim = np.searchsorted(-gs, -thr, side="left")  # number of gs strictly above thr
    first = np.arange(len(gs)) + 1
    cnt = np.maximum(lim - first, 0)
    if cnt.sum() == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    a = np.repeat(np.arange(len(gs)), cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    b = np.repeat(first, cnt) + offs
    i, j = order[a], order[b]
    keep = g[i] * g[j] > HEAVY
    return i[keep], j[keep]


def _heavy_pairs_cross(g, h):
    """All pairs (i, j) with g[i] * h[j] > HEAVY."""
    if len(g) == 0 or len(h) == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    cand = np.flatnonzero(h * g.max() > HEAVY * (1 - 1e-12))
    order = cand[np.argsort(-h[cand], kind="stable")]
    hs = h[order]
    with np.errstate(divide="ignore"):
        thr = np.where(g > 0, HEAVY / g, np.inf) * (1 - 1e-12)
    cnt = np.searchsorted(-hs, -thr, side="left")
    if cnt.sum() == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    i = np.repeat(np.arange(len(g)), cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    j = order[offs]
    keep = g[i] * h[j] > HEAVY
    return i[keep], j[keep]


def _unique_pairs(a, b, nb):
    """Distinct (a, b) pairs, sorted; faster than np.unique(axis=0)."""
    key = np.unique(a.astype(np.int64) * nb + b)
    return key // nb, key % nb


def _thin(rng, p_edge, p_bound):
    return rng.random(len(p_edge)) * p_bound < p_edge


def _zero_truncated_poisson(rng, t):
    """Poisson(t) conditioned on being at least 1."""
    t = np.asarray(t, float)
    out = np.ones(len(t), dtype=np.int64)
    small = t < 1.0
    # sequential inversion; P(K = 1 | K >= 1) = t e^-t / (1 - e^-t) needs no cancellation
    ts = t[small]
    u = rng.random(len(ts))
    pmf = ts * np.exp(-ts) / -np.expm1(-ts)
    cum = pmf.copy()
    k = np.ones(len(ts), dtype=np.int64)
    active = u > cum
    while np.any(active):
        k[active] += 1
        pmf[active] *= ts[active] / k[active]
        cum[active] += pmf[active]
        active &= (u > cum) & (pmf > 0)
    out[small] = k
    # rejection: each draw is accepted with probability 1 - e^-t >= 0.63
    idx = np.flatnonzero(~small)
    while len(idx):
        draw = rng.poisson(t[idx])
        ok = draw > 0
        out[idx[ok]] = draw[ok]
        idx = idx[~ok]
    return out


def _dust_against(rng, measure, size, interval, core_x, core_g, W, dust_first=True, core_cdf=None):
    """Edges between dust of ``measure`` on ``interval`` and a fixed set of core points.

    Returns (dust latent coordinates, dust index, core index) for accepted
    edges; only dust points that carry at least one edge are materialised.
    """
    empty = (np.empty(0), np.empty(0, np.int64), np.empty(0, np.int64))
    if interval is None or len(core_g) == 0 or interval[0] >= interval[1]:
        return empty
    G = float(core_g.sum()) if core_cdf is None else float(core_cdf[-1])
    a = KAPPA * G
    n = rng.poisson(size * a * measure.g_mass(*interval))
    if n == 0 or G == 0:
        return empty
    x = measure.sample_g(rng, n, *interval)
    t = a * measure.g(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        acc_p = np.where(t > 0, -np.expm1(-t) / t, 0.0)
    keep = rng.random(n) < acc_p
    x, t = x[keep], t[keep]
    if len(x) == 0:
        return empty
    cnt = _zero_truncated_poisson(rng, t)
    owner = np.repeat(np.arange(len(x)), cnt)
    cdf = np.cumsum(core_g) if core_cdf is None else core_cdf
    partner = _weighted_index(rng, cdf, len(owner))
    owner, partner = _unique_pairs(owner, partner, len(core_g))
    gd = measure.g(x)[owner]
    w = W(x[owner], core_x[partner]) if dust_first else W(core_x[partner], x[owner])
    bound = -np.expm1(-KAPPA * gd * core_g[partner])
    ok = _thin(rng, w, bound)
    owner, partner = owner[ok], partner[ok]
    used, owner = np.unique(owner, return_inverse=True)
    return x[used], owner.astype(np.int64), partner


def _sample_core(rng, measure, size, core):
    mass = size * measure.mass(*core)
    if not math.isfinite(mass):
        raise RuntimeError("non-finite base-measure mass on the sampling window")
    k = rng.poisson(mass)
    return measure.sample(rng, k, *core)


# ---------------------------------------------------------------------------
# public samplers


def sample_unipartite(model: ModelSpec, size: float, budget: float = 1e-3, seed: int = 0,
                      rng: np.random.Generator | None = None) -> UndirectedGraph:
    """Draw G_size from ``model``; deterministic for fixed arguments.

    Self-loops are included with probability ``model.loop_prob(x)``.  The
    returned graph records the latent coordinate of every vertex.
    """
    if not size > 0:
        raise ValueError("size must be positive")
    if rng is None:
        rng = make_rng(seed, TAGS["sample"])
    m = model.measure
    window, core = core_window(model, float(size), float(budget))
    x = _sample_core(rng, m, size, core)
    g = m.g(x)
    n = len(x)

    # loop_prob <= g**2, so it is only evaluated where the uniform could succeed
    u = rng.random(n)
    maybe = np.flatnonzero(u < g * g)
    loops = maybe[u[maybe] < model.loop_prob(x[maybe])]

    hi_i, hi_j = _heavy_pairs_sym(g)
    hk = rng.random(len(hi_i)) < model.W(x[hi_i], x[hi_j])
    hi_i, hi_j = hi_i[hk], hi_j[hk]

    cdf = np.cumsum(g) if n else np.zeros(1)
    G = float(cdf[-1])
    n_cand = rng.poisson(KAPPA * G * G / 2) if n else 0
    if n_cand:
        ci = _weighted_index(rng, cdf, n_cand)
        cj = _weighted_index(rng, cdf, n_cand)
        sel = (ci != cj) & (g[ci] * g[cj] <= HEAVY)
        ci, cj = ci[sel], cj[sel]
        li, lj = _unique_pairs(np.minimum(ci, cj), np.maximum(ci, cj), n)
        ok = _thin(rng, model.W(x[li], x[lj]), -np.expm1(-KAPPA * g[li] * g[lj]))
        li, lj = li[ok], lj[ok]
    else:
        li = lj = np.empty(0, np.int64)

    dx, d_own, d_core = _dust_against(rng, m, size, _dust_interval(m, window, core), x, g, model.W,
                                      core_cdf=cdf if n else None)

    latent = np.concatenate([x, dx])
    u = np.concatenate([loops, hi_i, li, n + d_own])
    v = np.concatenate([loops, hi_j, lj, d_core])
    return UndirectedGraph.from_edges(u, v, latent=latent, n=len(latent))


def _side_window(measure, weight, budget):
    """Latent window for one side of a bipartite model.

    ``weight`` multiplies the g-mass outside the window to bound the expected
    number of omitted edges.
    """
    lo, hi = measure.lo, measure.hi
    if measure.dust_side is None:
        return (lo, hi)
    side = budget / 2 if measure.dust_side == "lower" else budget
    if measure.dust_side == "lower":
        t = _bisect(lambda t: weight * measure.g_mass(0.0, math.exp(-t)) <= side, -5.0, 745.0)
        lo = math.exp(-t)
    t = _bisect(lambda t: weight * measure.g_mass(math.expm1(t), math.inf) <= side, 0.0, 700.0)
    return (lo, math.expm1(t))


def _side_core(measure, size, window, dust_mass_cap, g_other_max):
    """Core window leaving dust with size * g-mass <= dust_mass_cap."""
    lo, hi = window
    if measure.dust_side is None:
        return window
    if measure.dust_side == "upper":
        ok = lambda t: (size * measure.g_mass(math.expm1(t), hi) <= dust_mass_cap
                        and g_other_max * float(measure.g(math.expm1(t))) <= HEAVY)
        t = _bisect(ok, math.log1p(lo), math.log1p(hi))
        return (lo, min(math.expm1(t), hi))
    ok = lambda t: (size * measure.g_mass(lo, math.exp(-t)) <= dust_mass_cap
                    and g_other_max * float(measure.g(math.exp(-t))) <= HEAVY)
    t = _bisect(ok, -math.log(hi), -math.log(lo))
    return (max(math.exp(-t), lo), hi)


@lru_cache(maxsize=256)
def bipartite_windows(model: BipartiteModelSpec, s: float, alpha: float, budget: float = 1e-3):
    """(left window, left core, right window, right core) for ``sample_bipartite``."""
    L, R = model.left, model.right
    HL = L.g_mass(L.lo, L.hi)
    HR = R.g_mass(R.lo, R.hi)
    wl = _side_window(L, s * alpha * HR, budget / 4)
    wr = _side_window(R, s * alpha * HL, budget / 4)
    gl_max = float(L.g(wl[1] if L.dust_side == "lower" else wl[0]))
    gr_max = float(R.g(wr[1] if R.dust_side == "lower" else wr[0]))
    if L.dust_side is None and R.dust_side is None:
        return wl, wl, wr, wr
    # dust-dust bound: (s m_L)(alpha m_R) <= budget / 2; pick the split that
    # minimises the expected number of explicit points
    cap = budget / 2
    best = None
    for theta in np.logspace(-12, 0, 97) * math.sqrt(cap) * 1e6:
        cl = _side_core(L, s, wl, theta, gr_max)
        cr = _side_core(R, alpha, wr, cap / theta, gl_max)
        cost = s * L.mass(*cl) + alpha * R.mass(*cr)
        if best is None or cost < best[0]:
            best = (cost, cl, cr)
    return wl, best[1], wr, best[2]


def sample_bipartite(model: BipartiteModelSpec, s: float, alpha: float, budget: float = 1e-3,
                     seed: int = 0, rng: np.random.Generator | None = None) -> BipartiteGraph:
    """Draw the bipartite graph G_{s, alpha}; the left part has size ``s``."""
    if not (s > 0 and alpha > 0):
        raise ValueError("sizes must be positive")
    if rng is None:
        rng = make_rng(seed, TAGS["bipartite"])
    L, R = model.left, model.right
    wl, cl, wr, cr = bipartite_windows(model, float(s), float(alpha), float(budget))
    x = _sample_core(rng, L, s, cl)
    y = _sample_core(rng, R, alpha, cr)
    g, h = L.g(x), R.g(y)

    hi_i, hi_j = _heavy_pairs_cross(g, h)
    hk = rng.random(len(hi_i)) < model.W(x[hi_i], y[hi_j])
    hi_i, hi_j = hi_i[hk], hi_j[hk]

    G, H = float(g.sum()), float(h.sum())
    n_cand = rng.poisson(KAPPA * G * H) if len(x) and len(y) else 0
    if n_cand:
        ci = _weighted_index(rng, np.cumsum(g), n_cand)
        cj = _weighted_index(rng, np.cumsum(h), n_cand)
        sel = g[ci] * h[cj] <= HEAVY
        li, lj = _unique_pairs(ci[sel], cj[sel], len(y))
        ok = _thin(rng, model.W(x[li], y[lj]), -np.expm1(-KAPPA * g[li] * h[lj]))
        li, lj = li[ok], lj[ok]
    else:
        li = lj = np.empty(0, np.int64)

    dxl, dl_own, dl_core = _dust_against(rng, L, s, _dust_interval(L, wl, cl), y, h, model.W)
    dxr, dr_own, dr_core = _dust_against(rng, R, alpha, _dust_interval(R, wr, cr), x, g,
                                         model.W, dust_first=False)

    left_lat = np.concatenate([x, dxl])
    right_lat = np.concatenate([y, dxr])
    left = np.concatenate([hi_i, li, len(x) + dl_own, dr_core])
    right = np.concatenate([hi_j, lj, dl_core, len(y) + dr_own])
    return BipartiteGraph.from_edges(left, right, len(left_lat), len(right_lat),
                                     left_latent=left_lat, right_latent=right_lat)


def p_sample(graph: UndirectedGraph, r: float, seed: int = 0,
             rng: np.random.Generator | None = None) -> UndirectedGraph:
    """Keep each vertex independently with probability ``r`` and the edges among kept vertices."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    if rng is None:
        rng = make_rng(seed, TAGS["psample"])
    marks = rng.random(graph.num_vertices) < r
    return graph.induced_subgraph(marks)
