import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphex.estimators import bipartite_M, count_N_p
from graphex.graph import graph_from_pairs
from graphex.models import (GGP, AlmostDense, BipartiteModelSpec, Dense, SparseNonSeparable,
                            SparseSeparable)
from graphex.sampler import bipartite_windows, core_window, p_sample, sample_bipartite, sample_unipartite
from graphex.theory import (expected_edges, expected_left_vertices, expected_M, expected_N_p,
                            expected_vertices)

from conftest import mean_se

MODELS = [Dense(), AlmostDense(), SparseSeparable(0.3), SparseNonSeparable(0.3), GGP(0.5),
          GGP(0.5, pair_rate=2.0, weight_floor=1e-5)]
# unit tests use 4 standard errors: two dozen fixed-seed comparisons run here
Z = 4.0


def test_determinism():
    for m in (Dense(), GGP(0.5)):
        a = sample_unipartite(m, 50, 1e-3, seed=7)
        b = sample_unipartite(m, 50, 1e-3, seed=7)
        assert a == b
        assert a.edges.tobytes() == b.edges.tobytes()
        assert a.latent.tobytes() == b.latent.tobytes()
        assert sample_unipartite(m, 50, 1e-3, seed=8) != a
    bm = BipartiteModelSpec("ggp", 0.5, 0.5)
    assert sample_bipartite(bm, 30, 30, seed=3) == sample_bipartite(bm, 30, 30, seed=3)


def test_bad_sizes():
    with pytest.raises(ValueError):
        sample_unipartite(Dense(), 0.0)
    with pytest.raises(ValueError):
        sample_bipartite(BipartiteModelSpec("dense"), 1.0, -1.0)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_latent_points_stay_in_window(model):
    window, core = core_window(model, 40.0, 1e-3)
    assert window[0] <= core[0] <= core[1] <= window[1]
    for seed in range(20):
        g = sample_unipartite(model, 40.0, 1e-3, seed=seed)
        assert np.all(g.latent >= window[0]) and np.all(g.latent <= window[1])
        assert np.all(g.degrees(True) >= 1)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_counts_match_quadrature(model):
    size, n = 20.0, 1000
    stats = {"n1": [], "nhalf": [], "v": [], "e": []}
    for seed in range(n):
        g = sample_unipartite(model, size, seed=seed)
        stats["n1"].append(count_N_p(g, 1.0))
        stats["nhalf"].append(count_N_p(g, 0.5))
        stats["v"].append(g.num_vertices)
        stats["e"].append(g.num_edges)
    oracle = {"n1": expected_N_p(model, 1.0, size), "nhalf": expected_N_p(model, 0.5, size),
              "v": expected_vertices(model, size), "e": expected_edges(model, size)}
    for key, values in stats.items():
        m, se = mean_se(values)
        assert abs(m - oracle[key]) <= Z * se, (key, m, oracle[key], se)


@pytest.mark.parametrize("model", [Dense(), SparseNonSeparable(0.3), GGP(0.5)], ids=lambda m: m.key())
def test_smoothed_count_identity(model):
    # E N_{p, a} = E N_{1, p a}
    a, p, n = 30.0, 0.5, 1000
    lhs = [count_N_p(sample_unipartite(model, a, seed=s), p) for s in range(n)]
    rhs = [count_N_p(sample_unipartite(model, p * a, seed=n + s), 1.0) for s in range(n)]
    (m1, s1), (m2, s2) = mean_se(lhs), mean_se(rhs)
    assert abs(m1 - m2) <= 3 * np.hypot(s1, s2)


def test_p_sample_extremes():
    g = sample_unipartite(GGP(0.5), 30, seed=1)
    assert p_sample(g, 1.0, seed=5) == g
    empty = p_sample(g, 0.0, seed=5)
    assert empty.num_vertices == 0 and empty.num_edges == 0
    with pytest.raises(ValueError):
        p_sample(g, 1.5)


def test_p_sample_keeps_lone_self_loop():
    g = graph_from_pairs([(0, 0), (1, 2)])
    kept = [p_sample(g, 0.5, seed=s) for s in range(64)]
    assert any(h.edge_set() == {frozenset({0})} for h in kept)


@given(st.lists(st.tuples(st.integers(0, 25), st.integers(0, 25)), min_size=1, max_size=80),
       st.floats(0, 1), st.floats(0, 1), st.integers(0, 2 ** 32))
@settings(max_examples=60, deadline=None)
def test_p_sample_subset_and_monotone(pairs, r1, r2, seed):
    r1, r2 = sorted((r1, r2))
    g = graph_from_pairs(pairs)
    a, b = p_sample(g, r1, seed=seed), p_sample(g, r2, seed=seed)
    assert b.edge_set() <= g.edge_set()
    # same seed means same uniforms, so more marks can only add edges
    assert a.edge_set() <= b.edge_set()


def test_p_sample_matches_smaller_size():
    model, n = GGP(0.5), 300
    sub = [p_sample(sample_unipartite(model, 60, seed=s), 0.5, seed=s) for s in range(n)]
    direct = [sample_unipartite(model, 30, seed=10_000 + s) for s in range(n)]
    for attr in ("num_vertices", "num_edges"):
        (m1, s1) = mean_se([getattr(g, attr) for g in sub])
        (m2, s2) = mean_se([getattr(g, attr) for g in direct])
        assert abs(m1 - m2) <= Z * np.hypot(s1, s2)


def test_bipartite_dense_edge_density():
    bm, s, n = BipartiteModelSpec("dense"), 50.0, 500
    vals = [sample_bipartite(bm, s, s, seed=i).num_edges / (s * s) for i in range(n)]
    m, se = mean_se(vals)
    assert abs(m - bm.mean_edge_density()) <= 3 * se


@pytest.mark.parametrize("bm", [BipartiteModelSpec("dense"), BipartiteModelSpec("sparse-sep", 0.3, 0.5),
                                BipartiteModelSpec("ggp", 0.5, 0.5)], ids=lambda b: b.key())
def test_bipartite_oracles(bm):
    s = a = 25.0
    ms, vs = [], []
    for i in range(600):
        g = sample_bipartite(bm, s, a, seed=i)
        ms.append(bipartite_M(g.left_degrees()))
        vs.append(g.num_left)
        if bm.left.hi != 1.0:
            wl = bipartite_windows(bm, s, a)[0]
            assert np.all((g.left_latent >= wl[0]) & (g.left_latent <= wl[1]))
    for vals, oracle in ((ms, expected_M(bm, s, a)), (vs, expected_left_vertices(bm, s, a))):
        m, se = mean_se(vals)
        assert abs(m - oracle) <= Z * se


def test_zero_truncated_poisson():
    from scipy import stats
    from graphex.sampler import _zero_truncated_poisson, make_rng
    rng = make_rng(3)
    for t in (1e-14, 1e-3, 0.5, 3.0):
        k = _zero_truncated_poisson(rng, np.full(100_000, t))
        assert k.min() >= 1
        ks = np.arange(1, 5)
        expected = stats.poisson.pmf(ks, t) / -np.expm1(-t)
        got = np.array([np.mean(k == j) for j in ks])
        assert np.all(np.abs(got - expected) <= 4 * np.sqrt(expected * (1 - expected) / len(k)) + 1e-12)


def test_bipartite_tiny_dust_rates():
    # very light dust once produced an overflowing partner count
    bm = BipartiteModelSpec("ggp", 0.7, 0.5)
    for seed in range(20):
        g = sample_bipartite(bm, 10.0, 100.0, seed=seed)
        assert g.num_edges > 0
