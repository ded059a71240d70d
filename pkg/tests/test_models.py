import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from graphex.models import (GGP, AlmostDense, BipartiteModelSpec, Dense, SparseNonSeparable,
                            SparseSeparable, eval_mu, eval_nu, make_model, truncation_bounds)

MODELS = [Dense(), AlmostDense(), SparseSeparable(0.3), SparseSeparable(0.7),
          SparseNonSeparable(0.3), SparseNonSeparable(0.6), GGP(0.5), GGP(0.2),
          GGP(0.5, pair_rate=2.0), GGP(0.5, pair_rate=2.0, weight_floor=1e-5)]


def against_rho(model, f, eps=1e-11):
    """Integral of f(y) rho(dy) by plain adaptive quadrature in log y (or y on [0, 1])."""
    m = model.measure
    if m.hi == 1.0:
        return integrate.quad(lambda y: f(y) * float(m.density(y)), 0, 1, epsrel=eps, epsabs=0, limit=200)[0]
    lo = math.log(m.lo) if m.lo > 0 else -80.0
    h = lambda t: f(math.exp(t)) * float(m.density(math.exp(t))) * math.exp(t)
    cuts = [lo] + [t for t in range(-40, 40, 4) if t > lo] + [60.0]
    return sum(integrate.quad(h, a, b, epsrel=eps, epsabs=0, limit=200)[0] for a, b in zip(cuts, cuts[1:]))


def window_grid(model, n=50):
    lo, hi = truncation_bounds(model, 100.0, 1e-3)
    if model.measure.hi == 1.0:
        return np.linspace(lo, hi, n)
    return np.geomspace(max(lo, 1e-12), hi, n)


def test_mu_examples():
    assert eval_mu(Dense(), 0) == 0.5
    assert eval_mu(AlmostDense(), 0) == 1.0
    assert eval_mu(GGP(0.5), 3) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ValueError):
        eval_mu(Dense(), -0.1)


def test_nu_examples():
    assert eval_nu(GGP(0.5), 0, 5) == 0
    assert eval_nu(Dense(), 0.5, 0.5) == pytest.approx(1 / 12, rel=1e-12)
    oracle = integrate.quad(lambda y: (0.5 * (1 - y)) ** 2, 0, 1)[0]
    assert eval_nu(Dense(), 0.5, 0.5) == pytest.approx(oracle, rel=1e-10)
    assert eval_nu(GGP(0.5), 3, 3) == pytest.approx(2 * (3 - math.sqrt(7)), rel=1e-14)
    assert eval_nu(GGP(0.5), 3, 3) == pytest.approx(0.70850, abs=5e-6)
    with pytest.raises(ValueError):
        eval_nu(Dense(), 0.1, -1)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_mu_matches_quadrature_on_window(model):
    for x in window_grid(model):
        ref = against_rho(model, lambda y: float(model.W(x, y)))
        assert eval_mu(model, x) == pytest.approx(ref, rel=1e-6, abs=1e-14)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_nu_matches_quadrature(model):
    xs = window_grid(model, 6)
    for x in xs:
        for y in xs[::2]:
            ref = against_rho(model, lambda z: float(model.W(x, z) * model.W(z, y)))
            assert eval_nu(model, x, y) == pytest.approx(ref, rel=1e-6, abs=1e-14)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_assumption_five_grid(model):
    xs = window_grid(model)
    mu = np.array([eval_mu(model, x) for x in xs])
    worst = 0.0
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            den = (mu[i] * mu[j]) ** model.eta
            nu = eval_nu(model, x, y)
            if den == 0:
                assert nu == 0
                continue
            worst = max(worst, nu / den)
    assert worst <= model.C * (1 + 1e-9)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.key())
def test_mu_nonincreasing_and_W_bounded(model):
    xs = window_grid(model, 200)
    mu = eval_mu(model, xs)
    assert np.all(mu >= 0)
    step = np.diff(mu)
    if model.kind == "ggp":
        # GGP weights grow with x, so its marginal increases
        assert np.all(step >= 0)
    else:
        assert np.all(step <= 1e-15 * mu[:-1])
    X, Y = np.meshgrid(xs[::10], xs[::10])
    w = model.W(X, Y)
    assert np.all((w >= 0) & (w <= 1))
    assert np.allclose(w, w.T, rtol=1e-15, atol=0)


def test_truncation_examples():
    assert truncation_bounds(Dense(), 100, 1e-3) == (0.0, 1.0)
    assert truncation_bounds(Dense(), 7, 0.5) == (0.0, 1.0)
    lo, hi = truncation_bounds(AlmostDense(), 100, 1e-3)
    assert lo == 0.0
    assert hi == pytest.approx(math.log(1e4 / 1e-3), rel=1e-5)
    with pytest.raises(ValueError):
        truncation_bounds(Dense(), 100, 0.0)


@pytest.mark.parametrize("model", MODELS[1:], ids=lambda m: m.key())
@pytest.mark.parametrize("size", [10.0, 100.0])
def test_truncation_omitted_mass_within_budget(model, size):
    budget = 1e-3
    lo, hi = truncation_bounds(model, size, budget)
    m = model.measure
    f = lambda y: size ** 2 * float(model.mu(y)) + size * float(model.loop_prob(y))
    outside = 0.0
    h = lambda t: f(math.exp(t)) * float(m.density(math.exp(t))) * math.exp(t)
    if hi < m.hi:
        t1 = math.log(hi)
        outside += sum(integrate.quad(h, t1 + k, t1 + k + 10, epsrel=1e-10, epsabs=0, limit=200)[0]
                       for k in range(0, 150, 10))
    if lo > m.lo:
        t0 = math.log(m.lo) if m.lo > 0 else -80.0
        outside += integrate.quad(h, t0, math.log(lo), epsrel=1e-10, epsabs=0, limit=200)[0]
    assert outside <= budget * (1 + 1e-9)


@given(st.floats(1e-8, 10), st.floats(1e-8, 10), st.sampled_from(MODELS[1:]), st.floats(1, 1e3))
@settings(max_examples=40, deadline=None)
def test_truncation_monotone_in_budget(b1, b2, model, size):
    b1, b2 = sorted((b1, b2))
    lo1, hi1 = truncation_bounds(model, size, b1)
    lo2, hi2 = truncation_bounds(model, size, b2)
    assert lo1 <= lo2 and hi2 <= hi1


def test_make_model_keys():
    assert isinstance(make_model("dense"), Dense)
    m = make_model("ggp:sigma=0.3,pair_rate=2,weight_floor=1e-5")
    assert (m.sigma, m.pair_rate, m.weight_floor) == (0.3, 2.0, 1e-5)
    assert make_model(m.key()) == m
    assert make_model("sparse-nonsep", sigma=0.4).sigma == 0.4
    with pytest.raises(ValueError):
        make_model("hollow")
    with pytest.raises(ValueError):
        make_model("ggp", sigma=1.0)


def test_sigma_and_tail_constant():
    # F(z) = rho{mu >= z} behaves like tail_constant * z^-sigma as z -> 0
    for model in (SparseSeparable(0.3), SparseNonSeparable(0.4), GGP(0.5), GGP(0.5, pair_rate=2.0)):
        z = 1e-7
        F = against_rho(model, lambda y: float(model.mu(y) >= z), eps=1e-8)
        assert F * z ** model.sigma == pytest.approx(model.tail_constant, rel=2e-2)


BIPARTITE = [BipartiteModelSpec("dense"), BipartiteModelSpec("sparse-sep", 0.3, 0.5),
             BipartiteModelSpec("ggp", 0.5, 0.5), BipartiteModelSpec("ggp", 0.3, 0.6)]


@pytest.mark.parametrize("bm", BIPARTITE, ids=lambda b: b.key())
def test_bipartite_mu_v_matches_quadrature(bm):
    R = bm.right
    for x in np.geomspace(1e-6, 20, 12) if R.hi != 1.0 else np.linspace(0, 1, 12):
        if R.hi == 1.0:
            ref = integrate.quad(lambda y: float(bm.W(x, y) * R.density(y)), 0, 1, epsrel=1e-11)[0]
        else:
            h = lambda t: float(bm.W(x, math.exp(t)) * R.density(math.exp(t))) * math.exp(t)
            cuts = [-80.0] + list(range(-40, 60, 4)) + [80.0]
            ref = sum(integrate.quad(h, a, b, epsrel=1e-11, epsabs=0, limit=200)[0]
                      for a, b in zip(cuts, cuts[1:]))
        assert float(bm.mu_v(x)) == pytest.approx(ref, rel=1e-6, abs=1e-14)


def test_bipartite_edge_density():
    assert BipartiteModelSpec("dense").mean_edge_density() == pytest.approx(0.25, rel=1e-12)
    bm = BipartiteModelSpec("ggp", 0.5, 0.5)
    ref = against_rho(GGP(0.5), lambda x: float(bm.mu_v(x)))
    assert bm.mean_edge_density() == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("bm", BIPARTITE[1:], ids=lambda b: b.key())
def test_bipartite_tail_constant(bm):
    z = 1e-7
    L = bm.left
    h = lambda t: float(bm.mu_v(math.exp(t)) >= z) * float(L.density(math.exp(t))) * math.exp(t)
    cuts = [-80.0] + list(range(-40, 60, 4)) + [80.0]
    F = sum(integrate.quad(h, a, b, epsrel=1e-9, epsabs=0, limit=200)[0] for a, b in zip(cuts, cuts[1:]))
    assert F * z ** bm.sigma_v == pytest.approx(bm.tail_constant, rel=2e-2)
