"""Quadrature oracles for expectations of graph statistics.

All integrals are against the base measure of a model over its whole latent
domain.  On the half line the integration variable is ``t = log x`` and the
range is cut into unit pieces so that the kink where ``alpha * mu(x)`` crosses
one is always resolved.  Any object exposing ``mu``, ``sigma`` and
``measure`` (with ``lo``, ``hi`` and ``density``) can be used as a model.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

DEFAULT_REL_TOL = 1e-8
SUBDIVISION_CAP = 10_000


class QuadratureError(ArithmeticError):
    """Raised when adaptive quadrature fails to reach the requested tolerance."""


def _measure(model):
    return model.measure if hasattr(model, "measure") else model.left


def _marginal(model):
    return model.mu_v if hasattr(model, "mu_v") else model.mu


def _pieces(measure):
    lo, hi = measure.lo, measure.hi
    if math.isinf(hi):
        # exponential tails vanish long before t = 7 (x ~ 1100)
        light_tail = getattr(measure, "light_tail", False)
        top = 7.0 if light_tail else 12.0
        start = -math.inf if lo <= 0.0 else math.log(lo)
        knots = [start] + [t for t in np.arange(-60.0, top + 0.5, 1.0) if t > start]
        if not light_tail:
            knots.append(math.inf)
        return "log", knots
    return "lin", list(np.linspace(lo, hi, 9))


def integrate_measure(model, f, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Integral of the scalar function ``f(x)`` against the model's base measure."""
    if rel_tol < 1e-12:
        raise ValueError("rel_tol must be at least 1e-12")
    m = _measure(model)
    mode, knots = _pieces(m)
    if mode == "log":
        def h(t):
            if t > 700.0:
                return 0.0
            x = math.exp(t)
            if x == 0.0:
                return 0.0
            if hasattr(m, "log_density"):
                return f(x) * math.exp(float(m.log_density(x)) + t)
            return f(x) * float(m.density(x)) * x
    else:
        def h(x):
            return f(x) * float(m.density(x))

    total, err = 0.0, 0.0
    limit = max(50, SUBDIVISION_CAP // len(knots))
    for a, b in zip(knots[:-1], knots[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e, *rest = integrate.quad(h, a, b, epsabs=0.0, epsrel=rel_tol / 10,
                                           limit=limit, full_output=1)
        total += val
        err += e
    if not math.isfinite(total) or err > rel_tol * abs(total) + 1e-300:
        raise QuadratureError(
            f"quadrature did not converge: value={total!r}, abs_err={err!r}, rel_tol={rel_tol}")
    return total


def _mu_scalar(model):
    mu = _marginal(model)
    return lambda x: float(mu(x))


def expected_N_p(model, p: float, size: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E N_{p, size} = p size * integral of (1 - exp(-p size mu)) d rho."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if not size > 0:
        raise ValueError("size must be positive")
    mu = _mu_scalar(model)
    a = p * size
    return a * integrate_measure(model, lambda x: -math.expm1(-a * mu(x)), rel_tol)


def expected_vertices(model, size: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E |V_size|, counting vertices whose only edge is a self-loop."""
    mu = _mu_scalar(model)
    loop = lambda x: float(model.loop_prob(x)) if hasattr(model, "loop_prob") else float(model.W(x, x))
    f = lambda x: 1.0 - (1.0 - loop(x)) * math.exp(-size * mu(x))
    return size * integrate_measure(model, f, rel_tol)


def expected_edges(model, size: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E |E_size|: unordered pairs plus self-loops."""
    mu = _mu_scalar(model)
    loop = lambda x: float(model.loop_prob(x)) if hasattr(model, "loop_prob") else float(model.W(x, x))
    pairs = integrate_measure(model, mu, rel_tol)
    loops = integrate_measure(model, loop, rel_tol)
    return size ** 2 / 2 * pairs + size * loops


def bias_b(model, p: float, size: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Deterministic bias log(E N_1 / E N_p) / (-log p) - 1 - sigma."""
    n1 = expected_N_p(model, 1.0, size, rel_tol)
    npv = expected_N_p(model, p, size, rel_tol)
    return math.log(n1 / npv) / (-math.log(p)) - 1.0 - model.sigma


def gamma_value(model, p: float, size: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    mu = _mu_scalar(model)
    num = integrate_measure(model, lambda x: -math.expm1(-p * size * mu(x)), rel_tol)
    den = integrate_measure(model, lambda x: -math.expm1(-size * mu(x)), rel_tol)
    return abs(num / (p ** model.sigma * den) - 1.0)


@dataclass(frozen=True)
class BiasDiagnostics:
    sizes: list
    gamma_values: list
    bias_values: list
    slope: float

    def rows(self):
        return list(zip(self.sizes, self.gamma_values, self.bias_values))


def loglog_slope(sizes, values) -> float:
    """OLS slope of log(value) on log(size) over the upper half of the grid."""
    sizes = np.asarray(sizes, float)
    values = np.asarray(values, float)
    half = len(sizes) // 2
    xs, ys = np.log(sizes[half:]), np.log(values[half:])
    if len(xs) < 2:
        raise ValueError("need at least four sizes to fit a slope")
    return float(np.polyfit(xs, ys, 1)[0])


def gamma_diagnostic(model, p: float, sizes, rel_tol: float = DEFAULT_REL_TOL) -> BiasDiagnostics:
    sizes = [float(s) for s in sizes]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be increasing")
    gam = [gamma_value(model, p, s, rel_tol) for s in sizes]
    bias = [bias_b(model, p, s, rel_tol) for s in sizes]
    return BiasDiagnostics(sizes, gam, bias, loglog_slope(sizes, gam))


# ---------------------------------------------------------------------------
# bipartite oracles


def expected_M(bmodel, s: float, alpha: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E M_{s, alpha} = (s/2) * integral of (1 - exp(-(alpha/2) mu_v)) d rho."""
    mu = _mu_scalar(bmodel)
    return s / 2 * integrate_measure(bmodel, lambda x: -math.expm1(-alpha / 2 * mu(x)), rel_tol)


def expected_left_vertices(bmodel, s: float, alpha: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    mu = _mu_scalar(bmodel)
    return s * integrate_measure(bmodel, lambda x: -math.expm1(-alpha * mu(x)), rel_tol)


def expected_Dk(bmodel, s: float, alpha: float, k: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Expected number of left vertices with degree exactly ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    mu = _mu_scalar(bmodel)
    lg = special.gammaln(k + 1)

    def f(x):
        lam = alpha * mu(x)
        if lam <= 0:
            return 0.0
        return math.exp(k * math.log(lam) - lam - lg)

    return s * integrate_measure(bmodel, f, rel_tol)
