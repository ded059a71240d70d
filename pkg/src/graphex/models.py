"""Canonical graphex models.

Every model is a frozen dataclass combining a base measure on the latent
space with a graphon.  Alongside the graphon ``W`` each model exposes its
marginal ``mu``, two-point correlation ``nu``, and a separable dominating
function ``g`` with ``W(x, y) <= g(x) g(y)`` and ``loop_prob(x) <= g(x)**2``.
The sampler relies on ``g`` to generate candidate edges without visiting all
pairs, and on the closed-form masses below to size its Poisson draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

MODEL_KEYS = ("dense", "almost-dense", "sparse-sep", "sparse-nonsep", "ggp")


# ---------------------------------------------------------------------------
# base measures


def _reg_gamma_diff(s, a, b):
    """P(s, b) - P(s, a) for the regularised lower incomplete gamma P."""
    if a >= 1.0:
        qb = 0.0 if math.isinf(b) else special.gammaincc(s, b)
        return special.gammaincc(s, a) - qb
    pb = 1.0 if math.isinf(b) else special.gammainc(s, b)
    return pb - special.gammainc(s, a)


@dataclass(frozen=True)
class UnitInterval:
    """Lebesgue measure on [0, 1] with bound g(x) = 1 - x."""

    lo: float = 0.0
    hi: float = 1.0
    dust_side = None

    def density(self, x):
        x = np.asarray(x, float)
        return ((x >= 0) & (x <= 1)).astype(float)

    def mass(self, a, b):
        return max(0.0, min(b, 1.0) - max(a, 0.0))

    def g(self, x):
        return np.clip(1.0 - np.asarray(x, float), 0.0, 1.0)

    def g_mass(self, a, b):
        return (1 - a) ** 2 / 2 - (1 - b) ** 2 / 2

    def g2_mass(self, a, b):
        return (1 - a) ** 3 / 3 - (1 - b) ** 3 / 3

    def sample(self, rng, n, a, b):
        return rng.uniform(a, b, size=n)

    def sample_g(self, rng, n, a, b):
        # density proportional to (1 - x) on [a, b]
        ua, ub = (1 - a) ** 2, (1 - b) ** 2
        return 1 - np.sqrt(ub + rng.random(n) * (ua - ub))


@dataclass(frozen=True)
class ExponentialTail:
    """Lebesgue measure on [0, inf) with bound g(x) = exp(-x)."""

    lo: float = 0.0
    hi: float = math.inf
    dust_side = "upper"
    light_tail = True

    def density(self, x):
        return (np.asarray(x, float) >= 0).astype(float)

    def mass(self, a, b):
        return b - a

    def g(self, x):
        return np.exp(-np.asarray(x, float))

    def g_mass(self, a, b):
        return math.exp(-a) - math.exp(-b)

    def g2_mass(self, a, b):
        return (math.exp(-2 * a) - math.exp(-2 * b)) / 2

    def sample(self, rng, n, a, b):
        return rng.uniform(a, b, size=n)

    def sample_g(self, rng, n, a, b):
        span = -math.expm1(-(b - a))
        return a - np.log1p(-rng.random(n) * span)


@dataclass(frozen=True)
class PowerTail:
    """Lebesgue measure on [0, inf) with bound g(x) = (1 + scale*x)**(-k), k > 1."""

    k: float
    scale: float = 1.0
    lo: float = 0.0
    hi: float = math.inf
    dust_side = "upper"

    def density(self, x):
        return (np.asarray(x, float) >= 0).astype(float)

    def mass(self, a, b):
        return b - a

    def g(self, x):
        return (1.0 + self.scale * np.asarray(x, float)) ** (-self.k)

    def _power_mass(self, k, a, b):
        s = self.scale
        tb = 0.0 if math.isinf(b) else (1 + s * b) ** (1 - k)
        return ((1 + s * a) ** (1 - k) - tb) / (s * (k - 1))

    def g_mass(self, a, b):
        return self._power_mass(self.k, a, b)

    def g2_mass(self, a, b):
        return self._power_mass(2 * self.k, a, b)

    def sample(self, rng, n, a, b):
        return rng.uniform(a, b, size=n)

    def sample_g(self, rng, n, a, b):
        k, s = self.k, self.scale
        ta = (1 + s * a) ** (1 - k)
        tb = 0.0 if math.isinf(b) else (1 + s * b) ** (1 - k)
        t = ta - rng.random(n) * (ta - tb)
        return (t ** (1 / (1 - k)) - 1) / s


@dataclass(frozen=True)
class GGPLevy:
    """Generalised gamma Levy measure x^(-1-sigma) e^(-x) / Gamma(1-sigma) dx.

    The separable bound is g(x) = gscale * x.  A positive ``lo`` restricts the
    measure to [lo, inf).
    """

    sigma: float
    gscale: float = 1.0
    lo: float = 0.0
    hi: float = math.inf
    dust_side = "lower"
    light_tail = True

    def density(self, x):
        return np.exp(self.log_density(x))

    def log_density(self, x):
        s = self.sigma
        x = np.asarray(x, float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ld = -(1 + s) * np.log(x) - x - special.gammaln(1 - s)
        return np.where((x > 0) & (x >= self.lo), ld, -np.inf)

    def _upper_incomplete_neg(self, a):
        # Gamma(-sigma, a) * sigma / Gamma(1 - sigma)
        s = self.sigma
        if math.isinf(a):
            return 0.0
        return a ** (-s) * math.exp(-a) / special.gamma(1 - s) - special.gammaincc(1 - s, a)

    def mass(self, a, b):
        a = max(a, self.lo)
        if a <= 0:
            return math.inf
        if b <= a:
            return 0.0
        return (self._upper_incomplete_neg(a) - self._upper_incomplete_neg(b)) / self.sigma

    def g(self, x):
        return self.gscale * np.asarray(x, float)

    def moment_mass(self, k, a, b):
        """Integral of x**k against the measure over [a, b], k >= 1."""
        s = self.sigma
        a = max(a, self.lo)
        if b <= a:
            return 0.0
        coef = math.exp(special.gammaln(k - s) - special.gammaln(1 - s))
        return coef * _reg_gamma_diff(k - s, a, b)

    def g_mass(self, a, b):
        return self.gscale * self.moment_mass(1, a, b)

    def g2_mass(self, a, b):
        return self.gscale ** 2 * self.moment_mass(2, a, b)

    def sample(self, rng, n, a, b):
        """Rejection from the truncated Pareto(sigma) envelope, accepting with e^{-(x-a)}."""
        s = self.sigma
        pa = a ** (-s)
        pb = 0.0 if math.isinf(b) else b ** (-s)
        out = np.empty(n)
        filled = 0
        while filled < n:
            m = int((n - filled) * 1.1) + 16
            x = (pa - rng.random(m) * (pa - pb)) ** (-1 / s)
            x = x[rng.random(m) < np.exp(-(x - a))]
            take = min(len(x), n - filled)
            out[filled:filled + take] = x[:take]
            filled += take
        return out

    def sample_g(self, rng, n, a, b):
        # density proportional to x^{-sigma} e^{-x}: a truncated Gamma(1 - sigma)
        s1 = 1 - self.sigma
        pa = special.gammainc(s1, a)
        pb = 1.0 if math.isinf(b) else special.gammainc(s1, b)
        x = special.gammaincinv(s1, pa + rng.random(n) * (pb - pa))
        return np.clip(x, a, b)


# ---------------------------------------------------------------------------
# unipartite models


@dataclass(frozen=True)
class ModelSpec:
    """Base class; concrete models override the evaluators."""

    kind: str = field(init=False, default="")
    sigma: float = 0.0

    # Assumption-5 constants: nu(x, y) <= C mu(x)^eta mu(y)^eta
    @property
    def eta(self) -> float:
        return 1.0

    @property
    def C(self) -> float:
        raise NotImplementedError

    @property
    def tail_constant(self):
        """Limit of z^sigma F(z) as z -> 0, or None when it is not a constant."""
        return None

    @property
    def measure(self):
        raise NotImplementedError

    def rho(self, x):
        return self.measure.density(x)

    def W(self, x, y):
        raise NotImplementedError

    def loop_prob(self, x):
        return self.W(x, x)

    def mu(self, x):
        raise NotImplementedError

    def nu(self, x, y):
        raise NotImplementedError

    def g(self, x):
        return self.measure.g(x)

    def mu_mass(self, a, b):
        """Upper bound on the integral of mu against rho over [a, b] (exact where noted)."""
        raise NotImplementedError

    def key(self) -> str:
        return self.kind if self.kind in ("dense", "almost-dense") else f"{self.kind}:sigma={self.sigma:g}"


@dataclass(frozen=True)
class Dense(ModelSpec):
    """W(x, y) = (1-x)(1-y) on [0,1]^2; dense graphs."""

    kind: str = field(init=False, default="dense")

    @property
    def C(self):
        return 4.0 / 3.0

    @property
    def tail_constant(self):
        return 1.0

    @property
    def measure(self):
        return UnitInterval()

    def W(self, x, y):
        return self.measure.g(x) * self.measure.g(y)

    def mu(self, x):
        return 0.5 * self.measure.g(x)

    def nu(self, x, y):
        return self.measure.g(x) * self.measure.g(y) / 3.0

    def mu_mass(self, a, b):
        return 0.5 * self.measure.g_mass(a, b)


@dataclass(frozen=True)
class AlmostDense(ModelSpec):
    """W(x, y) = exp(-x - y) on R+; sparse with sigma = 0 and a log-varying tail."""

    kind: str = field(init=False, default="almost-dense")

    @property
    def C(self):
        return 0.5

    @property
    def measure(self):
        return ExponentialTail()

    def W(self, x, y):
        return np.exp(-np.asarray(x, float) - np.asarray(y, float))

    def mu(self, x):
        return np.exp(-np.asarray(x, float))

    def nu(self, x, y):
        return 0.5 * self.W(x, y)

    def mu_mass(self, a, b):
        return self.measure.g_mass(a, b)


@dataclass(frozen=True)
class SparseSeparable(ModelSpec):
    """W(x, y) = (1+x)^(-1/sigma) (1+y)^(-1/sigma) on R+."""

    kind: str = field(init=False, default="sparse-sep")
    sigma: float = 0.3

    def __post_init__(self):
        if not 0 < self.sigma < 1:
            raise ValueError("sparse-sep needs 0 < sigma < 1")

    @property
    def C(self):
        s = self.sigma
        return (1 - s) ** 2 / (s * (2 - s))

    @property
    def tail_constant(self):
        s = self.sigma
        return (s / (1 - s)) ** s

    @property
    def measure(self):
        return PowerTail(k=1.0 / self.sigma)

    def W(self, x, y):
        return self.measure.g(x) * self.measure.g(y)

    def mu(self, x):
        s = self.sigma
        return s / (1 - s) * self.measure.g(x)

    def nu(self, x, y):
        s = self.sigma
        return self.W(x, y) * s / (2 - s)

    def mu_mass(self, a, b):
        s = self.sigma
        return s / (1 - s) * self.measure.g_mass(a, b)


@lru_cache(maxsize=65536)
def _nonsep_nu(sigma: float, x: float, y: float) -> float:
    c = 1.0 / sigma + 1.0
    f = lambda t: (1 + x + t) ** (-c) * (1 + y + t) ** (-c)
    # past A the integrand is a clean power law; t = A/u maps [A, inf) onto (0, 1]
    A = 1.0 + max(x, y)
    knots = np.concatenate([[0.0], np.geomspace(1.0, A, int(math.log10(A)) + 2)])
    head = sum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-10, limit=200)[0]
               for a, b in zip(knots[:-1], knots[1:]) if b > a)
    tail, _ = integrate.quad(lambda u: f(A / u) * A / (u * u), 0.0, 1.0, epsabs=0, epsrel=1e-10, limit=200)
    return float(head + tail)


@dataclass(frozen=True)
class SparseNonSeparable(ModelSpec):
    """W(x, y) = (1+x+y)^(-1/sigma - 1) on R+."""

    kind: str = field(init=False, default="sparse-nonsep")
    sigma: float = 0.3

    def __post_init__(self):
        if not 0 < self.sigma < 1:
            raise ValueError("sparse-nonsep needs 0 < sigma < 1")

    @property
    def eta(self):
        return (1 + self.sigma) / 2

    @property
    def C(self):
        return self.sigma ** (-self.sigma)

    @property
    def tail_constant(self):
        return self.sigma ** self.sigma

    @property
    def measure(self):
        # (1+x+y)^2 >= (1+2x)(1+2y) gives a bound that is tight on the diagonal
        return PowerTail(k=(1.0 / self.sigma + 1.0) / 2.0, scale=2.0)

    def W(self, x, y):
        return (1.0 + np.asarray(x, float) + np.asarray(y, float)) ** (-1.0 / self.sigma - 1.0)

    def mu(self, x):
        return self.sigma * (1.0 + np.asarray(x, float)) ** (-1.0 / self.sigma)

    def nu(self, x, y):
        """Computed by quadrature; values are cached per (x, y)."""
        fn = np.vectorize(lambda a, b: _nonsep_nu(self.sigma, float(a), float(b)), otypes=[float])
        out = fn(x, y)
        return out if out.ndim else float(out)

    def mu_mass(self, a, b):
        s = self.sigma
        return s * PowerTail(k=1.0 / s).g_mass(a, b)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _ggp_nu(sigma, x, y):
    """(-1 + (1+x)^s + (1+y)^s - (1+x+y)^s) / s, evaluated without cancellation.

    The closed form loses all precision when min(x, y) is tiny; there the
    equivalent integral of (1+u)^(s-1) - (1+u+y)^(s-1) over u in [0, x] is
    evaluated by Gauss-Legendre with an expm1-based integrand.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    s = sigma
    with np.errstate(invalid="ignore", over="ignore"):
        closed = (np.expm1(s * np.log1p(lo)) + np.expm1(s * np.log1p(hi))
                  - np.expm1(s * np.log1p(lo + hi))) / s
    u = 0.5 * lo[..., None] * (1.0 + _GL_NODES)
    integrand = (1.0 + u) ** (s - 1) * -np.expm1((s - 1) * np.log1p(hi[..., None] / (1.0 + u)))
    series = 0.5 * lo * np.sum(_GL_WEIGHTS * integrand, axis=-1)
    out = np.where(lo < 1e-2, series, closed)
    return out if out.ndim else float(out)


_GL24 = np.polynomial.legendre.leggauss(24)


def _below_floor(sigma, lo, f):
    """Integral of f(y) against the unfloored Levy measure over (0, lo).

    ``f(y) / y`` must stay bounded near 0.  Substituting u = y^(1 - sigma)
    turns y^(-1-sigma) dy into du / ((1 - sigma) y) with a smooth integrand.
    """
    nodes, weights = _GL24
    s1 = 1.0 - sigma
    ub = lo ** s1
    u = 0.5 * ub * (1.0 + nodes)
    y = u ** (1.0 / s1)
    vals = f(y) / y * np.exp(-y)
    return 0.5 * ub * np.sum(weights * vals, axis=-1) / (s1 * special.gamma(s1))


@dataclass(frozen=True)
class GGP(ModelSpec):
    """Generalised gamma process graphex with unit exponential tilt.

    Distinct vertices connect with probability ``1 - exp(-pair_rate * x * y)``
    and a self-loop appears with probability ``1 - exp(-x**2)``.  With
    ``pair_rate=1`` this is the textbook graphon ``1 - exp(-xy)``;
    ``pair_rate=2`` is the multigraph convention of Caron and Fox, where each
    ordered pair carries an independent Poisson(x y) count.

    ``weight_floor`` removes all latent points below the given weight, the
    way samplers that truncate the generalised gamma process at a fixed
    threshold do.  The default 0 is the exact model.
    """

    kind: str = field(init=False, default="ggp")
    sigma: float = 0.5
    pair_rate: float = 1.0
    weight_floor: float = 0.0

    def __post_init__(self):
        if not 0 < self.sigma < 1:
            raise ValueError("the GGP sampler supports 0 < sigma < 1")
        if self.pair_rate <= 0:
            raise ValueError("pair_rate must be positive")
        if self.weight_floor < 0:
            raise ValueError("weight_floor must be nonnegative")

    @property
    def C(self):
        # sup of nu / (mu mu), attained as x, y -> 0: second moment over squared first
        if self.weight_floor > 0:
            m = self.measure
            return m.moment_mass(2, 0.0, math.inf) / m.moment_mass(1, 0.0, math.inf) ** 2
        return 1.0 - self.sigma

    @property
    def tail_constant(self):
        s = self.sigma
        return self.pair_rate ** s / (s * special.gamma(1 - s))

    @property
    def measure(self):
        return GGPLevy(self.sigma, gscale=math.sqrt(max(self.pair_rate, 1.0)), lo=self.weight_floor)

    def W(self, x, y):
        return -np.expm1(-self.pair_rate * np.asarray(x, float) * np.asarray(y, float))

    def loop_prob(self, x):
        x = np.asarray(x, float)
        return -np.expm1(-x * x)

    def mu(self, x):
        s, c = self.sigma, self.pair_rate
        x = np.asarray(x, float)
        out = np.expm1(s * np.log1p(c * x)) / s
        if self.weight_floor > 0:
            # c * x * weight_floor is tiny over any sampling window, so the
            # polynomial rule is exact to rounding there
            out = out - _below_floor(s, self.weight_floor, lambda y: -np.expm1(-c * x[..., None] * y))
        return out

    def nu(self, x, y):
        c = self.pair_rate
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        out = _ggp_nu(self.sigma, c * x, c * y)
        if self.weight_floor > 0:
            out = out - _below_floor(
                self.sigma, self.weight_floor,
                lambda z: np.expm1(-c * x[..., None] * z) * np.expm1(-c * y[..., None] * z))
            out = np.maximum(out, 0.0)
        return out

    def mu_mass(self, a, b):
        # mu(x) <= pair_rate * x
        return self.pair_rate * self.measure.moment_mass(1, a, b)

    def key(self):
        out = f"ggp:sigma={self.sigma:g}"
        if self.pair_rate != 1.0:
            out += f",pair_rate={self.pair_rate:g}"
        if self.weight_floor > 0:
            out += f",weight_floor={self.weight_floor:g}"
        return out


def make_model(key: str, sigma: float | None = None, **params) -> ModelSpec:
    """Build a model from its string key (``dense``, ``almost-dense``, ``sparse-sep``,
    ``sparse-nonsep``, ``ggp``).  ``key`` may carry inline parameters, e.g.
    ``"ggp:sigma=0.5,pair_rate=2"``."""
    if ":" in key:
        key, _, rest = key.partition(":")
        for item in filter(None, rest.split(",")):
            name, _, value = item.partition("=")
            params[name.strip().replace("-", "_")] = float(value)
    if sigma is not None:
        params["sigma"] = sigma
    key = key.strip().lower()
    if key == "dense":
        return Dense()
    if key == "almost-dense":
        return AlmostDense()
    if key == "sparse-sep":
        return SparseSeparable(**params)
    if key == "sparse-nonsep":
        return SparseNonSeparable(**params)
    if key == "ggp":
        return GGP(**params)
    raise ValueError(f"unknown model key {key!r}; expected one of {MODEL_KEYS}")


def eval_mu(model: ModelSpec, x):
    if np.any(np.asarray(x) < 0):
        raise ValueError("latent coordinate must be nonnegative")
    out = model.mu(x)
    return float(out) if np.ndim(out) == 0 else out


def eval_nu(model: ModelSpec, x, y):
    if np.any(np.asarray(x) < 0) or np.any(np.asarray(y) < 0):
        raise ValueError("latent coordinates must be nonnegative")
    out = model.nu(x, y)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# truncation


def _bisect(pred, lo, hi, iters=200):
    """Smallest t in [lo, hi] with pred(t) true, for pred monotone false -> true."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def omitted_edge_bound(model: ModelSpec, size: float, x_min: float, x_max: float) -> float:
    """Bound on the expected number of edges touching latent points outside [x_min, x_max]."""
    m = model.measure
    total = 0.0
    if x_min > m.lo:
        total += size ** 2 * model.mu_mass(m.lo, x_min) + size * m.g2_mass(m.lo, x_min)
    if x_max < m.hi:
        total += size ** 2 * model.mu_mass(x_max, m.hi) + size * m.g2_mass(x_max, m.hi)
    return total


@lru_cache(maxsize=1024)
def truncation_bounds(model: ModelSpec, size: float, budget: float = 1e-3) -> tuple:
    """Latent window outside of which at most ``budget`` edges are expected."""
    if size <= 0:
        raise ValueError("size must be positive")
    if budget <= 0:
        raise ValueError("budget must be positive")
    m = model.measure
    if not math.isinf(m.hi) and m.lo == 0.0 and m.dust_side is None:
        return (m.lo, m.hi)

    x_min, x_max = m.lo, m.hi
    side_budget = budget / 2 if m.dust_side == "lower" else budget
    if m.dust_side == "lower":
        # the lower cut is solved in log space; the measure has infinite mass at 0
        def lower_ok(t):
            a = math.exp(-t)
            return size ** 2 * model.mu_mass(m.lo, a) + size * m.g2_mass(m.lo, a) <= side_budget

        t = _bisect(lower_ok, -5.0, 745.0)
        x_min = max(math.exp(-t), m.lo)

    def upper_ok(t):
        b = math.expm1(t)
        return size ** 2 * model.mu_mass(b, math.inf) + size * m.g2_mass(b, math.inf) <= side_budget

    t = _bisect(upper_ok, 0.0, 700.0)
    x_max = math.expm1(t)
    return (x_min, x_max)


# ---------------------------------------------------------------------------
# bipartite models


@dataclass(frozen=True)
class BipartiteModelSpec:
    """Mirrored bipartite model: left measure rho, right measure psi, graphon W.

    ``kind`` is one of ``dense``, ``sparse-sep`` or ``ggp``; ``sigma_v`` and
    ``sigma_w`` are the tail-indices of the left and right base measures.
    """

    kind: str
    sigma_v: float = 0.0
    sigma_w: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dense", "sparse-sep", "ggp"):
            raise ValueError(f"unsupported bipartite kind {self.kind!r}")
        if self.kind != "dense":
            for s in (self.sigma_v, self.sigma_w):
                if not 0 < s < 1:
                    raise ValueError("sigmas must lie in (0, 1)")
        integral = self.mean_edge_density()
        if not math.isfinite(integral):
            raise ValueError("graphon is not integrable")

    @property
    def sigma(self):
        return self.sigma_v

    @property
    def left(self):
        return self._measure(self.sigma_v)

    @property
    def right(self):
        return self._measure(self.sigma_w)

    def _measure(self, s):
        if self.kind == "dense":
            return UnitInterval()
        if self.kind == "sparse-sep":
            return PowerTail(k=1.0 / s)
        return GGPLevy(s)

    def rho(self, x):
        return self.left.density(x)

    def psi(self, y):
        return self.right.density(y)

    def W(self, x, y):
        if self.kind == "ggp":
            return -np.expm1(-np.asarray(x, float) * np.asarray(y, float))
        return self.left.g(x) * self.right.g(y)

    def mu_v(self, x):
        """Left marginal: integral of W(x, .) against psi."""
        if self.kind == "dense":
            return 0.5 * self.left.g(x)
        s = self.sigma_w
        if self.kind == "sparse-sep":
            return s / (1 - s) * self.left.g(x)
        return np.expm1(s * np.log1p(np.asarray(x, float))) / s

    def mu_w(self, y):
        if self.kind == "dense":
            return 0.5 * self.right.g(y)
        s = self.sigma_v
        if self.kind == "sparse-sep":
            return s / (1 - s) * self.right.g(y)
        return np.expm1(s * np.log1p(np.asarray(y, float))) / s

    # the Marginal protocol used by the theory module
    def mu(self, x):
        return self.mu_v(x)

    def nu_v(self, x, xp):
        if self.kind == "dense":
            return self.left.g(x) * self.left.g(xp) / 3.0
        s = self.sigma_w
        if self.kind == "sparse-sep":
            return self.left.g(x) * self.left.g(xp) * s / (2 - s)
        return _ggp_nu(s, x, xp)

    def mean_edge_density(self) -> float:
        """Integral of W against rho x psi."""
        if self.kind == "dense":
            return 0.25
        if self.kind == "sparse-sep":
            a, b = self.sigma_v, self.sigma_w
            return a / (1 - a) * b / (1 - b)
        return _ggp_bipartite_density(self.sigma_v, self.sigma_w)

    @property
    def tail_constant(self):
        """Limit of z^sigma_v F_v(z) as z -> 0."""
        s = self.sigma_v
        if self.kind == "dense":
            return 1.0
        if self.kind == "sparse-sep":
            sw = self.sigma_w
            return (sw / (1 - sw)) ** s
        return 1.0 / (s * special.gamma(1 - s))

    def key(self):
        if self.kind == "dense":
            return "dense"
        return f"{self.kind}:sigma_v={self.sigma_v:g},sigma_w={self.sigma_w:g}"


@lru_cache(maxsize=64)
def _ggp_bipartite_density(sv: float, sw: float) -> float:
    # int mu_v d rho with mu_v(x) = ((1+x)^sw - 1)/sw; finite because mu_v(x) <= x
    f = lambda t: (math.expm1(sw * math.log1p(math.exp(t))) / sw
                   * math.exp(t) ** (-sv) * math.exp(-math.exp(t)))
    val, _ = integrate.quad(f, -60.0, 6.0, limit=400, epsrel=1e-12)
    return val / special.gamma(1 - sv)
