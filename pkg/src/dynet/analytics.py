"""Closed-form laws, bounds, and asymptotics for dynamic-graph contagion.

Four families of results live here:

* total-variation machinery for edge-state distributions: generic finite
  pmfs, binomial-vs-binomial TV via the pmf crossing point, and the
  worst-case relaxation curve p(t) = p + (1-p)e^{-(lam+mu)t};
* mixing times of k independent telegraph edges, numeric (bisection on
  the TV curve) and leading-order asymptotic;
* upper and lower bounds on SI hitting times tau_k, for instant
  (beta = inf) and finite transmission;
* the expected first-transmission wait of a single infected node with N
  potential neighbors, solved exactly from its absorbing birth-death
  chain and compared with its 1/sqrt(N) asymptotic.

All functions are pure; nothing here consumes randomness.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.optimize import brentq

from . import kernels
from .core_model import DegenerateParametersError, EdgeParams

# direct log-space summation below this k, incomplete-beta CDF above
DIRECT_SUM_LIMIT = 100_000


# ---------------------------------------------------------------------------
# Finite pmfs and total variation
# ---------------------------------------------------------------------------

@dataclass
class FinitePmf:
    """A probability mass function on an explicit finite support."""

    support: list
    mass: np.ndarray

    def __post_init__(self):
        self.support = list(self.support)
        self.mass = np.asarray(self.mass, dtype=np.float64)
        if len(self.support) != len(self.mass):
            raise ValueError("support and mass must have equal length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support outcomes must be distinct")
        if (self.mass < 0).any():
            raise ValueError("masses must be nonnegative")
        if abs(float(self.mass.sum()) - 1.0) > 1e-12:
            raise ValueError("masses must sum to 1 within 1e-12")

    @classmethod
    def bernoulli(cls, p: float) -> "FinitePmf":
        return cls([0, 1], [1.0 - p, p])

    @classmethod
    def binomial(cls, k: int, p: float) -> "FinitePmf":
        return cls(list(range(k + 1)), binomial_pmf(k, p))

    @classmethod
    def poisson(cls, lam: float, tail_eps: float = 1e-13) -> "FinitePmf":
        """Poisson(lam) truncated where the upper tail drops below tail_eps."""
        if lam < 0:
            raise ValueError("lam must be >= 0")
        if lam == 0.0:
            return cls([0], [1.0])
        hi = int(lam + 12.0 * math.sqrt(lam + 1.0)) + 20
        while True:
            i = np.arange(hi + 1)
            mass = np.exp(-lam + i * math.log(lam) - special.gammaln(i + 1))
            if mass[-1] <= tail_eps:
                break
            hi *= 2
        mass = mass / mass.sum()
        return cls(list(range(hi + 1)), mass)

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.mass))


def tv(a: FinitePmf, b: FinitePmf) -> float:
    """Total variation distance between two finite pmfs.

    Computed as half the L1 distance over the union support, and
    independently as the crossing-event form a(E) - b(E) with
    E = {w : a(w) >= b(w)}; the two must agree to 1e-12 or the call
    raises, since a disagreement means a normalization bug upstream.
    """
    pa = a.as_dict()
    pb = b.as_dict()
    outcomes = set(pa) | set(pb)
    diffs = [pa.get(w, 0.0) - pb.get(w, 0.0) for w in outcomes]
    half_l1 = 0.5 * sum(abs(d) for d in diffs)
    crossing = sum(d for d in diffs if d >= 0.0)
    if abs(half_l1 - crossing) > 1e-12:
        raise RuntimeError(
            f"TV dual forms disagree: half-L1 {half_l1!r} vs crossing {crossing!r}")
    return half_l1


def binomial_pmf(k: int, p: float) -> np.ndarray:
    """pmf vector of Binomial(k, p) over {0..k}, log-space evaluation."""
    if p == 0.0:
        out = np.zeros(k + 1)
        out[0] = 1.0
        return out
    if p == 1.0:
        out = np.zeros(k + 1)
        out[k] = 1.0
        return out
    i = np.arange(k + 1)
    logpmf = (special.gammaln(k + 1) - special.gammaln(i + 1)
              - special.gammaln(k - i + 1)
              + i * math.log(p) + (k - i) * math.log1p(-p))
    return np.exp(logpmf)


def binomial_crossing_point(p: float, q: float) -> float:
    """The fraction a where Binomial(k,p) and Binomial(k,q) pmfs cross.

    For p != q in (0,1) the set {i : pmf_p(i) >= pmf_q(i)} (taking p < q)
    is exactly the integers in [0, k*a].  Symmetric in (p, q).
    """
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        raise ValueError("crossing point needs p, q strictly inside (0, 1)")
    if p == q:
        raise ValueError("crossing point undefined for p == q")
    num = math.log((1.0 - q) / (1.0 - p))
    den = math.log(p * (1.0 - q) / (q * (1.0 - p)))
    return num / den


def tv_binomial(k: int, p: float, q: float) -> float:
    """TV distance between Binomial(k, p) and Binomial(k, q).

    Direct half-L1 summation of log-space pmfs up to k = 1e5; beyond
    that, the crossing-point form CDF_p(floor(k a)) - CDF_q(floor(k a))
    with the CDFs evaluated through the regularized incomplete beta
    function, which keeps k = 1e6 well-conditioned.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    for name, v in (("p", p), ("q", q)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    if p == q:
        return 0.0
    lo, hi = (p, q) if p < q else (q, p)
    if lo == 0.0 and hi == 1.0:
        return 1.0
    if lo == 0.0:
        return 1.0 - (1.0 - hi) ** k
    if hi == 1.0:
        return 1.0 - lo ** k
    if k <= DIRECT_SUM_LIMIT:
        return 0.5 * float(np.abs(binomial_pmf(k, lo) - binomial_pmf(k, hi)).sum())
    a = binomial_crossing_point(lo, hi)
    i_star = min(math.floor(k * a), k)
    if i_star < 0:
        return 0.0
    return float(special.bdtr(i_star, k, lo) - special.bdtr(i_star, k, hi))


# ---------------------------------------------------------------------------
# Mixing times
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingQuery:
    """Mixing-time question: k tracked edges, all started on (worst case)."""

    k: int
    params: EdgeParams
    level: float = 0.25

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must be in (0, 1)")


def worst_case_on_probability(p: float, params: EdgeParams, t: float) -> float:
    """On-probability at time t of an edge started on: p + (1-p)e^{-(lam+mu)t}.

    Starting all edges on is the slowest-relaxing initial condition when
    p <= 1/2, which is the regime the mixing analysis targets.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return p + (1.0 - p) * math.exp(-params.total_rate * t)


def mixing_time_numeric(query: MixingQuery, grid_points: int = 33) -> float:
    """Time until TV(k edges started on, stationarity) drops to the level.

    Brackets from [0, 20/(lam+mu)] with geometric expansion, verifies the
    TV curve is nonincreasing on a coarse grid, then bisects to relative
    1e-9.  A monotonicity violation falls back to a dense grid scan for
    the level crossing and emits a RuntimeWarning.
    """
    params = query.params
    p = params.stationary_p
    if p > 0.5:
        raise ValueError(
            f"worst-case mixing analysis requires p <= 1/2, got p = {p}")
    k, level = query.k, query.level
    rate = params.total_rate

    def f(t: float) -> float:
        return tv_binomial(k, worst_case_on_probability(p, params, t), p)

    if level >= f(0.0):
        return 0.0
    hi = 20.0 / rate
    for _ in range(200):
        if f(hi) < level:
            break
        hi *= 2.0
    else:
        raise RuntimeError("failed to bracket the mixing level")
    ts = np.linspace(0.0, hi, grid_points)
    vals = np.array([f(t) for t in ts])
    if (np.diff(vals) > 1e-9).any():
        warnings.warn(
            "TV curve not monotone on the check grid; using grid-scan fallback",
            RuntimeWarning)
        dense = np.linspace(0.0, hi, 20001)
        dv = np.array([f(t) for t in dense])
        return float(dense[int(np.argmin(np.abs(dv - level)))])
    return float(brentq(lambda t: f(t) - level, 0.0, hi, xtol=1e-15, rtol=1e-9))


def mixing_time_asymptotic(k: int, p: float, alpha: float,
                           regime: str = "constant_p",
                           c: float | None = None) -> float:
    """Leading-order mixing time of k edges.

    ``constant_p``: log k / (2(lam+mu)) with lam+mu recovered from
    (p, alpha) as alpha/(p(1-p)).  ``sparse``: c * log k / (alpha k),
    the regime where p = c/k shrinks with k; requires ``c``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if regime == "constant_p":
        if not 0.0 < p < 1.0:
            raise ValueError("constant_p regime needs p in (0, 1)")
        if alpha <= 0:
            raise ValueError("alpha must be > 0")
        rate = alpha / (p * (1.0 - p))
        return math.log(k) / (2.0 * rate)
    if regime == "sparse":
        if c is None:
            raise ValueError("sparse regime requires the constant c")
        if alpha <= 0:
            raise ValueError("alpha must be > 0")
        return c * math.log(k) / (alpha * k)
    raise ValueError(f"unknown regime {regime!r}; use 'constant_p' or 'sparse'")


# ---------------------------------------------------------------------------
# Hitting-time bounds
# ---------------------------------------------------------------------------

def hitting_bound_instant(n: int, k: int, lam: float) -> tuple[float, float]:
    """Upper bounds on E[tau_k] when transmission is instantaneous.

    With edges appearing at rate lam and infection jumping whole
    components, the infected count dominates a pure-birth chain with
    rates lam*i*(n-i), so E[tau_k] <= sum_{i<k} 1/(lam i (n-i)).
    Returns (exact, simplified) where the simplified form replaces
    harmonic numbers by logs: (1/(lam n))(2 + log(nk/(n-k))) for k < n
    and 2(1 + log(n-1))/(lam n) at k = n.  exact <= simplified.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    i = np.arange(1, k)
    exact = float((1.0 / (lam * i * (n - i))).sum())
    if k < n:
        simplified = (2.0 + math.log(n * k / (n - k))) / (lam * n)
    else:
        simplified = 2.0 * (1.0 + math.log(n - 1.0)) / (lam * n)
    return exact, simplified


def hitting_bound_instant_harmonic(n: int, k: int, lam: float) -> float:
    """The same exact bound written with harmonic numbers.

    (1/(lam n)) (H_{k-1} + H_{n-1} - H_{n-k}); the partial-fraction
    identity 1/(i(n-i)) = (1/n)(1/i + 1/(n-i)) makes it equal to the
    term-by-term sum, which tests verify to 1e-12.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    def harm(j: int) -> float:
        return float(np.sum(1.0 / np.arange(1, j + 1))) if j >= 1 else 0.0
    return (harm(k - 1) + harm(n - 1) - harm(n - k)) / (lam * n)


def hitting_bound_finite(n: int, k: int, beta: float, lam: float) -> tuple[float, float]:
    """Upper bounds on E[tau_k] under finite transmission rate beta.

    Each infection waits at most the single-spread time ~ sqrt(pi/(2 beta
    lam M)) given M infective-susceptible pairs, so E[tau_k] <=
    sqrt(pi/(2 beta lam)) * sum_{m<k} 1/sqrt(m(n-m)).  Returns (riemann
    sum, integral limit) where the integral form is
    sqrt(pi/(2 beta lam)) * arccos(1 - 2k/n); at k = n this is the
    n-free global bound sqrt(pi^3/(2 beta lam)).
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    if beta <= 0 or lam <= 0:
        raise ValueError("beta and lam must be > 0")
    c0 = math.sqrt(math.pi / (2.0 * beta * lam))
    mm = np.arange(1, k)
    riemann = float(c0 * (1.0 / np.sqrt(mm * (n - mm))).sum())
    integral = c0 * math.acos(1.0 - 2.0 * k / n)
    return riemann, integral


def full_infection_lower_bound(n: float, beta: float, lam: float) -> float:
    """Leading-order floor on tau_n.

    Finite beta: sqrt(2 log n / (beta lam n)) (the first transmission
    alone needs an edge appearance plus an infection ring over ~n
    independent pairs).  beta = inf: log n / (lam n), the connectivity
    threshold time of a growing edge set.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    if math.isinf(beta):
        return math.log(n) / (lam * n)
    if beta <= 0:
        raise ValueError("beta must be > 0 or infinite")
    return math.sqrt(2.0 * math.log(n) / (beta * lam * n))


# ---------------------------------------------------------------------------
# Single-node first-transmission wait (absorbing birth-death chain)
# ---------------------------------------------------------------------------

def first_transmission_profile(N: int, params: EdgeParams, beta: float) -> np.ndarray:
    """Expected absorption times t_0..t_N of the single-spreader chain.

    One infected node has N potential neighbors; state k counts its
    currently-on edges.  Edges switch on at rate (N-k)lam, off at rate
    k mu, and transmission fires at rate k beta (absorbing).  The
    expectations satisfy the tridiagonal balance

        ((N-k)lam + k mu + k beta) t_k = 1 + (N-k)lam t_{k+1} + k mu t_{k-1}

    solved in O(N); every equation's relative residual is checked to
    1e-9 before returning.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    lam, mu = params.lam, params.mu
    if params.instant_removal:
        raise ValueError("instant-removal edges never transmit at finite beta")
    if lam <= 0 or beta <= 0 or mu < 0:
        raise ValueError("need lam > 0, beta > 0, mu >= 0")
    k = np.arange(N + 1, dtype=np.float64)
    lower = -k * mu
    diag = (N - k) * lam + k * mu + k * beta
    upper = -(N - k) * lam
    rhs = np.ones(N + 1)
    t = kernels.thomas_solve(lower, diag, upper, rhs)
    # residual audit against the balance equations
    lhs = diag * t
    lhs[:-1] += upper[:-1] * t[1:]
    lhs[1:] += lower[1:] * t[:-1]
    scale = np.maximum(1.0, np.abs(diag * t))
    if (np.abs(lhs - rhs) > 1e-9 * scale).any():
        raise RuntimeError("tridiagonal solve residual above 1e-9")
    return t


def first_transmission_time_exact(N: int, params: EdgeParams, beta: float) -> float:
    """t_0 of :func:`first_transmission_profile`: the all-edges-off start."""
    return float(first_transmission_profile(N, params, beta)[0])


def first_transmission_time_asymptotic(N: int, lam: float, beta: float) -> float:
    """Large-N limit sqrt(pi / (2 beta lam N)) of the first-transmission wait.

    Independent of mu: turning edges off only delays transmission paths
    that were already slower than the fresh-edge route.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if lam <= 0 or beta <= 0:
        raise ValueError("lam and beta must be > 0")
    return math.sqrt(math.pi / (2.0 * beta * lam * N))
