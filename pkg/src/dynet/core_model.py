"""Parameter algebra and single-edge law for dynamic Erdos-Renyi graphs.

Each potential edge of the dynamic graph G(n, lam, mu) is an independent
telegraph process: a two-state continuous-time Markov chain that switches
on at rate ``lam`` and off at rate ``mu``.  The stationary on-probability
is ``p = lam / (lam + mu)`` and the edge cycle rate (expected number of
complete off/on cycles per unit time at stationarity) is
``alpha = lam * mu / (lam + mu)``.  Everything else in the package builds
on the closed-form transition law of this chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

RngLike = Union[np.random.Generator, int, None]


class DegenerateParametersError(ValueError):
    """Raised when rates do not determine a stationary edge law."""


def as_generator(rng: RngLike) -> np.random.Generator:
    """Normalize a seed / Generator / None into a numpy Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeParams:
    """Rates of the per-edge telegraph process.

    ``lam`` is the off->on rate, ``mu`` the on->off rate.  Infinite
    on->off switching ("an edge is used and immediately gone") is not
    representable as a float rate without poisoning rate sums, so it is
    carried as the explicit ``instant_removal`` flag; ``mu`` must then be
    left at 0.
    """

    lam: float
    mu: float
    instant_removal: bool = False

    def __post_init__(self):
        for name in ("lam", "mu"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite float, got {v!r}")
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")
        if self.instant_removal and self.mu != 0:
            raise ValueError("instant_removal replaces mu; leave mu at 0")

    @classmethod
    def from_stationary(cls, p: float, alpha: float) -> "EdgeParams":
        """Recover (lam, mu) from stationary on-probability and cycle rate.

        Inverts p = lam/(lam+mu), alpha = lam*mu/(lam+mu); requires
        0 < p < 1 (the boundary values make one rate vanish and the pair
        non-identifiable) and alpha >= 0.
        """
        if not 0.0 < p < 1.0:
            raise DegenerateParametersError(
                f"p must lie strictly in (0, 1) to recover rates, got {p}")
        if alpha < 0 or not math.isfinite(alpha):
            raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
        return cls(lam=alpha / (1.0 - p), mu=alpha / p)

    @property
    def total_rate(self) -> float:
        """Relaxation rate lam + mu of the edge chain."""
        return self.lam + self.mu

    @property
    def stationary_p(self) -> float:
        """Stationary on-probability lam / (lam + mu)."""
        if self.instant_removal:
            return 0.0
        if self.total_rate == 0.0:
            raise DegenerateParametersError(
                "lam + mu = 0: the edge never moves and has no stationary law")
        return self.lam / self.total_rate

    @property
    def cycle_rate(self) -> float:
        """Edge cycle rate alpha = lam * mu / (lam + mu)."""
        if self.instant_removal:
            return self.lam
        if self.total_rate == 0.0:
            raise DegenerateParametersError(
                "lam + mu = 0: cycle rate undefined")
        return self.lam * self.mu / self.total_rate

    def expected_degree(self, n: int) -> float:
        """Expected stationary degree (n - 1) * p."""
        return (n - 1) * self.stationary_p


def derive_stationary(params: EdgeParams) -> tuple[float, float]:
    """Return (p, alpha) for the given rates; degenerate when lam + mu = 0."""
    return params.stationary_p, params.cycle_rate


def derive_rates(p: float, alpha: float) -> EdgeParams:
    """Inverse of :func:`derive_stationary`; see EdgeParams.from_stationary."""
    return EdgeParams.from_stationary(p, alpha)


def edge_on_probability(initial_on: bool, t: float, params: EdgeParams) -> float:
    """Probability the edge is on at time t given its state at time 0.

    The telegraph transition law: Pr[on at t] = p + (s0 - p) exp(-(lam+mu) t)
    with s0 the indicator of the initial state.  Negative t is a domain
    error.  When both rates vanish the edge is frozen in its initial state.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    s0 = 1.0 if initial_on else 0.0
    if params.instant_removal:
        return s0 if t == 0.0 else 0.0
    rate = params.total_rate
    if rate == 0.0:
        return s0
    p = params.stationary_p
    return p + (s0 - p) * math.exp(-rate * t)


# ---------------------------------------------------------------------------
# Graph snapshots
# ---------------------------------------------------------------------------

def pair_count(n: int) -> int:
    return n * (n - 1) // 2

def pair_index(i, j, n: int):
    """Flat index of unordered pair (i, j), i < j, in lexicographic order.

    Works elementwise on numpy arrays as well as on scalars.
    """
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def pairs_from_indices(idx: np.ndarray, n: int) -> np.ndarray:
    """Invert :func:`pair_index`: flat indices -> (m, 2) array of (i, j)."""
    idx = np.asarray(idx, dtype=np.int64)
    # i is the largest row whose block start i*(2n-i-1)/2 is <= idx
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8.0 * idx)) / 2.0).astype(np.int64)
    start = i * (2 * n - i - 1) // 2
    # float rounding can land one row off; fix up
    too_far = start > idx
    i[too_far] -= 1
    start = i * (2 * n - i - 1) // 2
    overshoot = idx - start >= (n - 1 - i)
    i[overshoot] += 1
    start = i * (2 * n - i - 1) // 2
    j = idx - start + i + 1
    return np.column_stack([i, j])


@dataclass
class GraphSnapshot:
    """An undirected simple graph on nodes 0..n-1 at a fixed instant.

    Edges are stored as a (m, 2) int64 array with each row (i, j), i < j,
    rows unique and sorted lexicographically.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if not (e[:, 0] < e[:, 1]).all():
                raise ValueError("edges must satisfy i < j per row")
            flat = pair_index(e[:, 0], e[:, 1], self.n)
            order = np.argsort(flat)
            flat = flat[order]
            if len(flat) > 1 and (np.diff(flat) == 0).any():
                raise ValueError("duplicate edges")
            e = e[order]
        self.edges = e

    @classmethod
    def empty(cls, n: int) -> "GraphSnapshot":
        return cls(n, np.empty((0, 2), dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "GraphSnapshot":
        i, j = np.triu_indices(n, k=1)
        return cls(n, np.column_stack([i, j]))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "GraphSnapshot":
        rows = [(min(a, b), max(a, b)) for a, b in pairs]
        return cls(n, np.asarray(rows, dtype=np.int64).reshape(-1, 2))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = (i, j) if i < j else (j, i)
        return (a, b) in self.edge_set()

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.num_edges:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def flat_indicator(self) -> np.ndarray:
        """uint8 vector over all n(n-1)/2 pairs, 1 where the edge is on."""
        ind = np.zeros(pair_count(self.n), dtype=np.uint8)
        if self.num_edges:
            ind[pair_index(self.edges[:, 0], self.edges[:, 1], self.n)] = 1
        return ind


def sample_stationary_graph(n: int, p: float, rng: RngLike = None) -> GraphSnapshot:
    """Draw G(n, p): each pair on independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    gen = as_generator(rng)
    m = pair_count(n)
    on = gen.random(m) < p
    return GraphSnapshot(n, pairs_from_indices(np.flatnonzero(on), n))


def sample_edge_trajectory(initial_on: bool, horizon: float,
                           params: EdgeParams, rng: RngLike = None) -> np.ndarray:
    """Toggle times of one telegraph edge on [0, horizon].

    Returns the strictly increasing times at which the edge flips state,
    starting from ``initial_on`` at time 0.  Holding times are Exp(lam)
    while off and Exp(mu) while on; a vanishing exit rate freezes the
    edge and ends the trajectory.
    """
    if horizon < 0 or not math.isfinite(horizon):
        raise ValueError(f"horizon must be finite and >= 0, got {horizon}")
    if params.instant_removal:
        raise ValueError("instant_removal edges have no toggle trajectory")
    gen = as_generator(rng)
    out = []
    t = 0.0
    on = bool(initial_on)
    chunk = 64
    while True:
        # exit rates alternate deterministically from the current state
        rates = np.empty(chunk)
        rates[0::2] = params.mu if on else params.lam
        rates[1::2] = params.lam if on else params.mu
        if rates[0] == 0.0:
            break  # frozen in current state
        with np.errstate(divide="ignore"):
            scale = np.where(rates > 0, 1.0 / np.where(rates > 0, rates, 1.0), np.inf)
        holds = gen.exponential(scale)
        times = t + np.cumsum(holds)
        cut = np.searchsorted(times, horizon, side="right")
        out.append(times[:cut])
        if cut < chunk:
            break
        t = times[-1]
        # chunk has even length so the state parity is unchanged
    return np.concatenate(out) if out else np.empty(0)
