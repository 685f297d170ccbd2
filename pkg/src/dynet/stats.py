"""Estimators for the verification harness.

Small, pure helpers: normal-approximation confidence intervals, total
variation between an empirical sample and a reference pmf, a two-sample
Kolmogorov-Smirnov wrapper, and a Hill-style power-law tail fit used on
degree histograms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _sps

from .analytics import FinitePmf
from .turnover import DegreeHistogram

__all__ = ["SampleSet", "FitResult", "mean_ci", "empirical_tv",
           "ks_two_sample", "fit_power_law"]


@dataclass
class SampleSet:
    """Observations plus provenance metadata (seed range, scenario id)."""

    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("values must be a nonempty 1-d array")

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class FitResult:
    """Power-law tail fit: density ~ k^-gamma_hat above k_min."""

    gamma_hat: float
    k_min: int
    n_tail: int
    std_err: float


def mean_ci(samples: SampleSet, level: float = 0.95):
    """Sample mean with a normal-approximation confidence interval.

    Returns (mean, lo, hi).  level = 0 collapses to the point estimate.
    """
    if samples.n < 2:
        raise ValueError("need at least 2 samples for an interval")
    if not 0.0 <= level < 1.0:
        raise ValueError("level must be in [0, 1)")
    x = samples.values
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size))
    z = float(_sps.norm.ppf(0.5 + level / 2.0)) if level > 0 else 0.0
    return m, m - z * se, m + z * se


def empirical_tv(samples: SampleSet, reference: FinitePmf) -> float:
    """Total variation between the empirical pmf of integer samples and a reference.

    Half the L1 distance over the union of supports, so reference mass
    at unobserved points counts fully.
    """
    vals = samples.values
    ints = np.rint(vals)
    if not np.all(np.abs(vals - ints) < 1e-9):
        raise ValueError("samples must be integer-valued")
    ks, cs = np.unique(ints.astype(np.int64), return_counts=True)
    emp = {int(k): c / vals.size for k, c in zip(ks, cs)}
    ref = reference.as_dict()
    tv = 0.0
    for k in set(emp) | set(ref):
        tv += abs(emp.get(k, 0.0) - ref.get(k, 0.0))
    return 0.5 * tv


def ks_two_sample(a: SampleSet, b: SampleSet):
    """Two-sample Kolmogorov-Smirnov test: returns (statistic, p_value)."""
    res = _sps.ks_2samp(a.values, b.values, method="asymp")
    return float(res.statistic), float(res.pvalue)


def fit_power_law(hist: DegreeHistogram, k_min: int | None = None) -> FitResult:
    """Hill-style tail-exponent fit on a degree histogram.

    Continuous MLE over degrees >= k_min with a half-integer shift for
    discreteness: gamma_hat = 1 + n_tail / sum c_k log(k / (k_min - 1/2)),
    std_err = (gamma_hat - 1) / sqrt(n_tail).  Defaults k_min to 2m, the
    smallest cutoff at which the continuum degree laws are trustworthy.
    """
    if k_min is None:
        k_min = 2 * hist.m
    if k_min < 1:
        raise ValueError("k_min must be >= 1")
    ks, cs = hist.as_arrays()
    sel = ks >= k_min
    ks, cs = ks[sel], cs[sel]
    n_tail = float(cs.sum())
    if n_tail < 10:
        raise ValueError(
            f"only {n_tail:.0f} observations at degree >= {k_min}; need >= 10")
    if ks.size == 1:
        raise ValueError(
            "degenerate tail: every observation above the cutoff has the "
            "same degree, the tail exponent is unidentifiable")
    log_sum = float((cs * np.log(ks / (k_min - 0.5))).sum())
    gamma_hat = 1.0 + n_tail / log_sum
    return FitResult(gamma_hat=float(gamma_hat), k_min=int(k_min),
                     n_tail=int(round(n_tail)),
                     std_err=float((gamma_hat - 1.0) / math.sqrt(n_tail)))
