"""Closed-form stability bounds for persistence under axis scaling.

Pure arithmetic: every function turns scaling statistics and a diameter into
a number. No verdicts are formed here (the experiment harness compares
bounds against measured distances) and nothing is clamped to make a bound
look true.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DistanceMatrix, ScalingTransform, metric_perturbation

__all__ = [
    "ScalingStats",
    "BoundSet",
    "ExpectedBound",
    "EXPECTED_BOUND_MODES",
    "scaling_stats",
    "range_upper_bound",
    "refined_lower_bound",
    "dimension_bound",
    "iterative_bound",
    "wasserstein_upper_bound",
    "expected_bound",
    "classical_stability_bound",
]

EXPECTED_BOUND_MODES = ("paper", "order_statistics")


@dataclass(frozen=True)
class ScalingStats:
    """Extreme and root-mean-square scaling factors of one transform."""

    s_min: float
    s_max: float
    s_avg: float

    def __post_init__(self) -> None:
        if not (0.0 < self.s_min <= self.s_max) or not math.isfinite(self.s_max):
            raise ValueError("need 0 < s_min <= s_max, both finite")
        if not math.isfinite(self.s_avg):
            raise ValueError("s_avg must be finite")
        # the RMS lies in [s_min, s_max] mathematically; rounding in
        # square/mean/sqrt can push it one ulp outside, which would break
        # exact bound comparisons downstream, so check loosely and clamp
        slack = 1e-12 * self.s_max
        if not (self.s_min - slack <= self.s_avg <= self.s_max + slack):
            raise ValueError("s_avg is not between s_min and s_max")
        clamped = min(max(self.s_avg, self.s_min), self.s_max)
        object.__setattr__(self, "s_avg", clamped)


def scaling_stats(transform: ScalingTransform) -> ScalingStats:
    """Min, max, and root-mean-square of the transform's factors."""
    f = transform.factors
    rms = math.sqrt(float(np.mean(f * f)))
    return ScalingStats(float(f.min()), float(f.max()), rms)


def _check_diam(diam: float) -> float:
    if not (math.isfinite(diam) and diam >= 0.0):
        raise ValueError("diameter must be finite and non-negative")
    return float(diam)


def range_upper_bound(stats: ScalingStats, diam: float) -> float:
    """Upper bound (s_max - s_min) / 2 * diam on the bottleneck distance."""
    return 0.5 * (stats.s_max - stats.s_min) * _check_diam(diam)


def refined_lower_bound(stats: ScalingStats, diam: float) -> float:
    """Lower-bound refinement (s_avg - s_min) / 2 * diam using the RMS factor."""
    return 0.5 * (stats.s_avg - stats.s_min) * _check_diam(diam)


def dimension_bound(stats: ScalingStats, k_diam: float) -> float:
    """Per-dimension upper bound: (s_max - s_min) / 2 * k_diameter."""
    if not (math.isfinite(k_diam) and k_diam >= 0.0):
        raise ValueError("k-diameter must be finite and non-negative")
    return 0.5 * (stats.s_max - stats.s_min) * float(k_diam)


def iterative_bound(transforms, diam: float) -> float:
    """Upper bound for a sequence of scalings applied one after another.

    (prod of per-step maxima - prod of per-step minima) / 2 * diam. For a
    single step this reduces to :func:`range_upper_bound`.
    """
    seq = list(transforms)
    if not seq:
        raise ValueError("need at least one transform")
    prod_max = 1.0
    prod_min = 1.0
    for t in seq:
        prod_max *= float(t.factors.max())
        prod_min *= float(t.factors.min())
    return 0.5 * (prod_max - prod_min) * _check_diam(diam)


def wasserstein_upper_bound(stats: ScalingStats, diam: float) -> float:
    """Claimed Wasserstein upper bound; same right-hand side as the bottleneck one.

    The harness audits this claim rather than asserting it.
    """
    return range_upper_bound(stats, diam)


@dataclass(frozen=True)
class ExpectedBound:
    """Expected-case bound for factors drawn iid from Uniform(a, b)."""

    mode: str
    e_smax: float
    e_smin: float
    coefficient: float
    bound: float


def expected_bound(a: float, b: float, n: int, mode: str, diam: float) -> ExpectedBound:
    """Expected bottleneck bound (E[s_max] - E[s_min]) / 2 * diam.

    Modes:
        "paper": E[s_max] = b and E[s_min] = a (the stated expectation).
        "order_statistics": exact expectations of the extremes of n iid
            Uniform(a, b) draws, E[s_max] = a + (b - a) n / (n + 1) and
            E[s_min] = a + (b - a) / (n + 1).

    For n = 1 the two modes differ: order statistics give a coefficient of
    exactly 0, "paper" gives (b - a) / 2.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("a and b must be finite")
    if a <= 0.0:
        raise ValueError("a must be strictly positive")
    if a >= b:
        raise ValueError("need a < b")
    if n < 1:
        raise ValueError("n must be at least 1")
    if mode not in EXPECTED_BOUND_MODES:
        raise ValueError(f"mode must be one of {EXPECTED_BOUND_MODES}")
    if mode == "paper":
        e_smax, e_smin = b, a
    else:
        e_smax = a + (b - a) * n / (n + 1)
        e_smin = a + (b - a) / (n + 1)
    coefficient = 0.5 * (e_smax - e_smin)
    return ExpectedBound(mode, e_smax, e_smin, coefficient, coefficient * _check_diam(diam))


def classical_stability_bound(d1: DistanceMatrix, d2: DistanceMatrix) -> float:
    """Sup-norm metric perturbation; the classical stability bound on d_B.

    This one is a correctness oracle (violations are bugs), not an audited
    hypothesis.
    """
    return metric_perturbation(d1, d2)


@dataclass(frozen=True)
class BoundSet:
    """Every bound the harness evaluates for one scenario."""

    upper: float
    lower_refined: float
    dim_bounds: dict[int, float]
    wasserstein: float
    classical: float
    iterative: float | None = None

    def __post_init__(self) -> None:
        if self.lower_refined > self.upper:
            raise ValueError("refined lower bound exceeds the upper bound")
