"""Outlier-robust Wasserstein distances: exact, entropic, and sliced solvers."""

from ._core import (
    Measure,
    RwotError,
    Solution,
    detect_elbow,
    dist,
    empirical,
    independence_test,
    mde,
    one_sided,
    resilience_bound,
    robust,
    robust_asymmetric,
    sinkhorn,
    sliced,
    sweep,
    two_sample_test,
)

__all__ = [
    "Measure",
    "RwotError",
    "Solution",
    "detect_elbow",
    "dist",
    "empirical",
    "independence_test",
    "mde",
    "one_sided",
    "resilience_bound",
    "robust",
    "robust_asymmetric",
    "sinkhorn",
    "sliced",
    "sweep",
    "two_sample_test",
]
