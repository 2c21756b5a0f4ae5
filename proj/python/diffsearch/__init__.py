"""Search time, energy and success statistics for diffusion-based searchers."""

from ._diffsearch import (
    RaceFixedPoint,
    SearchError,
    SearchParams,
    attempt_success_probability,
    cdf,
    classify_finiteness,
    deterministic_limit_mean_time,
    mean_energy,
    mean_time,
    mean_time_fixed_point,
    optimal_timeout,
    order_statistic_cdf,
    phase_sweep,
    quantile,
    searchers_needed,
    segmented_mean_time,
    simulate_race,
)

__version__ = "0.1.0"

__all__ = [
    "RaceFixedPoint",
    "SearchError",
    "SearchParams",
    "attempt_success_probability",
    "cdf",
    "classify_finiteness",
    "deterministic_limit_mean_time",
    "mean_energy",
    "mean_time",
    "mean_time_fixed_point",
    "optimal_timeout",
    "order_statistic_cdf",
    "phase_sweep",
    "quantile",
    "searchers_needed",
    "segmented_mean_time",
    "simulate_race",
]
