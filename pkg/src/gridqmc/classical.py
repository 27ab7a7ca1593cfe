"""Classical baselines: exact enumeration and seeded Monte Carlo.

The enumeration oracle walks every joint injection bin explicitly and is
kept independent of the quantum flow-map construction, so the two paths can
be checked against each other.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConfigurationError, EnumerationBoundError
from .estimation import EstimationResult
from .injection import InjectionDistribution

_MAX_ENUM_STATES = 2**20
_VALUE_TOL = 1e-9


@dataclass(frozen=True)
class ExactDistribution:
    """Exact distribution of the absolute line loading.

    ``std_normalized`` is the standard deviation of the loading expressed
    as a fraction of the line rating, the unit in which the sample-count
    formula and epsilon are stated.
    """

    values: np.ndarray
    probabilities: np.ndarray
    mean: float
    std: float
    std_normalized: float

    def overload_probability(self, threshold: float) -> float:
        return float(self.probabilities[self.values >= threshold - _VALUE_TOL].sum())

    def metric(self, metric: str, threshold: float | None = None) -> float:
        if metric == "mean":
            return self.mean
        if metric == "overload":
            if threshold is None:
                raise ConfigurationError("overload metric needs a threshold")
            return self.overload_probability(threshold)
        raise ConfigurationError(f"unknown metric {metric!r}")


def exact_line_distribution(
    h_row: np.ndarray, distributions: list[InjectionDistribution]
) -> ExactDistribution:
    """Enumerate every joint bin and accumulate mass per distinct |loading|."""
    h_row = np.asarray(h_row, dtype=float)
    if len(h_row) != len(distributions):
        raise ConfigurationError("h_row length must match the number of distributions")
    total_states = 1
    for dist in distributions:
        total_states *= len(dist.values_mw)
    if total_states > _MAX_ENUM_STATES:
        raise EnumerationBoundError(f"{total_states} joint states exceed the enumeration bound")

    pairs: list[tuple[float, float]] = []
    bin_ranges = [range(len(d.values_mw)) for d in distributions]
    for combo in itertools.product(*bin_ranges):
        loading = 0.0
        prob = 1.0
        for h, dist, j in zip(h_row, distributions, combo):
            loading += h * dist.values_mw[j]
            prob *= dist.probabilities[j]
        if prob > 0.0:
            pairs.append((abs(loading), prob))

    pairs.sort()
    values: list[float] = []
    probs: list[float] = []
    for loading, prob in pairs:
        if values and loading - values[-1] <= _VALUE_TOL:
            # merge into the running cluster, mass-weighted representative
            merged = probs[-1] + prob
            if merged > 0:
                values[-1] = (values[-1] * probs[-1] + loading * prob) / merged
            probs[-1] = merged
        else:
            values.append(loading)
            probs.append(prob)

    values_arr = np.array(values)
    probs_arr = np.array(probs)
    mean = float(values_arr @ probs_arr)
    var = float(((values_arr - mean) ** 2) @ probs_arr)
    std = math.sqrt(max(var, 0.0))
    return ExactDistribution(
        values=values_arr, probabilities=probs_arr, mean=mean, std=std, std_normalized=std
    )


def _critical_value(alpha: float) -> float:
    # 1.96 pinned for the standard 95% interval; tables are quoted with it
    if abs(alpha - 0.05) < 1e-12:
        return 1.96
    return float(stats.norm.ppf(1 - alpha / 2))


def required_samples(sigma_n: float, epsilon: float, alpha: float) -> int:
    """Monte Carlo sample count for a target margin of error.

    Rounds the real value to the nearest integer.
    """
    if epsilon <= 0:
        raise ConfigurationError("epsilon must be > 0")
    z = _critical_value(alpha)
    return int(round(z**2 * sigma_n**2 / epsilon**2))


def classical_mc(
    h_row: np.ndarray,
    distributions: list[InjectionDistribution],
    metric: str,
    epsilon: float,
    alpha: float,
    rng_seed: int,
    threshold: float | None = None,
) -> EstimationResult:
    """Plain Monte Carlo estimate with a margin-of-error interval.

    The sample count comes from the classically computed standard deviation
    of the metric variable; sampling is inverse-CDF per bus with a seeded
    generator.
    """
    exact = exact_line_distribution(h_row, distributions)
    if metric == "mean":
        sigma_n = exact.std_normalized
    elif metric == "overload":
        if threshold is None:
            raise ConfigurationError("overload metric needs a threshold")
        p = exact.overload_probability(threshold)
        sigma_n = math.sqrt(p * (1 - p))
    else:
        raise ConfigurationError(f"unknown metric {metric!r}")

    n = required_samples(sigma_n, epsilon, alpha)
    if n == 0:
        value = exact.metric(metric, threshold)
        return EstimationResult(
            method="cmc", raw_a=value, metric_value=value, ci_low=value, ci_high=value,
            shots_total=0, oracle_applications=0, epsilon=epsilon, alpha=alpha, seed=rng_seed,
        )

    rng = np.random.default_rng(rng_seed)
    h_row = np.asarray(h_row, dtype=float)
    loading = np.zeros(n)
    for h, dist in zip(h_row, distributions):
        draws = rng.choice(dist.values_mw, size=n, p=dist.probabilities)
        loading += h * draws
    loading = np.abs(loading)
    samples = loading if metric == "mean" else (loading >= threshold - _VALUE_TOL).astype(float)

    estimate = float(samples.mean())
    sigma_sample = float(samples.std(ddof=1))
    margin = _critical_value(alpha) * sigma_sample / math.sqrt(n)
    return EstimationResult(
        method="cmc",
        raw_a=estimate,
        metric_value=estimate,
        ci_low=estimate - margin,
        ci_high=estimate + margin,
        shots_total=n,
        oracle_applications=n,
        epsilon=epsilon,
        alpha=alpha,
        seed=rng_seed,
    )
