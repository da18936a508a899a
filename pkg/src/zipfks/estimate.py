"""Maximum-likelihood estimation of the Zipf exponent.

The estimate solves  mean_log(data) = s1(gamma) / s0(gamma)  where
s_p(gamma) = sum k^(-gamma) (ln k)^p over the declared support, by
Newton-Raphson with a bisection fallback.  The left side is the sample
mean of ln x; the right side is the model mean of ln X, strictly
decreasing in gamma, so the root is unique whenever it exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import MIN_UNBOUNDED_GAMMA, Sample, Support
from .series import finite_log_moments, natural_logs, zeta_log_moments

# Hard ceiling of the unbounded search range; estimates above it are reported
# as no-root rather than extrapolated.
MAX_UNBOUNDED_GAMMA = 20.0


@dataclass(frozen=True)
class MleSettings:
    """Newton-Raphson controls.

    The bracket is the fallback bisection range and the admissible region for
    Newton iterates.  It spans negative exponents on purpose: short-tailed
    samples over a finite support (common at n <= 50 when the generating
    exponent is below ~0.75) have their likelihood maximum there, and the
    calibration pipeline must fit them rather than fail.
    """

    initial_guess: float = 0.5
    absolute_tolerance: float = 1e-5
    max_iterations: int = 200
    bracket: tuple[float, float] = (-20.0, 20.0)

    def __post_init__(self) -> None:
        if self.absolute_tolerance <= 0:
            raise ValueError("absolute_tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        low, high = self.bracket
        if not low < self.initial_guess < high:
            raise ValueError("bracket must satisfy low < initial_guess < high")


DEFAULT_SETTINGS = MleSettings()

_LN2 = math.log(2.0)


class NoRootError(ValueError):
    """The estimating equation has no root inside the admissible range."""


def log_mean(sample: Sample) -> float:
    """(sum ln x_i) / n, with the all-ones degenerate case nudged by ln 2.

    A sample of all ones has log-sum zero and would drive the estimate to
    infinity; it is scored as if a single observation were 2 instead.
    """
    obs = sample.observations
    vmax = int(obs.max())
    if vmax <= 1 << 20:
        raw = float(natural_logs(vmax)[obs].sum())
    else:
        raw = float(np.log(obs.astype(np.float64)).sum())
    if raw <= 0.0:
        raw += _LN2
    return raw / sample.n


def _mean_log_and_slope(gamma: float, support: Support) -> tuple[float, float]:
    """Model mean of ln X and the variance of ln X (its negative slope)."""
    if support.is_finite:
        s0, s1, s2 = finite_log_moments(gamma, support.k)
    else:
        s0, s1, s2 = zeta_log_moments(gamma)
    mean = s1 / s0
    return mean, s2 / s0 - mean * mean


def _search_range(support: Support, settings: MleSettings) -> tuple[float, float]:
    low, high = settings.bracket
    if not support.is_finite:
        low = max(low, MIN_UNBOUNDED_GAMMA)
        high = min(high, MAX_UNBOUNDED_GAMMA)
    return low, high


def _bisect(target: float, support: Support, low: float, high: float) -> float:
    f_low = target - _mean_log_and_slope(low, support)[0]
    f_high = target - _mean_log_and_slope(high, support)[0]
    if f_low == 0.0:
        return low
    if f_high == 0.0:
        return high
    if f_low * f_high > 0.0:
        raise NoRootError(
            f"estimating equation has no root in [{low}, {high}] "
            f"(mean log of data: {target:.6g})"
        )
    while high - low > 1e-8:
        mid = 0.5 * (low + high)
        if (target - _mean_log_and_slope(mid, support)[0]) * f_low <= 0.0:
            high = mid
        else:
            low = mid
    return 0.5 * (low + high)


def mle_gamma(sample: Sample, support: Support, settings: MleSettings = DEFAULT_SETTINGS) -> float:
    """Exponent estimate for the sample over the declared support.

    Newton-Raphson from settings.initial_guess; iterates leaving the bracket
    (or failing to converge within max_iterations) fall back to bisection.
    Raises NoRootError when the bracket does not straddle a root.
    """
    obs = sample.observations
    if not support.contains(obs):
        raise ValueError(f"observations exceed the declared support 1..{support}")
    target = log_mean(sample)
    if support.is_finite and int(obs.min()) == support.k:
        # every observation at the support bound: the root sits at -infinity,
        # so mirror the all-ones nudge and score one observation as K-1
        target -= (math.log(support.k) - math.log(support.k - 1)) / sample.n
    low, high = _search_range(support, settings)
    x = settings.initial_guess
    if not low < x < high:
        # Start just inside the admissible range.  The model mean-log is
        # convex decreasing in gamma, so Newton climbs monotonically from the
        # left edge without overshooting.
        x = low + 0.01
    for _ in range(settings.max_iterations):
        mean, slope = _mean_log_and_slope(x, support)
        step = (mean - target) / slope
        x_new = x + step
        if not math.isfinite(x_new) or x_new < low or x_new > high:
            return _bisect(target, support, low, high)
        if abs(x_new - x) <= settings.absolute_tolerance:
            return x_new
        x = x_new
    return _bisect(target, support, low, high)
