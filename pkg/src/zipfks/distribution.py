"""Discrete power-law (Zipf) models: support, normalization, pmf/cdf, sampling.

Two flavours share one type: a truncated model over 1..K (any real
exponent) and an unbounded model over all positive integers (exponent
at least MIN_UNBOUNDED_GAMMA so the normalizing series converges fast
enough to evaluate).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .series import MAX_FINITE_SUPPORT, natural_logs, tail_mass, zeta_value

# Smallest exponent admitted for the unbounded model.
MIN_UNBOUNDED_GAMMA = 1.05

# Draws from the unbounded model come from its restriction to
# 1..UNBOUNDED_SAMPLE_LIMIT, renormalized.  The omitted tail mass is
# negligible for gamma >= 1.5 and about 6% at gamma = 1.25; fitting marginal
# exponents against samples produced this way is exactly what the reference
# cutoff grids assume.
UNBOUNDED_SAMPLE_LIMIT = 65535

# Partial sums of the unbounded model are read from a dense table up to here
# and closed with the series tail beyond.
_PARTIAL_SEAM = 4096


@dataclass(frozen=True)
class Support:
    """Support declaration: 1..k when k is an int, all positive integers when None."""

    k: int | None

    def __post_init__(self) -> None:
        if self.k is not None:
            if not isinstance(self.k, (int, np.integer)) or isinstance(self.k, bool):
                raise ValueError(f"finite support bound must be an integer, got {self.k!r}")
            if self.k < 2 or self.k > MAX_FINITE_SUPPORT:
                raise ValueError(
                    f"finite support bound must be in [2, {MAX_FINITE_SUPPORT}], got {self.k}"
                )
            object.__setattr__(self, "k", int(self.k))

    @classmethod
    def finite(cls, k: int) -> "Support":
        return cls(k=k)

    @classmethod
    def unbounded(cls) -> "Support":
        return cls(k=None)

    @property
    def is_finite(self) -> bool:
        return self.k is not None

    def contains(self, values: np.ndarray) -> bool:
        if values.size == 0:
            return True
        vmin, vmax = int(values.min()), int(values.max())
        return vmin >= 1 and (self.k is None or vmax <= self.k)

    def __str__(self) -> str:
        return "inf" if self.k is None else str(self.k)


def normalization(gamma: float, support: Support) -> float:
    """sum of k^(-gamma) over the support, each term taken as exp(-gamma ln k)."""
    if not math.isfinite(gamma):
        raise ValueError(f"exponent must be finite, got {gamma}")
    if support.is_finite:
        logs = natural_logs(support.k)[1 : support.k + 1]
        total = float(np.exp(-gamma * logs).sum())
        if not math.isfinite(total):
            raise ValueError(f"normalizer overflows at gamma={gamma} with K={support.k}")
        return total
    if gamma < MIN_UNBOUNDED_GAMMA:
        raise ValueError(
            f"unbounded support requires gamma >= {MIN_UNBOUNDED_GAMMA}, got {gamma}"
        )
    return zeta_value(gamma)


@dataclass(frozen=True)
class ZipfModel:
    """p(k) = k^(-gamma) / norm over the declared support."""

    gamma: float
    support: Support
    norm: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "norm", normalization(self.gamma, self.support))

    @cached_property
    def _sampling_cdf(self) -> np.ndarray:
        """Cumulative probabilities over 1..limit used by inverse-transform draws."""
        limit = self.support.k if self.support.is_finite else UNBOUNDED_SAMPLE_LIMIT
        logs = natural_logs(limit)[1 : limit + 1]
        weights = np.exp(-self.gamma * logs)
        return np.cumsum(weights * (1.0 / weights.sum()))

    @cached_property
    def _partial_table(self) -> np.ndarray:
        """Running sums of pmf over 1..seam for unbounded cdf queries."""
        seam = _PARTIAL_SEAM
        logs = natural_logs(seam)[1 : seam + 1]
        return np.cumsum(np.exp(-self.gamma * logs) * (1.0 / self.norm))

    def _sample_limit(self) -> int:
        return self.support.k if self.support.is_finite else UNBOUNDED_SAMPLE_LIMIT

    def pmf(self, k: int) -> float:
        return pmf(self, k)

    def cdf(self, k: int) -> float:
        return cdf(self, k)


@dataclass(frozen=True)
class Sample:
    """Ordered collection of positive integer observations."""

    observations: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.observations)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("a sample must be a nonempty one-dimensional collection")
        if not np.issubdtype(values.dtype, np.integer):
            if not np.all(values == np.floor(values)):
                raise ValueError("observations must be integers")
            values = values.astype(np.int64)
        else:
            values = values.astype(np.int64, copy=False)
        if values.min() < 1:
            raise ValueError("observations must be positive integers")
        object.__setattr__(self, "observations", values)

    @property
    def n(self) -> int:
        return int(self.observations.size)


def _check_in_support(model: ZipfModel, k: int) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"support point must be an integer, got {k!r}")
    k = int(k)
    if k < 1 or (model.support.is_finite and k > model.support.k):
        raise ValueError(f"value {k} lies outside the support 1..{model.support}")
    return k


def pmf(model: ZipfModel, k: int) -> float:
    """Probability of observing k; values outside the support are an error."""
    k = _check_in_support(model, k)
    return math.exp(-model.gamma * math.log(k)) * (1.0 / model.norm)


def cdf(model: ZipfModel, k: int) -> float:
    """Probability of observing a value <= k."""
    k = _check_in_support(model, k)
    if model.support.is_finite or k <= _PARTIAL_SEAM:
        logs = natural_logs(k)[1 : k + 1]
        return float((np.exp(-model.gamma * logs) * (1.0 / model.norm)).sum())
    return float((model.norm - tail_mass(model.gamma, k + 1)) / model.norm)


class RandomStream:
    """Deterministic uniform(0, 1] stream; single-owner, one per replicate."""

    __slots__ = ("_generator",)

    def __init__(self, key: int | list[int]) -> None:
        self._generator = np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))

    @classmethod
    def for_replicate(cls, base_seed: int, repetition: int, index: int) -> "RandomStream":
        """Independent stream keyed by (seed, repetition, replicate); worker-count free."""
        return cls([int(base_seed), int(repetition), int(index)])

    def uniforms(self, count: int) -> np.ndarray:
        return 1.0 - self._generator.random(count)


def sample(model: ZipfModel, n: int, stream: RandomStream) -> Sample:
    """Draw n values by inverse transform: the smallest k with cdf(k) >= u.

    Finite supports use the exact model cdf and clamp to K against end-of-table
    rounding.  Unbounded supports draw from the model restricted to
    1..UNBOUNDED_SAMPLE_LIMIT (see the constant's note).
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    u = stream.uniforms(n)
    values = np.searchsorted(model._sampling_cdf, u, side="left") + 1
    return Sample(np.minimum(values, model._sample_limit()))
