"""Calibration engine: replicate simulation, order-statistic quantiles, cutoff tables.

Each replicate draws a sample from the generating model, re-estimates the
exponent from that sample, and scores the Kolmogorov-Smirnov statistic
against the re-fitted model (never the generating one: cutoffs are only
valid for parameters estimated from the data).  Replicates are driven by
independent streams keyed on (base_seed, repetition, replicate_index), so
results do not depend on worker count or scheduling.
"""
from __future__ import annotations

import multiprocessing
import os
import time
from dataclasses import dataclass, field
from decimal import ROUND_FLOOR, Decimal
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .distribution import RandomStream, Support, ZipfModel, normalization, sample
from .estimate import DEFAULT_SETTINGS, NoRootError, mle_gamma
from .gof import ks_statistic

DEFAULT_LEVELS = (0.9, 0.95, 0.99, 0.999)

# Stream key offset for the single retry after an estimator failure.
_RETRY_OFFSET = 1 << 32

# Replicates per pool task; fixed so that chunking never affects results.
_SPAN = 512


class SimulationError(RuntimeError):
    """A replicate failed twice, or a table cell could not be computed."""


def _validate_levels(levels: Sequence[float]) -> tuple[float, ...]:
    out = tuple(float(q) for q in levels)
    if not out:
        raise ValueError("at least one quantile level is required")
    if any(not 0.0 < q < 1.0 for q in out):
        raise ValueError(f"quantile levels must lie in (0, 1), got {out}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError(f"quantile levels must be strictly increasing, got {out}")
    return out


@dataclass(frozen=True)
class SimulationConfig:
    """One calibration experiment: R replicates repeated and averaged."""

    n: int
    support: Support
    gamma: float
    base_seed: int
    replicates: int = 50000
    repetitions: int = 10
    quantiles: tuple[float, ...] = DEFAULT_LEVELS

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"sample size must be >= 1, got {self.n}")
        if self.replicates < 100:
            raise ValueError(f"need at least 100 replicates, got {self.replicates}")
        if self.repetitions < 1:
            raise ValueError(f"need at least one repetition, got {self.repetitions}")
        if not 0 <= int(self.base_seed) < 1 << 64:
            raise ValueError("base_seed must fit an unsigned 64-bit integer")
        object.__setattr__(self, "quantiles", _validate_levels(self.quantiles))
        normalization(self.gamma, self.support)  # validates the pair


@dataclass(frozen=True)
class ReplicateOutcome:
    ks: float
    gamma_hat: float
    replicate_index: int


@lru_cache(maxsize=8)
def _generating_model(gamma: float, support_k: int | None) -> ZipfModel:
    model = ZipfModel(gamma=gamma, support=Support(k=support_k))
    model._sampling_cdf  # build the draw table once per process
    return model


def _attempt(config: SimulationConfig, repetition: int, stream_index: int) -> tuple[float, float]:
    model = _generating_model(config.gamma, config.support.k)
    stream = RandomStream.for_replicate(config.base_seed, repetition, stream_index)
    drawn = sample(model, config.n, stream)
    gamma_hat = mle_gamma(drawn, config.support, DEFAULT_SETTINGS)
    fitted = ZipfModel(gamma=gamma_hat, support=config.support)
    return ks_statistic(drawn, fitted).statistic, gamma_hat


def run_replicate(config: SimulationConfig, index: int, repetition: int = 0) -> ReplicateOutcome:
    """Sample, re-fit, and score one replicate.

    An estimator failure is retried once on an offset stream; a second
    failure aborts, since silently dropping replicates would bias quantiles.
    """
    if not 0 <= index < config.replicates:
        raise ValueError(f"replicate index {index} outside [0, {config.replicates})")
    try:
        ks, gamma_hat = _attempt(config, repetition, index)
    except NoRootError:
        try:
            ks, gamma_hat = _attempt(config, repetition, index + _RETRY_OFFSET)
        except NoRootError as err:
            raise SimulationError(
                f"replicate {index} (repetition {repetition}, gamma={config.gamma}, "
                f"n={config.n}, support={config.support}) failed twice: {err}"
            ) from err
    return ReplicateOutcome(ks=ks, gamma_hat=gamma_hat, replicate_index=index)


def order_quantiles(stats: Sequence[float] | np.ndarray, levels: Sequence[float]) -> list[float]:
    """Order statistics at zero-based ranks floor(R * level) of the sorted array.

    The level is interpreted as the decimal it was written as, so e.g.
    R=50000, level=0.95 indexes rank 47500 even though 50000 * 0.95 rounds
    below it in binary floating point.
    """
    arr = np.sort(np.asarray(stats, dtype=np.float64))
    count = arr.size
    if count == 0:
        raise ValueError("cannot take quantiles of an empty array")
    out = []
    for level in _validate_levels(levels):
        rank = int((Decimal(str(level)) * count).to_integral_value(rounding=ROUND_FLOOR))
        if rank >= count:
            raise ValueError(f"rank {rank} out of range for {count} values")
        out.append(float(arr[rank]))
    return out


# ---------------------------------------------------------------------------
# parallel driver

_worker_config: SimulationConfig | None = None


def _pool_init(config: SimulationConfig) -> None:
    global _worker_config
    _worker_config = config
    _generating_model(config.gamma, config.support.k)


def _pool_span(task: tuple[int, int, int]) -> tuple[int, np.ndarray, np.ndarray]:
    repetition, start, stop = task
    ks = np.empty(stop - start)
    gamma_hat = np.empty(stop - start)
    for i in range(start, stop):
        outcome = run_replicate(_worker_config, i, repetition)
        ks[i - start] = outcome.ks
        gamma_hat[i - start] = outcome.gamma_hat
    return start, ks, gamma_hat


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def _spans(total: int) -> list[tuple[int, int]]:
    return [(s, min(s + _SPAN, total)) for s in range(0, total, _SPAN)]


def run_repetition(
    config: SimulationConfig, repetition: int, pool: multiprocessing.pool.Pool | None
) -> tuple[np.ndarray, np.ndarray]:
    """All replicate outcomes of one repetition, in replicate-index order."""
    total = config.replicates
    ks = np.empty(total)
    gamma_hat = np.empty(total)
    if pool is None:
        for i in range(total):
            outcome = run_replicate(config, i, repetition)
            ks[i] = outcome.ks
            gamma_hat[i] = outcome.gamma_hat
        return ks, gamma_hat
    tasks = [(repetition, start, stop) for start, stop in _spans(total)]
    for start, span_ks, span_gh in pool.imap_unordered(_pool_span, tasks):
        ks[start : start + span_ks.size] = span_ks
        gamma_hat[start : start + span_gh.size] = span_gh
    return ks, gamma_hat


def run_simulation(
    config: SimulationConfig, workers: int | None = None
) -> list[tuple[float, float]]:
    """(level, cutoff) pairs: per-repetition order quantiles averaged over repetitions."""
    workers = resolve_workers(workers)
    per_level = np.zeros(len(config.quantiles))
    if workers == 1:
        for repetition in range(config.repetitions):
            ks, _ = run_repetition(config, repetition, pool=None)
            per_level += np.asarray(order_quantiles(ks, config.quantiles))
    else:
        with multiprocessing.get_context().Pool(
            workers, initializer=_pool_init, initargs=(config,)
        ) as pool:
            for repetition in range(config.repetitions):
                ks, _ = run_repetition(config, repetition, pool)
                per_level += np.asarray(order_quantiles(ks, config.quantiles))
    per_level /= config.repetitions
    return list(zip(config.quantiles, (float(c) for c in per_level)))


# ---------------------------------------------------------------------------
# cutoff tables

class CutoffLookupError(LookupError):
    """No tabulated cell matches the requested (gamma, n, level)."""


# A fitted exponent must sit this close to a tabulated one for lookup to
# apply; cutoffs vary too steeply in gamma to interpolate.
GAMMA_LOOKUP_WINDOW = 0.005


@dataclass(frozen=True, eq=True)
class CutoffTable:
    """Grid of cutoffs over (gamma, n) for one support, plus its provenance."""

    support: Support
    levels: tuple[float, ...]
    gammas: tuple[float, ...]
    ns: tuple[int, ...]
    cells: dict[tuple[float, int], tuple[float, ...]] = field(compare=True)
    replicates: int = 50000
    repetitions: int = 10
    base_seed: int = 0

    def cutoffs_for(self, gamma: float, n: int) -> tuple[float, ...]:
        """Cutoff row for an estimated exponent within the lookup window of the grid."""
        if n not in self.ns:
            raise CutoffLookupError(
                f"no tabulated sample size n={n}; compute a bespoke cutoff instead"
            )
        deltas = [(abs(g - gamma), g) for g in self.gammas]
        delta, nearest = min(deltas)
        if delta > GAMMA_LOOKUP_WINDOW + 1e-12:
            raise CutoffLookupError(
                f"estimated exponent {gamma:.4f} is not within ±{GAMMA_LOOKUP_WINDOW} of "
                f"any tabulated value; compute a bespoke cutoff instead"
            )
        return self.cells[(nearest, n)]

    def cutoff(self, gamma: float, n: int, level: float) -> float:
        row = self.cutoffs_for(gamma, n)
        try:
            return row[self.levels.index(float(level))]
        except ValueError:
            raise CutoffLookupError(f"level {level} not tabulated (have {self.levels})") from None


def build_table(
    ns: Iterable[int],
    gammas: Iterable[float],
    support: Support,
    base_seed: int,
    replicates: int = 50000,
    repetitions: int = 10,
    quantiles: Sequence[float] = DEFAULT_LEVELS,
    workers: int | None = None,
    progress: Callable[[float, int, float, tuple[float, ...]], None] | None = None,
) -> CutoffTable:
    """Fill the (gamma, n) grid cell by cell with run_simulation.

    Every cell reuses the same base_seed, so any single cell is reproducible
    with a standalone run_simulation call on that cell's configuration.
    """
    ns = tuple(int(n) for n in ns)
    gammas = tuple(float(g) for g in gammas)
    if not ns or not gammas:
        raise ValueError("both grids must be nonempty")
    levels = _validate_levels(quantiles)
    cells: dict[tuple[float, int], tuple[float, ...]] = {}
    for gamma in gammas:
        for n in ns:
            config = SimulationConfig(
                n=n,
                support=support,
                gamma=gamma,
                base_seed=base_seed,
                replicates=replicates,
                repetitions=repetitions,
                quantiles=levels,
            )
            started = time.perf_counter()
            try:
                pairs = run_simulation(config, workers)
            except Exception as err:
                raise SimulationError(f"table cell (gamma={gamma}, n={n}) failed: {err}") from err
            row = tuple(cutoff for _, cutoff in pairs)
            cells[(gamma, n)] = row
            if progress is not None:
                progress(gamma, n, time.perf_counter() - started, row)
    return CutoffTable(
        support=support,
        levels=levels,
        gammas=gammas,
        ns=ns,
        cells=cells,
        replicates=replicates,
        repetitions=repetitions,
        base_seed=base_seed,
    )
