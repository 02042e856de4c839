"""Stratified nonparametric bootstrap with deterministic per-replicate substreams."""

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from errors import CfEquivError, ConfigError, DegeneracyError
from sample import Sample

logger = logging.getLogger(__name__)

DEFAULT_REPLICATES = 1000
# Resampling draws allowed per replicate, pooled: B replicates may use 10 * B draws in total.
MAX_REDRAWS = 10


@dataclass(frozen=True, eq=False)
class BootstrapDraws:
    """Replicate statistics (B x m) and resampling bookkeeping."""
    draws: np.ndarray
    attempts: int
    discarded: int

    @property
    def cov(self) -> np.ndarray:
        return np.atleast_2d(np.cov(self.draws, rowvar=False, ddof=1))


def replicate_rng(seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    """Independent Philox stream for draw `attempt` of replicate `index`."""
    key = (index,) if attempt == 0 else (index, attempt)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def stratified_resample(sample: Sample, rng: np.random.Generator) -> Sample:
    """Draw n_z rows with replacement within every instrument level z."""
    parts = []
    for z in range(sample.k_max + 1):
        rows = np.flatnonzero(sample.z == z)
        if rows.size:
            parts.append(rng.choice(rows, size=rows.size, replace=True))
    return sample.take(np.sort(np.concatenate(parts)))


def _attempt(sample: Sample, statistic: Callable, seed: int, index: int, attempt: int) -> np.ndarray | None:
    resample = stratified_resample(sample, replicate_rng(seed, index, attempt))
    try:
        return np.atleast_1d(np.asarray(statistic(resample), dtype=float))
    except CfEquivError as exc:
        logger.debug("replicate %d attempt %d discarded: %s", index, attempt + 1, exc)
        return None


def bootstrap(sample: Sample, statistic: Callable[[Sample], object], replicates: int = DEFAULT_REPLICATES,
              seed: int | None = None, jobs: int = 1) -> BootstrapDraws:
    """Evaluate `statistic` on B stratified resamples.

    Resamples on which the statistic raises a CfEquivError (condition
    failures, rank deficiency) are discarded and redrawn in the next round.
    Every draw has its own (replicate, attempt) stream, so the draws do not
    depend on how joblib schedules them. Raises DegeneracyError when the
    replicates would need more than MAX_REDRAWS * B draws in total.
    """
    if seed is None:
        raise ConfigError("bootstrap needs an explicit seed")
    if replicates < 2:
        raise ConfigError(f"bootstrap needs at least 2 replicates, got {replicates}")

    budget = MAX_REDRAWS * replicates
    values: list[np.ndarray | None] = [None] * replicates
    pending = list(range(replicates))
    attempts = 0
    with Parallel(n_jobs=jobs) as parallel:
        for attempt in itertools.count():
            if not pending:
                break
            if attempts + len(pending) > budget:
                raise DegeneracyError(f"bootstrap: no {replicates} valid resamples within {budget} draws")
            results = parallel(delayed(_attempt)(sample, statistic, seed, i, attempt) for i in pending)
            attempts += len(pending)
            for index, value in zip(pending, results):
                values[index] = value
            pending = [index for index, value in zip(pending, results) if value is None]

    logger.debug("bootstrap: B=%d attempts=%d", replicates, attempts)
    return BootstrapDraws(draws=np.vstack(values), attempts=attempts, discarded=attempts - replicates)
