"""Observations, samples, per-(z, d) cell statistics and the two validity conditions.

Instrument values are dense integers 0..K. Sparse or non-integer instruments are
recoded at ingestion (see report.load_csv).
"""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from errors import ConditionError, DataError, MissingInstrumentLevelError


@dataclass(frozen=True)
class Observation:
    """One sample realization (Y, D, Z, X)."""
    y: float
    d: int
    z: int
    x: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class Sample:
    """Immutable column store of observations.

    Arrays are copied and flagged read-only on construction, so a Sample can be
    shared between threads.
    """
    y: np.ndarray
    d: np.ndarray
    z: np.ndarray
    x: np.ndarray
    k_max: int

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        d = np.array(self.d)
        z = np.array(self.z)
        n = y.shape[0] if y.ndim == 1 else 0
        if y.ndim != 1 or n == 0:
            raise DataError("sample must be a nonempty one-dimensional collection")
        if d.shape != (n,) or z.shape != (n,):
            raise DataError("y, d and z must have the same length")
        if not np.all(np.isfinite(y)):
            raise DataError("outcomes must be finite")
        if not np.all(np.isin(d, (0, 1))):
            raise DataError("treatment must be 0 or 1")
        if not np.all(np.equal(np.mod(z, 1), 0)) or np.any(z < 0):
            raise DataError("instrument values must be nonnegative integers")
        d = d.astype(np.int8)
        z = z.astype(np.int64)

        x = np.array(self.x, dtype=float) if self.x is not None else np.empty((n, 0))
        if x.size == 0:
            x = np.empty((n, 0))
        elif x.ndim == 1:
            x = x[:, None]
        if x.shape[0] != n:
            raise DataError("covariates must have one row per observation")
        if not np.all(np.isfinite(x)):
            raise DataError("covariates must be finite")

        k_max = int(self.k_max) if self.k_max is not None else int(z.max())
        if z.max() > k_max:
            raise DataError(f"instrument value {int(z.max())} exceeds k_max={k_max}")

        for name, arr in (("y", y), ("d", d), ("z", z), ("x", x)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "k_max", k_max)

    @classmethod
    def from_arrays(cls, y, d, z, x=None, k_max: int | None = None) -> "Sample":
        return cls(y=y, d=d, z=z, x=x, k_max=k_max)

    @classmethod
    def from_observations(cls, observations: Iterable[Observation], k_max: int | None = None) -> "Sample":
        obs = list(observations)
        if not obs:
            raise DataError("sample must be nonempty")
        widths = {len(o.x) for o in obs}
        if len(widths) != 1:
            raise DataError("all observations must have the same covariate dimension")
        width = widths.pop()
        x = np.array([o.x for o in obs], dtype=float).reshape(len(obs), width)
        return cls(
            y=[o.y for o in obs], d=[o.d for o in obs], z=[o.z for o in obs],
            x=x, k_max=k_max,
        )

    @property
    def n(self) -> int:
        return int(self.y.shape[0])

    @property
    def n_covariates(self) -> int:
        return int(self.x.shape[1])

    @property
    def observations(self) -> list[Observation]:
        return list(self)

    def __iter__(self) -> Iterator[Observation]:
        for i in range(self.n):
            yield Observation(float(self.y[i]), int(self.d[i]), int(self.z[i]), tuple(self.x[i]))

    def __len__(self) -> int:
        return self.n

    def subset(self, mask: np.ndarray, k_max: int | None = None) -> "Sample":
        """Rows selected by a boolean mask; keeps k_max unless given."""
        mask = np.asarray(mask, dtype=bool)
        return Sample(self.y[mask], self.d[mask], self.z[mask], self.x[mask],
                      self.k_max if k_max is None else k_max)

    def take(self, index: np.ndarray) -> "Sample":
        """Rows at integer positions (used by the bootstrap)."""
        return Sample(self.y[index], self.d[index], self.z[index], self.x[index], self.k_max)

    def with_outcome(self, y: np.ndarray) -> "Sample":
        return Sample(y, self.d, self.z, self.x, self.k_max)

    def with_instrument(self, z: np.ndarray, k_max: int) -> "Sample":
        return Sample(self.y, self.d, z, self.x, k_max)


@dataclass(frozen=True, eq=False)
class CellStats:
    """Per-(z, d) counts and mean outcomes, plus empirical propensities P̂(z).

    Rows index z = 0..K, columns index d = 0, 1. Empty cells hold NaN means.
    """
    n_zd: np.ndarray
    ybar_zd: np.ndarray
    p_hat: np.ndarray
    ybar_z: np.ndarray

    @property
    def k_max(self) -> int:
        return self.n_zd.shape[0] - 1

    @property
    def n(self) -> int:
        return int(self.n_zd.sum())

    def ybar(self, d: int, z: int) -> float:
        """Ȳ_d^z."""
        return float(self.ybar_zd[z, d])


def _mean(values: np.ndarray, weights: np.ndarray | None) -> float:
    # fsum is exactly rounded, so cell means do not depend on row order
    if weights is None:
        return math.fsum(values) / values.shape[0]
    return math.fsum(values * weights) / math.fsum(weights)


def cell_stats(sample: Sample, weights: np.ndarray | None = None) -> CellStats:
    """Cell counts, cell means Ȳ_d^z and P̂(z) for z = 0..K.

    With weights, means and propensities are weighted averages while n_zd stays
    the raw count. Raises MissingInstrumentLevelError for an empty z.
    """
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (sample.n,) or np.any(weights <= 0):
            raise DataError("weights must be positive, one per observation")

    levels = sample.k_max + 1
    n_zd = np.zeros((levels, 2), dtype=np.int64)
    ybar_zd = np.full((levels, 2), np.nan)
    p_hat = np.empty(levels)
    ybar_z = np.empty(levels)

    for z in range(levels):
        in_z = sample.z == z
        if not np.any(in_z):
            raise MissingInstrumentLevelError(z)
        wz = None if weights is None else weights[in_z]
        p_hat[z] = _mean(sample.d[in_z].astype(float), wz)
        ybar_z[z] = _mean(sample.y[in_z], wz)
        for d in (0, 1):
            cell = in_z & (sample.d == d)
            n_zd[z, d] = int(np.count_nonzero(cell))
            if n_zd[z, d]:
                ybar_zd[z, d] = _mean(sample.y[cell], None if weights is None else weights[cell])

    for arr in (n_zd, ybar_zd, p_hat, ybar_z):
        arr.setflags(write=False)
    return CellStats(n_zd=n_zd, ybar_zd=ybar_zd, p_hat=p_hat, ybar_z=ybar_z)


def check_condition1(stats: CellStats, z_low: int, z_high: int) -> bool:
    """First stage: P̂(z_high) > P̂(z_low) strictly."""
    return bool(stats.p_hat[z_high] > stats.p_hat[z_low])


def check_condition2(sample: Sample, z_low: int, z_high: int) -> bool:
    """Every (z, d) cell over {z_low, z_high} x {0, 1} is nonempty."""
    for z in (z_low, z_high):
        for d in (0, 1):
            if not np.any((sample.z == z) & (sample.d == d)):
                return False
    return True


def require_conditions(stats: CellStats, z_low: int, z_high: int, cell: str | None = None) -> None:
    """Raise ConditionError naming the first violated condition for the pair."""
    pair = (z_low, z_high)
    empty = [f"(z={z}, d={d})" for z in pair for d in (0, 1) if stats.n_zd[z, d] == 0]
    if empty:
        raise ConditionError(2, pair, "empty cells " + ", ".join(empty), cell=cell)
    if not check_condition1(stats, z_low, z_high):
        raise ConditionError(
            1, pair,
            f"P̂({z_high})={stats.p_hat[z_high]:.6g} <= P̂({z_low})={stats.p_hat[z_low]:.6g}",
            cell=cell,
        )


def require_adjacent_conditions(stats: CellStats, cell: str | None = None) -> None:
    """Conditions 1-2 for every adjacent instrument pair (z-1, z)."""
    for z in range(1, stats.k_max + 1):
        require_conditions(stats, z - 1, z, cell=cell)


@dataclass(frozen=True, eq=False)
class BinaryCellCounts:
    """Counts of (Z, D, Y) for binary instrument, treatment and outcome.

    counts[z, d, y] are the eight sufficient statistics of the binary-outcome
    likelihood.
    """
    counts: np.ndarray

    def cell(self, z: int, d: int, y: int) -> int:
        return int(self.counts[z, d, y])


def is_binary_outcome(sample: Sample) -> bool:
    return bool(np.all(np.isin(sample.y, (0.0, 1.0))))


def binary_counts(sample: Sample) -> BinaryCellCounts:
    """Eight (z, d, y) cell counts; requires binary Y and binary Z."""
    if not is_binary_outcome(sample):
        raise DataError("outcome must be binary (0/1)")
    if sample.k_max != 1:
        raise DataError("binary-outcome likelihood needs a binary instrument")
    counts = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(counts, (sample.z, sample.d, sample.y.astype(np.int64)), 1)
    counts.setflags(write=False)
    return BinaryCellCounts(counts)
