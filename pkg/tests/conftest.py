"""Shared pytest fixtures: hand-computable samples and seeded random fixtures."""

from pathlib import Path

import numpy as np
import pytest

# Add project root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from dgps import DgpSpec, gen_binary_sample, gen_late_sample
from errors import CfEquivError
from sample import Sample, cell_stats, require_adjacent_conditions

# (y, d, z) rows. Z=0: D=1 {2}, D=0 {0, 1, -1}; Z=1: D=1 {2, 1, 0}, D=0 {1}.
TOY8_ROWS = [
    (2.0, 1, 0), (0.0, 0, 0), (1.0, 0, 0), (-1.0, 0, 0),
    (2.0, 1, 1), (1.0, 1, 1), (0.0, 1, 1), (1.0, 0, 1),
]

# Binary outcomes whose IV treated-complier mean is 2.
# Z=1: D=1 six obs all Y=1, D=0 four obs two Y=1; Z=0: D=1 five obs four Y=1, D=0 five obs two Y=1.
CORNER_CELLS = {
    (1, 1): (6, 6), (1, 0): (4, 2),
    (0, 1): (5, 4), (0, 0): (5, 2),
}

# Lower bound on |P̂(z) - P̂(z-1)| for random fixtures, keeping Wald denominators away from zero
MIN_FIRST_STAGE = 0.05


def sample_from_rows(rows) -> Sample:
    y, d, z = zip(*rows)
    return Sample.from_arrays(y, d, z)


def sample_from_cells(cells: dict[tuple[int, int], tuple[int, int]]) -> Sample:
    """Binary-outcome sample from {(z, d): (count, count with Y=1)}."""
    rows = []
    for (z, d), (count, ones) in sorted(cells.items()):
        rows += [(1.0, d, z)] * ones + [(0.0, d, z)] * (count - ones)
    return sample_from_rows(rows)


def _usable(sample: Sample) -> bool:
    parts = [sample]
    if sample.n_covariates:
        parts = [sample.subset(sample.x[:, 0] == v, k_max=sample.k_max) for v in (0.0, 1.0)]
    for part in parts:
        try:
            stats = cell_stats(part)
            require_adjacent_conditions(stats)
        except CfEquivError:
            return False
        if np.any(np.diff(stats.p_hat) < MIN_FIRST_STAGE):
            return False
    return True


def random_late_samples(count: int, seed: int = 2026, k_max: int = 1, n_range=(20, 500),
                        covariate: bool = False) -> list[Sample]:
    """Seeded nonparametric-LATE samples that satisfy Conditions 1-2 for every adjacent pair."""
    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < count:
        p = np.sort(rng.uniform(0.05, 0.95, k_max + 1))
        if np.any(np.diff(p) < 0.15):
            continue
        kwargs = {}
        if covariate:
            p_x1 = np.sort(rng.uniform(0.05, 0.95, k_max + 1))
            if np.any(np.diff(p_x1) < 0.15):
                continue
            kwargs = {"x_share": (rng.uniform(0.3, 0.7),), "p_x1": tuple(p_x1), "tau": (rng.normal(0, 1),)}
        spec = DgpSpec(
            "late_nonparametric", p=tuple(p),
            group_means=tuple(rng.normal(0.0, 2.0, 6)),
            noise=tuple(rng.uniform(0.2, 2.0, 2)),
            **kwargs,
        )
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        sample = gen_late_sample(spec, n, int(rng.integers(2 ** 32)))
        if _usable(sample):
            samples.append(sample)
    return samples


def interior_binary_samples(count: int, seed: int = 7) -> list[Sample]:
    """Binary-outcome samples whose IV plug-ins are all inside [0, 1]."""
    from estimators import iv_po_means

    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < count:
        p0 = rng.uniform(0.1, 0.4)
        spec = DgpSpec(
            "binary_outcome", p=(p0, p0 + rng.uniform(0.3, 0.5)),
            mu=tuple(rng.uniform(0.2, 0.8, 4)),
        )
        sample = gen_binary_sample(spec, int(rng.integers(200, 800)), int(rng.integers(2 ** 32)))
        if not _usable(sample):
            continue
        means = iv_po_means(cell_stats(sample))
        if all(0.0 < m < 1.0 for m in means.as_tuple()):
            samples.append(sample)
    return samples


@pytest.fixture
def toy8() -> Sample:
    return sample_from_rows(TOY8_ROWS)


@pytest.fixture
def corner_sample() -> Sample:
    return sample_from_cells(CORNER_CELLS)


@pytest.fixture
def toy8_csv(tmp_path) -> Path:
    path = tmp_path / "toy8.csv"
    lines = ["y,d,z"] + [f"{y!r},{d},{z}" for y, d, z in TOY8_ROWS]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
