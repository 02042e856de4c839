"""Binary outcomes drawn directly in the six identified parameters."""

import logging

import numpy as np

from errors import CfEquivError, DegeneracyError
from estimators.binary import iv_po_means
from sample import Sample, cell_stats

from .base import DgpSpec, draw_instrument, make_rng, open_uniform, report_conditions

logger = logging.getLogger(__name__)


def gen_binary_sample(spec: DgpSpec, n: int, seed) -> Sample:
    """Group by U against (P(0), P(1)), then Y ~ Bernoulli(μ of the observed arm and group).

    spec.mu = (μ₁at, μ₀nt, μ₁c, μ₀c); compliers have D = Z.
    """
    rng = make_rng(seed)
    z = draw_instrument(spec, rng, n)
    u = open_uniform(rng, n)
    p0, p1 = spec.p
    always, never = u <= p0, u > p1
    d = np.where(always, 1, np.where(never, 0, z)).astype(np.int8)

    mu_1at, mu_0nt, mu_1c, mu_0c = spec.mu
    mu = np.where(always, mu_1at, np.where(never, mu_0nt, np.where(d == 1, mu_1c, mu_0c)))
    y = (open_uniform(rng, n) < mu).astype(float)
    sample = Sample.from_arrays(y, d, z, k_max=1)
    report_conditions(sample, "gen_binary_sample")
    return sample


def draw_corner_fixture(spec: DgpSpec, n: int, seed: int, max_attempts: int = 1000) -> tuple[Sample, int]:
    """Redraw binary samples until the IV treated-complier mean exceeds 1.

    Attempt a uses the substream SeedSequence(seed, spawn_key=(a,)). Returns the
    sample and the attempt index.
    """
    for attempt in range(max_attempts):
        sample = gen_binary_sample(spec, n, np.random.SeedSequence(seed, spawn_key=(attempt,)))
        try:
            means = iv_po_means(cell_stats(sample))
        except CfEquivError:
            continue
        if means.mu_1c > 1.0:
            logger.debug("corner fixture found at attempt %d (mu_1c=%.4g)", attempt, means.mu_1c)
            return sample, attempt
    raise DegeneracyError(f"no draw with IV mu_1c > 1 in {max_attempts} attempts")
