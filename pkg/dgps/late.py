"""Nonparametric LATE model: group-specific outcome laws, no link restriction."""

import numpy as np

from sample import Sample

from .base import (
    DgpSpec,
    covariate_shift,
    draw_covariate,
    draw_instrument,
    make_rng,
    open_uniform,
    propensity,
    report_conditions,
    standard_normal,
)


def gen_late_sample(spec: DgpSpec, n: int, seed) -> Sample:
    """D = 1{U <= P(Z)}; Y = group mean of (D, group) + noise_D * N(0, 1).

    Group means are free, so they may violate the ordering a link-based
    selection model would impose.
    """
    rng = make_rng(seed)
    z = draw_instrument(spec, rng, n)
    x = draw_covariate(spec, rng, n)
    u = open_uniform(rng, n)
    p = propensity(spec, z, x)
    d = (u <= p).astype(np.int8)

    p_low = propensity(spec, np.zeros(n, dtype=np.int64), x)
    p_high = propensity(spec, np.full(n, spec.k_max), x)
    # group_means is ordered (1at, 0at, 1c, 0c, 1nt, 0nt)
    group = np.where(u <= p_low, 0, np.where(u > p_high, 4, 2))
    idx = group + (1 - d)
    means = np.array(spec.group_means)
    scale = np.array(spec.noise)[d]

    y = means[idx] + scale * standard_normal(rng, n) + covariate_shift(spec, x)
    sample = Sample.from_arrays(y, d, z, x, k_max=spec.k_max)
    report_conditions(sample, "gen_late_sample")
    return sample
