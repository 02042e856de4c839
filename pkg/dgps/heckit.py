"""Parametric selection model: Y(d) | U ~ N(α_d + γ_d (J(U) - μ_J), σ_d²)."""

import numpy as np

from links import get_link
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


def gen_parametric_sample(spec: DgpSpec, n: int, seed) -> Sample:
    """The probit link gives the Heckit model; other links give the same
    two-step structure with their own J."""
    rng = make_rng(seed)
    link = get_link(spec.link)
    z = draw_instrument(spec, rng, n)
    x = draw_covariate(spec, rng, n)
    u = open_uniform(rng, n)
    d = (u <= propensity(spec, z, x)).astype(np.int8)

    alpha, gamma, sigma = (np.array(v)[d] for v in (spec.alpha, spec.gamma, spec.sigma))
    y = alpha + gamma * link.centered(u) + sigma * standard_normal(rng, n) + covariate_shift(spec, x)
    sample = Sample.from_arrays(y, d, z, x, k_max=spec.k_max)
    report_conditions(sample, "gen_parametric_sample")
    return sample
