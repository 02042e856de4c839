"""Heterogeneous thresholds: D = 1{U <= κ + δZ}, δ = +η with probability υ, else -η."""

import numpy as np

from links import get_link
from sample import Sample

from .base import DgpSpec, draw_instrument, make_rng, open_uniform, report_conditions, standard_normal


def gen_defier_sample(spec: DgpSpec, n: int, seed) -> Sample:
    """Outcomes follow the parametric model Y(d) = α_d + γ_d (J(U) - μ_J) + σ_d ε.

    With υ < 1 the δ = -η types are defiers.
    """
    rng = make_rng(seed)
    link = get_link(spec.link)
    z = draw_instrument(spec, rng, n)
    u = open_uniform(rng, n)
    delta = np.where(open_uniform(rng, n) < spec.upsilon, spec.eta, -spec.eta)
    d = (u <= spec.kappa + delta * z).astype(np.int8)

    alpha, gamma, sigma = (np.array(v)[d] for v in (spec.alpha, spec.gamma, spec.sigma))
    y = alpha + gamma * link.centered(u) + sigma * standard_normal(rng, n)
    sample = Sample.from_arrays(y, d, z, k_max=1)
    report_conditions(sample, "gen_defier_sample")
    return sample
