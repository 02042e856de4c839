"""Seeded synthetic data-generating processes."""

from .base import DgpSpec, make_rng
from .binary import draw_corner_fixture, gen_binary_sample
from .defier import gen_defier_sample
from .heckit import gen_parametric_sample
from .late import gen_late_sample

DGP_GENERATORS = {
    "late_nonparametric": gen_late_sample,
    "parametric_heckit": gen_parametric_sample,
    "binary_outcome": gen_binary_sample,
    "defier": gen_defier_sample,
}


def generate(spec: DgpSpec, n: int | None = None, seed=0):
    """Draw a sample from the generator registered for spec.variant."""
    return DGP_GENERATORS[spec.variant](spec, spec.n if n is None else n, seed)


__all__ = [
    "DGP_GENERATORS",
    "DgpSpec",
    "draw_corner_fixture",
    "gen_binary_sample",
    "gen_defier_sample",
    "gen_late_sample",
    "gen_parametric_sample",
    "generate",
    "make_rng",
]
