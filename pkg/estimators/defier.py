"""Heterogeneous-threshold choice model with defiers.

D = 1{U <= κ + δ Z} with δ = +η (probability υ) or -η. Fitting κ̂ = P̂(0) and
υ̂ = (η + P̂(1) - P̂(0)) / (2η) reproduces every choice probability and cell
mean, yet the implied LATE* depends on the unidentified η.
"""

import logging
from dataclasses import dataclass

import numpy as np

from errors import DomainError, InfeasibleParameterError, RankDeficiencyError
from links import LinkFamily
from links.base import P_CLAMP
from regression import qr_lstsq
from sample import Sample, cell_stats, require_conditions

logger = logging.getLogger(__name__)

WEIGHTINGS = ("conditional", "probability")


@dataclass(frozen=True)
class DefierFit:
    kappa: float
    upsilon: float
    eta: float
    alpha: tuple[float, float]
    gamma: tuple[float, float]
    link: LinkFamily
    # c[d, z]: control function for arm d at instrument value z
    c: np.ndarray
    weighting: str = "conditional"

    def fitted_mean(self, d: int, z: int) -> float:
        return float(self.alpha[d] + self.gamma[d] * self.c[d, z])

    def choice_probability(self, z: int) -> float:
        """υ(κ + ηz) + (1 - υ)(κ - ηz)."""
        return self.upsilon * (self.kappa + self.eta * z) + (1 - self.upsilon) * (self.kappa - self.eta * z)


def control_functions(link: LinkFamily, kappa: float, eta: float, upsilon: float,
                      weighting: str = "conditional") -> np.ndarray:
    """c[d, z] = υ λ_d(κ + ηz) + (1 - υ) λ_d(κ - ηz).

    With weighting="probability" the two threshold types are instead weighted
    by their share among observations with D = d at Z = z. This alternative
    to the unweighted display is offered for comparison only.
    """
    if weighting not in WEIGHTINGS:
        raise DomainError(f"unknown weighting {weighting!r}; expected one of {WEIGHTINGS}")
    c = np.empty((2, 2))
    for d in (0, 1):
        for z in (0, 1):
            hi, lo = kappa + eta * z, kappa - eta * z
            w_hi, w_lo = upsilon, 1.0 - upsilon
            if weighting == "probability":
                share_hi, share_lo = (hi, lo) if d == 1 else (1.0 - hi, 1.0 - lo)
                w_hi, w_lo = upsilon * share_hi, (1.0 - upsilon) * share_lo
                total = w_hi + w_lo
                w_hi, w_lo = w_hi / total, w_lo / total
            c[d, z] = w_hi * link.lambda_d(d, hi)
            if w_lo > 0:
                c[d, z] += w_lo * link.lambda_d(d, lo)
    return c


def defier_fit(sample: Sample, link: LinkFamily, eta: float, weighting: str = "conditional") -> DefierFit:
    """κ̂, υ̂ from the propensities, then per-arm OLS of Y on [1, c_d(Z)].

    η is a known constant. Raises InfeasibleParameterError when υ̂ > 1 or a
    threshold κ̂ ± η leaves (0, 1).
    """
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    stats = cell_stats(sample)
    if stats.k_max != 1:
        raise DomainError("defier model needs a binary instrument")
    require_conditions(stats, 0, 1)

    p0, p1 = float(stats.p_hat[0]), float(stats.p_hat[1])
    kappa = p0
    upsilon = (eta + (p1 - p0)) / (2.0 * eta)

    violated = []
    if upsilon > 1.0:
        violated.append(f"eta={eta!r} < P̂(1)-P̂(0)={p1 - p0!r} (upsilon={upsilon!r} > 1)")
    if kappa + eta > 1.0 - P_CLAMP:
        violated.append(f"kappa+eta={kappa + eta!r} > 1-{P_CLAMP:g}")
    if upsilon < 1.0 and kappa - eta < P_CLAMP:
        violated.append(f"kappa-eta={kappa - eta!r} < {P_CLAMP:g}")
    if violated:
        raise InfeasibleParameterError("; ".join(violated))

    c = control_functions(link, kappa, eta, upsilon, weighting)
    alpha, gamma = [0.0, 0.0], [0.0, 0.0]
    for d in (0, 1):
        if c[d, 0] == c[d, 1]:
            raise RankDeficiencyError(f"arm d={d}: control function equal at z=0 and z=1")
        arm = sample.d == d
        design = np.column_stack([np.ones(int(arm.sum())), c[d, sample.z[arm]]])
        fit = qr_lstsq(design, sample.y[arm], label=f"defier arm d={d}")
        alpha[d], gamma[d] = float(fit.coef[0]), float(fit.coef[1])

    logger.debug("defier_fit: kappa=%.6g upsilon=%.6g eta=%.6g", kappa, upsilon, eta)
    return DefierFit(
        kappa=kappa, upsilon=upsilon, eta=float(eta),
        alpha=(alpha[0], alpha[1]), gamma=(gamma[0], gamma[1]),
        link=link, weighting=weighting, c=c,
    )


def defier_late(fit: DefierFit) -> float:
    """LATE* = (α̂₁ - α̂₀) + (γ̂₁ - γ̂₀) [(κ̂+η) λ₁(κ̂+η) - κ̂ λ₁(κ̂)] / η."""
    k, eta = fit.kappa, fit.eta
    shift = ((k + eta) * fit.link.lambda1(k + eta) - k * fit.link.lambda1(k)) / eta
    return (fit.alpha[1] - fit.alpha[0]) + (fit.gamma[1] - fit.gamma[0]) * shift
