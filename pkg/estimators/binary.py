"""Single binary-instrument estimators.

IV/Wald, the two-step control function (CF) under any link family, potential
outcome means, MTE extrapolation, Telser residual inclusion and the LaLonde
common-coefficient estimator.
"""

import logging
from dataclasses import dataclass

import numpy as np

from errors import DataError, NumericalInconsistencyError
from links import LinkFamily, get_link
from links.base import check_probability, needs_clamp
from regression import qr_lstsq
from sample import CellStats, Sample, cell_stats, require_conditions

logger = logging.getLogger(__name__)

# closed form vs QR agreement, scaled by (1 + |value|) and the design condition number
CLOSED_FORM_TOL = 1e-10
LALONDE_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class PoMeans:
    """The four identified potential outcome means."""
    mu_1at: float
    mu_0nt: float
    mu_1c: float
    mu_0c: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.mu_1at, self.mu_0nt, self.mu_1c, self.mu_0c)

    @property
    def late(self) -> float:
        return self.mu_1c - self.mu_0c


@dataclass(frozen=True)
class Extrapolation:
    """Means outside the complier interval, implied by the CF model."""
    mu_0at: float
    mu_1nt: float
    ate: float


@dataclass(frozen=True)
class CfFit:
    """Second-step CF coefficients, indexed by treatment arm d."""
    alpha: tuple[float, float]
    gamma: tuple[float, float]
    p0: float
    p1: float
    link: LinkFamily
    cond: float = 1.0
    clamped: bool = False

    def fitted_mean(self, d: int, z: int) -> float:
        p = self.p1 if z == 1 else self.p0
        return self.alpha[d] + self.gamma[d] * self.link.lambda_d(d, p)

    def m(self, d: int, u):
        """m̂_d(u) = α̂_d + γ̂_d (J(u) - μ_J)."""
        return self.alpha[d] + self.gamma[d] * self.link.centered(u)


@dataclass(frozen=True)
class LalondeFit:
    beta: float
    gamma_common: float
    symmetric: bool


@dataclass(frozen=True)
class MteCurve:
    """m̂₀, m̂₁ and the MTE on a grid of u values, for plotting."""
    u: np.ndarray
    m0: np.ndarray
    m1: np.ndarray
    mte: np.ndarray
    means: PoMeans
    extrapolated: Extrapolation


@dataclass(frozen=True)
class SignRestriction:
    """Whether sgn(μ_dat - μ_dc) = sgn(μ_dc - μ_dnt) holds in each arm."""
    treated: bool
    untreated: bool


def _require_binary(stats: CellStats) -> None:
    if stats.k_max != 1:
        raise DataError(f"expected a binary instrument, got levels 0..{stats.k_max}")


def iv_late(stats: CellStats, z_low: int = 0, z_high: int = 1) -> float:
    """Wald ratio (Ȳ^{z_high} - Ȳ^{z_low}) / (P̂(z_high) - P̂(z_low))."""
    require_conditions(stats, z_low, z_high)
    num = stats.ybar_z[z_high] - stats.ybar_z[z_low]
    return float(num / (stats.p_hat[z_high] - stats.p_hat[z_low]))


def iv_po_means(stats: CellStats, z_low: int = 0, z_high: int = 1) -> PoMeans:
    """Nonparametric plug-ins for μ₁at, μ₀nt, μ₁c, μ₀c."""
    require_conditions(stats, z_low, z_high)
    p0, p1 = stats.p_hat[z_low], stats.p_hat[z_high]
    y10, y11 = stats.ybar(1, z_low), stats.ybar(1, z_high)
    y00, y01 = stats.ybar(0, z_low), stats.ybar(0, z_high)
    dp = p1 - p0
    return PoMeans(
        mu_1at=y10,
        mu_0nt=y01,
        mu_1c=float((p1 * y11 - p0 * y10) / dp),
        mu_0c=float(((1 - p0) * y00 - (1 - p1) * y01) / dp),
    )


def _closed_form(lam0: float, lam1: float, y0: float, y1: float) -> tuple[float, float]:
    """(α, γ) from the two cell means of one arm; lam_z is λ_d(P̂(z))."""
    gamma = (y1 - y0) / (lam1 - lam0)
    alpha = (lam1 * y0 - lam0 * y1) / (lam1 - lam0)
    return alpha, gamma


def _check_agreement(label: str, numeric: float, closed: float, cond: float) -> None:
    tol = CLOSED_FORM_TOL * (1.0 + abs(closed)) * max(1.0, cond)
    if abs(numeric - closed) > tol:
        raise NumericalInconsistencyError(
            f"{label}: QR gives {numeric!r}, closed form {closed!r} (tol {tol:.2e})"
        )


def cf_fit(sample: Sample, link: LinkFamily, weights: np.ndarray | None = None) -> CfFit:
    """Two-step CF: binomial first step (cell propensities), then per-arm OLS of Y on [1, λ_d(P̂(Z))].

    With weights, both steps are weighted and the second step is solved by
    row-scaled QR. The QR solution is checked against the closed form.
    """
    stats = cell_stats(sample, weights)
    _require_binary(stats)
    require_conditions(stats, 0, 1)

    p_hat = stats.p_hat
    alpha, gamma, conds = [0.0, 0.0], [0.0, 0.0], []
    for d in (0, 1):
        lam = np.array([link.lambda_d(d, p_hat[0]), link.lambda_d(d, p_hat[1])])
        arm = sample.d == d
        design = np.column_stack([np.ones(int(arm.sum())), lam[sample.z[arm]]])
        w = None if weights is None else np.asarray(weights)[arm]
        fit = qr_lstsq(design, sample.y[arm], w, label=f"cf arm d={d}")
        alpha[d], gamma[d] = float(fit.coef[0]), float(fit.coef[1])
        conds.append(fit.cond)

        a_cf, g_cf = _closed_form(lam[0], lam[1], stats.ybar(d, 0), stats.ybar(d, 1))
        _check_agreement(f"alpha_{d}", alpha[d], a_cf, fit.cond)
        _check_agreement(f"gamma_{d}", gamma[d], g_cf, fit.cond)

    result = CfFit(
        alpha=(alpha[0], alpha[1]),
        gamma=(gamma[0], gamma[1]),
        p0=float(p_hat[0]),
        p1=float(p_hat[1]),
        link=link,
        cond=max(conds),
        clamped=needs_clamp(p_hat[0]) or needs_clamp(p_hat[1]),
    )
    logger.debug("cf_fit[%s]: alpha=%s gamma=%s", link.kind, result.alpha, result.gamma)
    return result


def cf_late(fit: CfFit) -> float:
    """(α̂₁ - α̂₀) + (γ̂₁ - γ̂₀) Γ(P̂(0), P̂(1))."""
    a0, a1 = fit.alpha
    g0, g1 = fit.gamma
    return (a1 - a0) + (g1 - g0) * fit.link.gamma(fit.p0, fit.p1)


def cf_po_means(fit: CfFit) -> PoMeans:
    link = fit.link
    a0, a1 = fit.alpha
    g0, g1 = fit.gamma
    complier = link.gamma(fit.p0, fit.p1)
    return PoMeans(
        mu_1at=a1 + g1 * link.lambda1(fit.p0),
        mu_0nt=a0 + g0 * link.lambda0(fit.p1),
        mu_1c=a1 + g1 * complier,
        mu_0c=a0 + g0 * complier,
    )


def cf_extrapolate(fit: CfFit) -> Extrapolation:
    """Untreated always-taker and treated never-taker means, and the ATE.

    μ̂₀at takes the untreated arm over U <= P̂(0); μ̂₁nt takes the treated arm
    over U > P̂(1). The ATE is α̂₁ - α̂₀ since E[J(U) - μ_J] = 0.
    """
    a0, a1 = fit.alpha
    g0, g1 = fit.gamma
    return Extrapolation(
        mu_0at=a0 + g0 * fit.link.lambda1(fit.p0),
        mu_1nt=a1 + g1 * fit.link.lambda0(fit.p1),
        ate=a1 - a0,
    )


def mte(fit: CfFit, u: float) -> float:
    """m̂₁(u) - m̂₀(u)."""
    u = check_probability(u, "u")
    return float(fit.m(1, u) - fit.m(0, u))


def mte_curve(fit: CfFit, grid=None) -> MteCurve:
    if grid is None:
        grid = np.linspace(0.01, 0.99, 99)
    u = np.asarray(grid, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DataError("MTE grid values must lie in (0, 1)")
    m0 = np.asarray(fit.m(0, u), dtype=float)
    m1 = np.asarray(fit.m(1, u), dtype=float)
    return MteCurve(
        u=u, m0=m0, m1=m1, mte=m1 - m0,
        means=cf_po_means(fit),
        extrapolated=cf_extrapolate(fit),
    )


def sign_restriction_check(means: PoMeans, mu_0at: float, mu_1nt: float) -> SignRestriction:
    """Compare each arm's group ordering with the additive-selection restriction.

    The restriction is reported, never enforced; a zero difference is
    compatible with either sign.
    """
    def compatible(first: float, middle: float, last: float) -> bool:
        lhs, rhs = np.sign(first - middle), np.sign(middle - last)
        return bool(lhs == rhs or lhs == 0 or rhs == 0)

    return SignRestriction(
        treated=compatible(means.mu_1at, means.mu_1c, mu_1nt),
        untreated=compatible(mu_0at, means.mu_0c, means.mu_0nt),
    )


def telser_late(sample: Sample) -> float:
    """Coefficient on D in OLS of Y on [1, D, D - P̂(Z)]."""
    stats = cell_stats(sample)
    _require_binary(stats)
    require_conditions(stats, 0, 1)
    d = sample.d.astype(float)
    resid = d - stats.p_hat[sample.z]
    fit = qr_lstsq(np.column_stack([np.ones(sample.n), d, resid]), sample.y, label="telser")
    return float(fit.coef[1])


def lalonde_fit(sample: Sample, link: LinkFamily | None = None) -> LalondeFit:
    """OLS of Y on [1, D, h(D, Z)] with one selection coefficient shared by both arms.

    h is λ₁(P̂(Z)) for treated and λ₀(P̂(Z)) for untreated observations (the
    inverse Mills ratios under the default probit link). RankDeficiencyError
    when the design is collinear.
    """
    link = link or get_link("probit")
    stats = cell_stats(sample)
    _require_binary(stats)
    require_conditions(stats, 0, 1)

    lam1 = np.array([link.lambda1(p) for p in stats.p_hat])
    lam0 = np.array([link.lambda0(p) for p in stats.p_hat])
    d = sample.d.astype(float)
    h = d * lam1[sample.z] + (1.0 - d) * lam0[sample.z]
    fit = qr_lstsq(np.column_stack([np.ones(sample.n), d, h]), sample.y, label="lalonde")

    symmetric = abs(stats.p_hat[1] - (1.0 - stats.p_hat[0])) <= LALONDE_SYMMETRY_TOL
    return LalondeFit(beta=float(fit.coef[1]), gamma_common=float(fit.coef[2]), symmetric=bool(symmetric))
