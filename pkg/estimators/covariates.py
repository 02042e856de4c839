"""Covariates entering the outcome equations additively.

Per-cell CF fits, the pooled restricted CF regression with a common τ′X shift,
the decomposition of the restricted X=1 LATE into per-cell LATEs and slope
corrections, and IV/CF reweighting by instrument propensity scores ê(X).
"""

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from errors import (
    ConditionError,
    DataError,
    DomainError,
    MissingInstrumentLevelError,
    NumericalInconsistencyError,
)
from links import LinkFamily
from regression import qr_lstsq, spd_inverse
from sample import CellStats, Sample, cell_stats, require_conditions

from .binary import CfFit, cf_fit, cf_late, iv_late

logger = logging.getLogger(__name__)

DECOMPOSITION_TOL = 1e-8

# Rows of C: α₁(1) - α₁(0) = α₀(1) - α₀(0), γ₁(1) = γ₁(0), γ₀(1) = γ₀(0).
CONSTRAINTS = np.array([
    [-1, 0, 1, 0, 1, 0, -1, 0],
    [0, 0, 0, 0, 0, -1, 0, 1],
    [0, -1, 0, 1, 0, 0, 0, 0],
], dtype=float)


@dataclass(frozen=True)
class CovCfFit:
    """Pooled CF fit with arm intercepts for the baseline cell and a common τ′X shift."""
    alpha: tuple[float, float]
    gamma: tuple[float, float]
    tau: np.ndarray
    p_hat_xz: dict[tuple[float, ...], tuple[float, float]]
    link: LinkFamily
    cond: float = 1.0


@dataclass(frozen=True)
class Prop3Decomposition:
    """Restricted X=1 LATE as w LATE(1) + (1-w) LATE(0) plus slope corrections.

    w, b1 and b0 depend on D, X and P̂(X, Z) only. w is not confined to [0, 1].
    """
    w: float
    b1: float
    b0: float
    zeta: np.ndarray
    phi: np.ndarray
    restricted_late1: float
    late1: float
    late0: float
    delta_u: np.ndarray
    delta_r: np.ndarray

    def recombined(self) -> float:
        g1 = self.delta_u[7] - self.delta_u[5]
        g0 = self.delta_u[3] - self.delta_u[1]
        return self.w * self.late1 + (1 - self.w) * self.late0 + self.b1 * g1 + self.b0 * g0


def _as_key(x) -> tuple[float, ...]:
    return tuple(float(v) for v in np.atleast_1d(x))


def covariate_cells(sample: Sample) -> list[tuple[float, ...]]:
    """Distinct covariate rows in sorted order."""
    if sample.n_covariates == 0:
        return [()]
    return [tuple(float(v) for v in row) for row in np.unique(sample.x, axis=0)]


def _cell_mask(sample: Sample, key: tuple[float, ...]) -> np.ndarray:
    if not key:
        return np.ones(sample.n, dtype=bool)
    return np.all(sample.x == np.array(key), axis=1)


def cell_label(key: tuple[float, ...]) -> str:
    if not key:
        return "all"
    return "x=" + ",".join(f"{v:g}" for v in key)


def _checked_cell_stats(sub: Sample, key: tuple[float, ...]) -> CellStats:
    """Cell statistics for one covariate cell with Conditions 1-2 enforced.

    An instrument level with no observations in the cell is a Condition 2 failure.
    """
    label = cell_label(key)
    try:
        stats = cell_stats(sub)
    except MissingInstrumentLevelError as exc:
        raise ConditionError(2, (0, 1), f"no observations at z={exc.z}", cell=label) from exc
    require_conditions(stats, 0, 1, cell=label)
    return stats


def cf_fit_by_cell(sample: Sample, link: LinkFamily, x) -> CfFit:
    """Unrestricted CF on the observations with X = x."""
    key = _as_key(x) if sample.n_covariates else ()
    mask = _cell_mask(sample, key)
    if not mask.any():
        raise DataError(f"no observations with {cell_label(key)}")
    sub = sample.subset(mask)
    _checked_cell_stats(sub, key)
    return cf_fit(sub, link)


def cell_iv_late(sample: Sample, x) -> float:
    key = _as_key(x) if sample.n_covariates else ()
    return iv_late(_checked_cell_stats(sample.subset(_cell_mask(sample, key)), key))


def cell_propensities(sample: Sample) -> dict[tuple[float, ...], tuple[float, float]]:
    """P̂(x, z) per covariate cell, after checking Conditions 1-2 in each cell."""
    out = {}
    for key in covariate_cells(sample):
        stats = _checked_cell_stats(sample.subset(_cell_mask(sample, key)), key)
        out[key] = (float(stats.p_hat[0]), float(stats.p_hat[1]))
    return out


def _row_propensity(sample: Sample, p_hat_xz: dict) -> np.ndarray:
    p = np.empty(sample.n)
    for key, pair in p_hat_xz.items():
        mask = _cell_mask(sample, key)
        p[mask] = np.asarray(pair)[sample.z[mask]]
    return p


def cf_fit_covariates(sample: Sample, link: LinkFamily) -> CovCfFit:
    """Pooled OLS of Y on [1-D, D, (1-D)λ₀(P̂(X,Z)), Dλ₁(P̂(X,Z)), X].

    Constant covariate columns are absorbed into the arm intercepts and get
    τ = 0.
    """
    if sample.k_max != 1:
        raise DataError("covariate CF needs a binary instrument")
    p_hat_xz = cell_propensities(sample)
    p = _row_propensity(sample, p_hat_xz)

    lam1 = np.array([link.lambda1(v) for v in p])
    lam0 = -lam1 * p / (1.0 - p)
    d = sample.d.astype(float)
    varying = np.ptp(sample.x, axis=0) > 0 if sample.n_covariates else np.zeros(0, dtype=bool)
    design = np.column_stack([1 - d, d, (1 - d) * lam0, d * lam1, sample.x[:, varying]])
    fit = qr_lstsq(design, sample.y, label="pooled covariate cf")

    tau = np.zeros(sample.n_covariates)
    tau[varying] = fit.coef[4:]
    logger.debug("cf_fit_covariates[%s]: coef=%s", link.kind, fit.coef)
    return CovCfFit(
        alpha=(float(fit.coef[0]), float(fit.coef[1])),
        gamma=(float(fit.coef[2]), float(fit.coef[3])),
        tau=tau,
        p_hat_xz=p_hat_xz,
        link=link,
        cond=fit.cond,
    )


def late_x_restricted(fit: CovCfFit, x) -> float:
    """(α̂₁ - α̂₀) + (γ̂₁ - γ̂₀) Γ(P̂(x,0), P̂(x,1)) from the pooled fit."""
    key = _as_key(x) if fit.tau.size else ()
    if key not in fit.p_hat_xz:
        raise DataError(f"no covariate cell {cell_label(key)} in the fit")
    p0, p1 = fit.p_hat_xz[key]
    a0, a1 = fit.alpha
    g0, g1 = fit.gamma
    return (a1 - a0) + (g1 - g0) * fit.link.gamma(p0, p1)


def _require_binary_x(sample: Sample) -> None:
    if sample.n_covariates != 1 or not np.all(np.isin(sample.x[:, 0], (0.0, 1.0))):
        raise DataError("decomposition needs a single binary covariate")
    if np.unique(sample.x[:, 0]).size != 2:
        raise DataError("decomposition needs observations with X=0 and X=1")


def decomposition_design(sample: Sample, link: LinkFamily, p_hat_xz: dict) -> np.ndarray:
    """W: the eight per-cell CF regressors, ordered as Δ = (α₀(0), γ₀(0), α₀(1), γ₀(1), α₁(0), γ₁(0), α₁(1), γ₁(1))."""
    p = _row_propensity(sample, p_hat_xz)
    d = sample.d.astype(float)
    x = sample.x[:, 0]
    lam1 = np.array([link.lambda1(v) for v in p])
    lam0 = -lam1 * p / (1.0 - p)
    untreated, treated = 1 - d, d
    return np.column_stack([
        untreated * (1 - x), untreated * (1 - x) * lam0,
        untreated * x, untreated * x * lam0,
        treated * (1 - x), treated * (1 - x) * lam1,
        treated * x, treated * x * lam1,
    ])


def prop3_decompose(sample: Sample, link: LinkFamily) -> Prop3Decomposition:
    """Lagrangian form of the restricted fit and its decomposition.

    The restricted X=1 LATE is computed three ways: from the pooled regression,
    from Δ̂_r, and by recombining the per-cell LATEs with (w, b1, b0). All three
    must agree.
    """
    _require_binary_x(sample)
    p_hat_xz = cell_propensities(sample)
    W = decomposition_design(sample, link, p_hat_xz)
    C = CONSTRAINTS

    wtw_inv = spd_inverse(W.T @ W, label="W'W")
    delta_u = qr_lstsq(W, sample.y, label="unrestricted cell cf").coef
    m_inv = spd_inverse(C @ wtw_inv @ C.T, label="C(W'W)^-1C'")
    rho = -m_inv @ C @ delta_u
    delta_r = delta_u + wtw_inv @ C.T @ rho
    omega = wtw_inv @ C.T @ m_inv
    zeta = -C @ delta_u

    gamma1 = link.gamma(*p_hat_xz[(1.0,)])
    phi = omega[6] - omega[2] + gamma1 * (omega[7] - omega[3])
    w = 1.0 + phi[0]
    b1 = -(phi[1] + phi[0] * gamma1)
    b0 = phi[0] * gamma1 - phi[2]

    upsilon = np.array([0, 0, -1, -gamma1, 0, 0, 1, gamma1])
    late1 = float(upsilon @ delta_u)
    late0 = float((delta_u[4] - delta_u[0]) + (delta_u[5] - delta_u[1]) * gamma1)

    decomposition = Prop3Decomposition(
        w=float(w), b1=float(b1), b0=float(b0), zeta=zeta, phi=phi,
        restricted_late1=late_x_restricted(cf_fit_covariates(sample, link), 1.0),
        late1=late1, late0=late0, delta_u=delta_u, delta_r=delta_r,
    )

    lagrange = float(upsilon @ delta_r)
    for label, value in (("lagrangian", lagrange), ("recombined", decomposition.recombined())):
        target = decomposition.restricted_late1
        if abs(value - target) > DECOMPOSITION_TOL * (1.0 + abs(target)):
            raise NumericalInconsistencyError(
                f"restricted LATE(1): pooled {target!r} vs {label} {value!r}"
            )
    return decomposition


def propensity_weights(sample: Sample, e_hat: Callable | Mapping) -> np.ndarray:
    """ω = Z/ê(X) + (1 - Z)/(1 - ê(X))."""
    e = np.empty(sample.n)
    for key in covariate_cells(sample):
        if callable(e_hat):
            value = e_hat(key[0] if len(key) == 1 else key)
        elif key in e_hat:
            value = e_hat[key]
        else:
            value = e_hat[key[0] if len(key) == 1 else key]
        value = float(value)
        if not 0.0 < value < 1.0:
            raise DomainError(f"ê({cell_label(key)})={value!r} is outside (0, 1)")
        e[_cell_mask(sample, key)] = value
    z = sample.z.astype(float)
    return z / e + (1.0 - z) / (1.0 - e)


@dataclass(frozen=True)
class ReweightedLate:
    iv: float
    cf: float


def reweighted_late(sample: Sample, link: LinkFamily, e_hat: Callable | Mapping) -> ReweightedLate:
    """ω-weighted Wald and ω-weighted two-step CF estimates of the unconditional LATE."""
    if sample.k_max != 1:
        raise DataError("reweighting needs a binary instrument")
    weights = propensity_weights(sample, e_hat)
    iv = iv_late(cell_stats(sample, weights))
    cf = cf_late(cf_fit(sample, link, weights=weights))
    return ReweightedLate(iv=iv, cf=cf)
