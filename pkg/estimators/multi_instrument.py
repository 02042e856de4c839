"""Multi-valued instruments Z in {0, ..., K}.

Pairwise Wald and CF estimators, the polynomial control function of order L,
IV with a scalar function g(Z), and the precision-weighted combination of
LATE_2 estimators for K = 3.
"""

import logging
import warnings
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from errors import (
    DataError,
    DegeneracyError,
    DomainError,
    NumericalInconsistencyError,
    RankDeficiencyError,
    XiClampWarning,
)
from links import LinkFamily
from regression import lu_solve, qr_lstsq
from sample import CellStats, Sample, cell_stats, require_adjacent_conditions, require_conditions

from .binary import cf_fit, cf_late, iv_late
from .bootstrap import DEFAULT_REPLICATES, bootstrap

logger = logging.getLogger(__name__)

LU_CROSS_CHECK_TOL = 1e-8
XI_BOUNDS = (0.01, 0.99)


@dataclass(frozen=True)
class PolyCfFit:
    """Per-arm coefficient vectors Δ̂_d = (α̂_d, γ̂_d1, ..., γ̂_dL)."""
    delta: tuple[np.ndarray, np.ndarray]
    p_hat: np.ndarray
    link: LinkFamily
    order: int
    cond: float = 1.0

    @property
    def k_max(self) -> int:
        return len(self.p_hat) - 1

    def fitted_mean(self, d: int, z: int) -> float:
        return float(lambda_matrix(self.link, d, self.p_hat, self.order)[z] @ self.delta[d])


@dataclass(frozen=True)
class CombinationResult:
    estimate: float
    xi_used: float
    w1: float
    w3: float
    v1: float = float("nan")
    v2: float = float("nan")
    v12: float = float("nan")
    xi_clamped: bool = False
    discarded: int = 0


def _pair_sample(sample: Sample, z: int) -> Sample:
    """Rows with Z in {z-1, z}, instrument recoded to {0, 1}."""
    sub = sample.subset((sample.z == z - 1) | (sample.z == z), k_max=z)
    return sub.with_instrument(sub.z - (z - 1), k_max=1)


def _check_level(k_max: int, z: int) -> None:
    if not 1 <= z <= k_max:
        raise DataError(f"instrument level must be in 1..{k_max}, got {z}")


def pairwise_iv_late(stats: CellStats, z: int) -> float:
    """Wald ratio over the pair (z-1, z)."""
    _check_level(stats.k_max, z)
    return iv_late(stats, z - 1, z)


def pairwise_cf_late(sample: Sample, link: LinkFamily, z: int) -> float:
    """Two-step CF on the subsample Z in {z-1, z}."""
    _check_level(sample.k_max, z)
    require_conditions(cell_stats(sample), z - 1, z)
    return cf_late(cf_fit(_pair_sample(sample, z), link))


def lambda_matrix(link: LinkFamily, d: int, p_hat: Sequence[float], order: int) -> np.ndarray:
    """Λ_d: row z is (1, λ_d1(P̂(z)), ..., λ_dL(P̂(z)))."""
    rows = [[1.0] + [link.lambda_poly(d, ell, p) for ell in range(1, order + 1)] for p in p_hat]
    return np.array(rows)


def psi_vector(d: int, p_hat: Sequence[float], z: int) -> np.ndarray:
    """Ψ_d^z: maps the arm-d cell means to the pairwise complier mean."""
    psi = np.zeros(len(p_hat))
    lo, hi = p_hat[z - 1], p_hat[z]
    dp = hi - lo
    if d == 1:
        psi[z - 1], psi[z] = -lo / dp, hi / dp
    else:
        psi[z - 1], psi[z] = (1 - lo) / dp, -(1 - hi) / dp
    return psi


def upsilon_vector(link: LinkFamily, p_hat: Sequence[float], z: int, order: int) -> np.ndarray:
    """Υ^z = (1, Γ_1(P̂(z-1), P̂(z)), ..., Γ_L(P̂(z-1), P̂(z)))."""
    lo, hi = p_hat[z - 1], p_hat[z]
    return np.array([1.0] + [link.gamma_poly(ell, lo, hi) for ell in range(1, order + 1)])


def poly_cf_fit(sample: Sample, link: LinkFamily, order: int) -> PolyCfFit:
    """Per-arm OLS of Y on [1, λ_d1(P̂(Z)), ..., λ_dL(P̂(Z))].

    When L = K the design is saturated and the QR coefficients are checked
    against Λ_d⁻¹ Ȳ_d solved by LU.
    """
    stats = cell_stats(sample)
    require_adjacent_conditions(stats)
    k = stats.k_max
    if order < 1:
        raise DomainError(f"polynomial order must be at least 1, got {order}")
    if order > k:
        raise RankDeficiencyError(f"polynomial order {order} exceeds K={k}; the design has only {k + 1} distinct rows")

    delta, conds = [], []
    for d in (0, 1):
        lam = lambda_matrix(link, d, stats.p_hat, order)
        arm = sample.d == d
        fit = qr_lstsq(lam[sample.z[arm]], sample.y[arm], label=f"poly cf arm d={d}")
        conds.append(fit.cond)
        if order == k:
            via_lu = lu_solve(lam, stats.ybar_zd[:, d], label=f"Lambda_{d}")
            scale = LU_CROSS_CHECK_TOL * max(1.0, fit.cond) * (1.0 + np.abs(via_lu))
            if np.any(np.abs(fit.coef - via_lu) > scale):
                raise NumericalInconsistencyError(
                    f"arm d={d}: QR {fit.coef.tolist()} vs LU {via_lu.tolist()}"
                )
        delta.append(fit.coef)

    logger.debug("poly_cf_fit[%s, L=%d]: delta0=%s delta1=%s", link.kind, order, delta[0], delta[1])
    return PolyCfFit(delta=(delta[0], delta[1]), p_hat=np.array(stats.p_hat), link=link,
                     order=order, cond=max(conds))


def poly_cf_late(fit: PolyCfFit, z: int) -> float:
    """Υ^z′(Δ̂₁ - Δ̂₀)."""
    _check_level(fit.k_max, z)
    upsilon = upsilon_vector(fit.link, fit.p_hat, z, fit.order)
    return float(upsilon @ (fit.delta[1] - fit.delta[0]))


def _g_values(g: Callable[[int], float] | Mapping[int, float] | Sequence[float], k_max: int) -> np.ndarray:
    if callable(g):
        return np.array([float(g(z)) for z in range(k_max + 1)])
    return np.array([float(g[z]) for z in range(k_max + 1)])


def weighted_iv_late(sample: Sample, g) -> float:
    """cov(g(Z), Y) / cov(g(Z), D)."""
    gz = _g_values(g, sample.k_max)[sample.z]
    gc = gz - gz.mean()
    cov_gd = float(np.mean(gc * (sample.d - sample.d.mean())))
    cov_gy = float(np.mean(gc * (sample.y - sample.y.mean())))
    if abs(cov_gd) <= 1e-14 * max(1.0, float(np.abs(gc).max())):
        raise DegeneracyError("zero first-stage covariance between g(Z) and D")
    return cov_gy / cov_gd


def iv_weights(sample: Sample, g) -> np.ndarray:
    """Weights ω_1..ω_K with weighted_iv_late = Σ ω_z LATE_z.

    ω_z ∝ (P̂(z) - P̂(z-1)) Σ_{k>=z} π̂_k (g(k) - ḡ), where π̂_k is the sample
    share of Z = k. The weights are convex when g is increasing.
    """
    stats = cell_stats(sample)
    gk = _g_values(g, stats.k_max)
    share = stats.n_zd.sum(axis=1) / stats.n
    centered = share * (gk - share @ gk)
    tail = np.cumsum(centered[::-1])[::-1]
    raw = np.diff(stats.p_hat) * tail[1:]
    total = raw.sum()
    if abs(total) <= 1e-14:
        raise DegeneracyError("zero first-stage covariance between g(Z) and D")
    return raw / total


def combination_weights(link: LinkFamily, p_hat: Sequence[float]) -> tuple[float, float]:
    """(w1, w3) interpolating LATE_2 from LATE_1 and LATE_3 under a linear MTE."""
    g01 = link.gamma(p_hat[0], p_hat[1])
    g12 = link.gamma(p_hat[1], p_hat[2])
    g23 = link.gamma(p_hat[2], p_hat[3])
    denom = g23 - g01
    if abs(denom) <= 1e-12 * (1.0 + abs(g23) + abs(g01)):
        raise DegeneracyError("Γ(P̂(2),P̂(3)) equals Γ(P̂(0),P̂(1)); combination weights undefined")
    w3 = (g12 - g01) / denom
    return 1.0 - w3, w3


def _late2_pair(sample: Sample, link: LinkFamily) -> np.ndarray:
    """(LATE_2 direct, w3 LATE_3 + w1 LATE_1) for one sample."""
    stats = cell_stats(sample)
    require_adjacent_conditions(stats)
    w1, w3 = combination_weights(link, stats.p_hat)
    late = [pairwise_iv_late(stats, z) for z in (1, 2, 3)]
    return np.array([late[1], w3 * late[2] + w1 * late[0]])


def combination_late2(sample: Sample, link: LinkFamily, xi: float | None = None,
                      bootstrap_b: int = DEFAULT_REPLICATES, seed: int | None = None,
                      jobs: int = 1) -> CombinationResult:
    """ξ LATE_2^IV + (1 - ξ)(w3 LATE_3^IV + w1 LATE_1^IV) for K = 3.

    Without ξ, the variance-minimizing ξ = (v2 - v12) / (v1 + v2 - 2 v12) is
    estimated from a stratified bootstrap, where v1 is the variance of the
    direct estimator and v2 that of the interpolated one. An estimated ξ
    outside [0.01, 0.99] is clamped with an XiClampWarning.
    """
    if sample.k_max != 3:
        raise DataError(f"combination estimator needs K=3, got K={sample.k_max}")
    direct, interpolated = _late2_pair(sample, link)
    stats = cell_stats(sample)
    w1, w3 = combination_weights(link, stats.p_hat)

    if xi is not None:
        if not 0.0 <= xi <= 1.0:
            raise DomainError(f"xi={xi!r} is outside [0, 1]")
        estimate = xi * direct + (1.0 - xi) * interpolated
        return CombinationResult(estimate=float(estimate), xi_used=float(xi), w1=w1, w3=w3)

    draws = bootstrap(sample, lambda s: _late2_pair(s, link), bootstrap_b, seed, jobs)
    cov = draws.cov
    v1, v2, v12 = float(cov[0, 0]), float(cov[1, 1]), float(cov[0, 1])
    denom = v1 + v2 - 2.0 * v12
    if denom <= 0:
        raise DegeneracyError("bootstrap variance of the LATE_2 difference is zero")
    xi_hat = (v2 - v12) / denom
    clamped = not XI_BOUNDS[0] <= xi_hat <= XI_BOUNDS[1]
    if clamped:
        warnings.warn(f"estimated xi={xi_hat:.4g} clamped into {XI_BOUNDS}", XiClampWarning, stacklevel=2)
        xi_hat = min(max(xi_hat, XI_BOUNDS[0]), XI_BOUNDS[1])

    estimate = xi_hat * direct + (1.0 - xi_hat) * interpolated
    return CombinationResult(
        estimate=float(estimate), xi_used=float(xi_hat), w1=w1, w3=w3,
        v1=v1, v2=v2, v12=v12, xi_clamped=clamped, discarded=draws.discarded,
    )
