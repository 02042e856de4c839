"""Maximum likelihood for binary outcomes in the six identified LATE parameters.

The likelihood depends on the data only through the eight (Z, D, Y) cell
counts. When the IV complier means lie in [0, 1] the IV plug-ins are the
maximizer; otherwise the maximum is on the boundary and is found by a
multi-start bounded quasi-Newton search.
"""

import logging
import warnings
from dataclasses import astuple, dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy import optimize
from scipy.special import xlogy
from scipy.stats import qmc

from errors import ConvergenceWarning, InfeasibleParameterError
from sample import BinaryCellCounts, Sample, binary_counts, cell_stats, require_conditions

from .binary import iv_po_means

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-12
N_STARTS = 16
PGTOL = 1e-9
TIE_TOL = 1e-9
# returned to the optimizer in place of -inf
LARGE_PENALTY = 1e30


@dataclass(frozen=True)
class FimlParams:
    pi_at: float
    pi_c: float
    mu_1at: float
    mu_0nt: float
    mu_1c: float
    mu_0c: float

    @property
    def pi_nt(self) -> float:
        return 1.0 - self.pi_at - self.pi_c

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self))

    def is_feasible(self, tol: float = FEASIBILITY_TOL) -> bool:
        values = self.as_array()
        return bool(
            np.all(values >= -tol)
            and np.all(values[2:] <= 1.0 + tol)
            and self.pi_at + self.pi_c <= 1.0 + tol
        )

    def clamped(self) -> "FimlParams":
        """Shares and means projected into the feasible region."""
        pi_at = min(max(self.pi_at, 0.0), 1.0)
        pi_c = min(max(self.pi_c, 0.0), 1.0 - pi_at)
        mus = np.clip(self.as_array()[2:], 0.0, 1.0)
        return FimlParams(pi_at, pi_c, *map(float, mus))


@dataclass(frozen=True)
class FimlResult:
    params: FimlParams
    loglik: float
    interior: bool
    converged: bool = True
    tie: bool = False
    starts: int = 0

    @property
    def late(self) -> float:
        return self.params.mu_1c - self.params.mu_0c


def _bern(mu: float) -> np.ndarray:
    """Pr(Y=y) for y = 0, 1."""
    return np.array([1.0 - mu, mu])


def cell_probabilities(params: FimlParams) -> np.ndarray:
    """q[z, d, y] = Pr(D=d, Y=y | Z=z)."""
    q = np.empty((2, 2, 2))
    q[1, 1] = params.pi_at * _bern(params.mu_1at) + params.pi_c * _bern(params.mu_1c)
    q[0, 1] = params.pi_at * _bern(params.mu_1at)
    q[1, 0] = params.pi_nt * _bern(params.mu_0nt)
    q[0, 0] = params.pi_nt * _bern(params.mu_0nt) + params.pi_c * _bern(params.mu_0c)
    return np.clip(q, 0.0, None)


def log_likelihood(params: FimlParams, counts: BinaryCellCounts) -> float:
    """Σ n[z,d,y] log q[z,d,y]; -inf when a cell with observations has zero probability."""
    if not params.is_feasible():
        raise InfeasibleParameterError(f"infeasible parameters {params}")
    with np.errstate(divide="ignore"):
        return float(np.sum(xlogy(counts.counts, cell_probabilities(params))))


def _gradient(params: FimlParams, counts: np.ndarray) -> np.ndarray:
    """∂ loglik / ∂(π_at, π_c, μ₁at, μ₀nt, μ₁c, μ₀c)."""
    q = cell_probabilities(params)
    ratio = np.divide(counts, q, out=np.zeros_like(q), where=counts > 0)
    sign = np.array([-1.0, 1.0])
    b1at, b1c = _bern(params.mu_1at), _bern(params.mu_1c)
    b0nt, b0c = _bern(params.mu_0nt), _bern(params.mu_0c)
    r11, r01, r10, r00 = ratio[1, 1], ratio[0, 1], ratio[1, 0], ratio[0, 0]

    d_pi_at = r11 @ b1at + r01 @ b1at - r10 @ b0nt - r00 @ b0nt
    d_pi_c = r11 @ b1c - r10 @ b0nt + r00 @ (b0c - b0nt)
    d_mu_1at = params.pi_at * ((r11 + r01) @ sign)
    d_mu_0nt = params.pi_nt * ((r10 + r00) @ sign)
    d_mu_1c = params.pi_c * (r11 @ sign)
    d_mu_0c = params.pi_c * (r00 @ sign)
    return np.array([d_pi_at, d_pi_c, d_mu_1at, d_mu_0nt, d_mu_1c, d_mu_0c])


def _to_params(x: np.ndarray, fixed_pi: tuple[float, float] | None) -> FimlParams:
    if fixed_pi is not None:
        return FimlParams(fixed_pi[0], fixed_pi[1], *map(float, x))
    # π_at = s t, π_c = s (1 - t) maps the unit box onto the share simplex
    s, t = float(x[0]), float(x[1])
    return FimlParams(s * t, s * (1.0 - t), *map(float, x[2:]))


def _from_params(params: FimlParams, fixed_pi: tuple[float, float] | None) -> np.ndarray:
    if fixed_pi is not None:
        return params.as_array()[2:]
    s = params.pi_at + params.pi_c
    t = params.pi_at / s if s > 0 else 0.5
    return np.concatenate([[s, t], params.as_array()[2:]])


def _objective(x: np.ndarray, counts: BinaryCellCounts, fixed_pi, scale: float):
    params = _to_params(np.clip(x, 0.0, 1.0), fixed_pi)
    with np.errstate(divide="ignore"):
        value = float(np.sum(xlogy(counts.counts, cell_probabilities(params))))
    if not np.isfinite(value):
        return LARGE_PENALTY, np.zeros_like(x)
    grad = _gradient(params, counts.counts)
    if fixed_pi is None:
        s, t = x[0], x[1]
        g_s = t * grad[0] + (1 - t) * grad[1]
        g_t = s * (grad[0] - grad[1])
        grad = np.concatenate([[g_s, g_t], grad[2:]])
    else:
        grad = grad[2:]
    return -value / scale, -grad / scale


def _search(counts: BinaryCellCounts, x0: np.ndarray, fixed_pi) -> tuple[np.ndarray, bool]:
    scale = float(max(counts.counts.sum(), 1))
    res = optimize.minimize(
        _objective, x0, args=(counts, fixed_pi, scale), jac=True, method="L-BFGS-B",
        bounds=[(0.0, 1.0)] * len(x0),
        options={"gtol": PGTOL, "ftol": 1e-15, "maxiter": 5000},
    )
    return np.clip(res.x, 0.0, 1.0), bool(res.success)


def start_points(candidate: np.ndarray, count: int = N_STARTS) -> np.ndarray:
    """The clamped IV candidate followed by deterministic Halton points in the unit box."""
    halton = qmc.Halton(d=candidate.size, scramble=False).random(count)
    # the first unscrambled Halton point is the origin
    return np.vstack([candidate, halton[1:count]])


def _maximize(counts: BinaryCellCounts, candidate: FimlParams, fixed_pi, jobs: int) -> FimlResult:
    starts = start_points(_from_params(candidate, fixed_pi))
    results = Parallel(n_jobs=jobs)(delayed(_search)(counts, x0, fixed_pi) for x0 in starts)

    scored = [(log_likelihood(candidate, counts), candidate, True)]
    for x, ok in results:
        params = _to_params(x, fixed_pi).clamped()
        scored.append((log_likelihood(params, counts), params, ok))

    best_ll = max(ll for ll, _, _ in scored)
    near = [(ll, p, ok) for ll, p, ok in scored if ll >= best_ll - TIE_TOL]
    near.sort(key=lambda item: tuple(item[1].as_array()))
    ll, params, _ = near[0]
    distinct = {tuple(np.round(p.as_array(), 6)) for _, p, _ in near}
    converged = any(ok for _, ok in results)
    if not converged:
        warnings.warn("no FIML start met the projected-gradient tolerance", ConvergenceWarning, stacklevel=3)
    logger.debug("fiml search: %d starts, best loglik %.12g, %d near-ties", len(starts), ll, len(near))
    return FimlResult(
        params=params, loglik=ll, interior=False, converged=converged,
        tie=len(distinct) > 1, starts=len(starts),
    )


def _iv_candidate(sample: Sample) -> tuple[BinaryCellCounts, FimlParams]:
    counts = binary_counts(sample)
    stats = cell_stats(sample)
    require_conditions(stats, 0, 1)
    means = iv_po_means(stats)
    p0, p1 = float(stats.p_hat[0]), float(stats.p_hat[1])
    return counts, FimlParams(p0, p1 - p0, means.mu_1at, means.mu_0nt, means.mu_1c, means.mu_0c)


def fiml_fit(sample: Sample, jobs: int = 1) -> FimlResult:
    """Full-information ML over (π_at, π_c, μ₁at, μ₀nt, μ₁c, μ₀c).

    Returns the IV plug-ins when they are feasible (interior=True); otherwise
    the best of the clamped IV candidate and 16 bounded L-BFGS-B searches.
    """
    counts, candidate = _iv_candidate(sample)
    if candidate.is_feasible(tol=0.0):
        return FimlResult(params=candidate, loglik=log_likelihood(candidate, counts), interior=True)
    logger.info("IV complier means outside [0, 1]; searching the boundary")
    return _maximize(counts, candidate.clamped(), None, jobs)


def fiml_late(result: FimlResult) -> float:
    return result.late


def limited_info_fit(sample: Sample, jobs: int = 1) -> FimlResult:
    """Shares fixed at π_at = P̂(0), π_c = P̂(1) - P̂(0); the four means maximized in [0, 1]."""
    counts, candidate = _iv_candidate(sample)
    if candidate.is_feasible(tol=0.0):
        return FimlResult(params=candidate, loglik=log_likelihood(candidate, counts), interior=True)
    fixed_pi = (candidate.pi_at, candidate.pi_c)
    return _maximize(counts, candidate.clamped(), fixed_pi, jobs)
