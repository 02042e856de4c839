"""Base class for link families J(·) and their truncated moments.

For U uniform on (0, 1) and a strictly increasing J:

    λ_{1ℓ}(p) = E[(J(U) - μ_J)^ℓ | U <= p]
    λ_{0ℓ}(p) = E[(J(U) - μ_J)^ℓ | U >  p]
    Γ_ℓ(p, p') = [p' λ_{1ℓ}(p') - p λ_{1ℓ}(p)] / (p' - p)

ℓ = 1 gives the control functions λ₁, λ₀ and Γ.
"""

import functools
import logging
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from errors import ConvergenceWarning, DomainError, OrderingError, PropensityClampWarning

logger = logging.getLogger(__name__)

# Probabilities closer than this to 0 or 1 are clamped before evaluation.
P_CLAMP = 1e-12
QUAD_TOL = 1e-12
MAX_ORDER = 12


@dataclass(frozen=True)
class TruncatedMoment:
    """A quadrature value with its absolute error estimate."""
    value: float
    abs_err: float


def needs_clamp(p: float) -> bool:
    return p < P_CLAMP or p > 1.0 - P_CLAMP


def check_probability(p: float, name: str = "p") -> float:
    """Validate p in (0, 1); clamp into [1e-12, 1 - 1e-12] with a warning."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"{name}={p!r} is outside (0, 1)")
    if needs_clamp(p):
        clamped = min(max(p, P_CLAMP), 1.0 - P_CLAMP)
        warnings.warn(f"{name}={p!r} clamped to {clamped!r}", PropensityClampWarning, stacklevel=3)
        return clamped
    return p


def check_order(ell: int) -> int:
    if int(ell) != ell or ell < 1:
        raise DomainError(f"moment order must be a positive integer, got {ell!r}")
    if ell > MAX_ORDER:
        raise DomainError(f"moment order {ell} exceeds the supported maximum {MAX_ORDER}")
    return int(ell)


def check_arm(d: int) -> int:
    if d not in (0, 1):
        raise DomainError(f"treatment arm must be 0 or 1, got {d!r}")
    return int(d)


class LinkFamily(ABC):
    """A strictly increasing J on (0, 1) with mean μ_J under the uniform law."""

    kind: str = ""

    @abstractmethod
    def j(self, u):
        """J(u), vectorized over u in (0, 1)."""

    @property
    @abstractmethod
    def mu_j(self) -> float:
        """E[J(U)] for U uniform."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(kind={self.kind!r})"

    def centered(self, u):
        return self.j(u) - self.mu_j

    # -- closed forms (overridden where available) ---------------------------

    def _lambda1(self, p: float) -> float:
        return self.truncated_moment(1, 1, p).value

    def _lambda_poly(self, d: int, ell: int, p: float) -> float:
        return self.truncated_moment(d, ell, p).value

    # -- public evaluators ----------------------------------------------------

    def lambda1(self, p: float) -> float:
        """E[J(U) - μ_J | U <= p]."""
        return self._lambda1(check_probability(p))

    def lambda0(self, p: float) -> float:
        """E[J(U) - μ_J | U > p], through p λ₁(p) + (1 - p) λ₀(p) = 0."""
        p = check_probability(p)
        return -self._lambda1(p) * p / (1.0 - p)

    def lambda_d(self, d: int, p: float) -> float:
        return self.lambda1(p) if check_arm(d) == 1 else self.lambda0(p)

    def gamma(self, p: float, p_prime: float) -> float:
        """E[J(U) - μ_J | p < U <= p']."""
        p, p_prime = self._ordered(p, p_prime)
        return (p_prime * self._lambda1(p_prime) - p * self._lambda1(p)) / (p_prime - p)

    def lambda_poly(self, d: int, ell: int, p: float) -> float:
        """E[(J(U) - μ_J)^ℓ | U <= p] for d=1, | U > p for d=0."""
        d, ell, p = check_arm(d), check_order(ell), check_probability(p)
        if ell == 1:
            return self._lambda1(p) if d == 1 else -self._lambda1(p) * p / (1.0 - p)
        return self._lambda_poly(d, ell, p)

    def gamma_poly(self, ell: int, p: float, p_prime: float) -> float:
        """E[(J(U) - μ_J)^ℓ | p < U <= p']."""
        ell = check_order(ell)
        p, p_prime = self._ordered(p, p_prime)
        if ell == 1:
            return self.gamma(p, p_prime)
        lo = self._lambda_poly(1, ell, p)
        hi = self._lambda_poly(1, ell, p_prime)
        return (p_prime * hi - p * lo) / (p_prime - p)

    def _ordered(self, p: float, p_prime: float) -> tuple[float, float]:
        if not float(p) < float(p_prime):
            raise OrderingError(f"need p < p', got p={p!r}, p'={p_prime!r}")
        return check_probability(p, "p"), check_probability(p_prime, "p'")

    # -- quadrature -------------------------------------------------------------

    def truncated_moment(self, d: int, ell: int, p: float) -> TruncatedMoment:
        """Adaptive quadrature of the ℓ-th truncated moment.

        The interval is mapped onto (0, 1) (u = p t for d=1, u = p + (1 - p) t
        for d=0), so the conditional mean is the integral itself.
        """
        d, ell, p = check_arm(d), check_order(ell), check_probability(p)
        return self._quad_moment(d, ell, p)

    @functools.lru_cache(maxsize=8192)
    def _quad_moment(self, d: int, ell: int, p: float) -> TruncatedMoment:
        mu = self.mu_j
        if d == 1:
            def integrand(t):
                return (self.j(p * t) - mu) ** ell
        else:
            def integrand(t):
                return (self.j(p + (1.0 - p) * t) - mu) ** ell

        value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=400)
        tol = QUAD_TOL * max(1.0, abs(value))
        if err > tol:
            warnings.warn(
                f"{self.kind}: quadrature error {err:.2e} above {tol:.1e} (d={d}, ell={ell}, p={p})",
                ConvergenceWarning, stacklevel=2,
            )
        return TruncatedMoment(value=float(value), abs_err=float(err))

    def is_strictly_increasing(self, grid: np.ndarray | None = None) -> bool:
        if grid is None:
            grid = np.linspace(1e-6, 1 - 1e-6, 2001)
        values = np.asarray(self.j(grid), dtype=float)
        return bool(np.all(np.isfinite(values)) and np.all(np.diff(values) > 0))
