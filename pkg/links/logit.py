"""Logit link: J(u) = log(u / (1 - u)), μ_J = 0.

λ₁ has the closed form [p log p + (1 - p) log(1 - p)] / p. Higher moments are
integrated on the J scale, where U <= p becomes X <= logit(p) for a standard
logistic X and the integrand x^ℓ f(x) is smooth with exponential tails:

    λ_{1ℓ}(p) = ∫_{-∞}^{logit p} x^ℓ f(x) dx / p
    λ_{0ℓ}(p) = (-1)^ℓ λ_{1ℓ}(1 - p)
"""

import functools
import warnings

from scipy import integrate
from scipy.special import expit, logit, xlogy

from errors import ConvergenceWarning

from .base import QUAD_TOL, LinkFamily


def _logistic_density(x: float) -> float:
    return float(expit(x) * expit(-x))


class LogitLink(LinkFamily):
    kind = "logit"

    def j(self, u):
        return logit(u)

    @property
    def mu_j(self) -> float:
        return 0.0

    def _lambda1(self, p: float) -> float:
        return float((xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / p)

    def _lambda_poly(self, d: int, ell: int, p: float) -> float:
        if d == 1:
            return self._lower_moment(ell, p)
        # the logistic law is symmetric, so the upper tail at p is the lower tail at 1 - p
        return (-1) ** ell * self._lower_moment(ell, 1.0 - p)

    @functools.lru_cache(maxsize=8192)
    def _lower_moment(self, ell: int, p: float) -> float:
        def integrand(x):
            density = _logistic_density(x)
            return 0.0 if density == 0.0 else x ** ell * density

        total, err = integrate.quad(integrand, -float("inf"), float(logit(p)),
                                    epsabs=0.0, epsrel=1e-13, limit=400)
        value, err = total / p, err / p
        tol = QUAD_TOL * max(1.0, abs(value))
        if err > tol:
            warnings.warn(
                f"logit: quadrature error {err:.2e} above {tol:.1e} (ell={ell}, p={p})",
                ConvergenceWarning, stacklevel=2,
            )
        return float(value)
