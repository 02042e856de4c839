"""Linear link: J(u) = u, μ_J = 1/2. Every truncated moment is a polynomial integral."""

from .base import LinkFamily


class LinearLink(LinkFamily):
    kind = "linear"

    def j(self, u):
        return u

    @property
    def mu_j(self) -> float:
        return 0.5

    def _lambda1(self, p: float) -> float:
        return (p - 1.0) / 2.0

    def _lambda_poly(self, d: int, ell: int, p: float) -> float:
        k = ell + 1
        if d == 1:
            return ((p - 0.5) ** k - (-0.5) ** k) / (k * p)
        return (0.5 ** k - (p - 0.5) ** k) / (k * (1.0 - p))
