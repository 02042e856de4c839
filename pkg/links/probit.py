"""Probit (Heckit) link: J = Φ⁻¹, μ_J = 0.

Truncated moments come from the standard normal recursion

    M_ℓ(a) = ∫_{-∞}^{a} x^ℓ φ(x) dx = -a^{ℓ-1} φ(a) + (ℓ-1) M_{ℓ-2}(a),

with M_0 = Φ(a) and M_1 = -φ(a). The upper tail is (-1)^ℓ M_ℓ(-a).
"""

from normal import ncdf, ndtri, npdf

from .base import LinkFamily


def lower_normal_moment(ell: int, a: float) -> float:
    """∫_{-∞}^{a} x^ℓ φ(x) dx."""
    density = npdf(a)
    prev, cur = ncdf(a), -density
    if ell == 0:
        return prev
    for k in range(2, ell + 1):
        prev, cur = cur, -a ** (k - 1) * density + (k - 1) * prev
    return cur


def upper_normal_moment(ell: int, a: float) -> float:
    """∫_{a}^{∞} x^ℓ φ(x) dx."""
    return (-1) ** ell * lower_normal_moment(ell, -a)


class ProbitLink(LinkFamily):
    kind = "probit"

    def j(self, u):
        return ndtri(u)

    @property
    def mu_j(self) -> float:
        return 0.0

    def _lambda1(self, p: float) -> float:
        return -npdf(ndtri(p)) / p

    def _lambda_poly(self, d: int, ell: int, p: float) -> float:
        a = ndtri(p)
        if d == 1:
            return lower_normal_moment(ell, a) / p
        return upper_normal_moment(ell, a) / (1.0 - p)
