"""Tests for link families and their truncated moments."""

import math
import warnings

import numpy as np
import pytest

from errors import DomainError, LinkError, OrderingError, PropensityClampWarning
from links import CustomLink, LinearLink, ProbitLink, get_link
from normal import ncdf, ndtri, npdf

P_GRID = np.linspace(0.01, 0.99, 99)

# E[(J(U) - μ_J)^ℓ] for ℓ = 2, 3
UNCONDITIONAL = {
    "probit": (1.0, 0.0),
    "linear": (1.0 / 12.0, 0.0),
    "logit": (math.pi ** 2 / 3.0, 0.0),
}


class TestNormalKernel:
    @pytest.mark.parametrize("p", [1e-10, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.9999])
    def test_ndtri_inverts_ncdf(self, p):
        assert ncdf(ndtri(p)) == pytest.approx(p, rel=1e-13)

    def test_ndtri_median(self):
        assert ndtri(0.5) == 0.0

    def test_npdf_at_zero(self):
        assert npdf(0.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-15)


class TestRegistry:
    def test_get_link_is_shared_and_case_insensitive(self):
        assert get_link("Probit") is get_link("probit")
        assert isinstance(get_link("linear"), LinearLink)

    def test_unknown_link(self):
        with pytest.raises(LinkError, match="Unknown link: cauchy"):
            get_link("cauchy")


class TestClosedForms:
    def test_probit_lambda1_at_half(self):
        assert get_link("probit").lambda1(0.5) == pytest.approx(-2.0 * npdf(0.0), rel=1e-14)

    def test_linear_values(self):
        link = get_link("linear")
        assert link.lambda1(0.25) == -0.375
        assert link.lambda0(0.75) == pytest.approx(0.375)
        assert link.gamma(0.25, 0.75) == pytest.approx(0.0, abs=1e-15)

    def test_logit_lambda1(self):
        p = 0.3
        expected = (p * math.log(p) + (1 - p) * math.log(1 - p)) / p
        assert get_link("logit").lambda1(p) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("name", ["probit", "linear", "logit"])
    def test_lambda_identity(self, name):
        link = get_link(name)
        for p in P_GRID:
            assert p * link.lambda1(p) + (1 - p) * link.lambda0(p) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["probit", "linear", "logit"])
    @pytest.mark.parametrize("ell", [2, 3])
    def test_higher_moment_identity(self, name, ell):
        link = get_link(name)
        target = UNCONDITIONAL[name][ell - 2]
        for p in P_GRID[::7]:
            total = p * link.lambda_poly(1, ell, p) + (1 - p) * link.lambda_poly(0, ell, p)
            assert total == pytest.approx(target, abs=1e-9 * (1 + abs(target)))

    @pytest.mark.parametrize("name", ["probit", "linear", "logit"])
    @pytest.mark.parametrize("d", [0, 1])
    @pytest.mark.parametrize("ell", [1, 2, 3])
    def test_closed_form_matches_quadrature(self, name, d, ell):
        link = get_link(name)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for p in (0.1, 0.3, 0.5, 0.7, 0.9):
                closed = link.lambda_poly(d, ell, p)
                quad = link.truncated_moment(d, ell, p).value
                assert closed == pytest.approx(quad, abs=1e-9 * (1 + abs(closed)))

    @pytest.mark.parametrize("ell", [2, 3])
    def test_logit_moments_on_full_grid(self, ell):
        link = get_link("logit")
        target = UNCONDITIONAL["logit"][ell - 2]
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for p in P_GRID:
                lower, upper = link.lambda_poly(1, ell, p), link.lambda_poly(0, ell, p)
                assert p * lower + (1 - p) * upper == pytest.approx(target, abs=1e-12)
                assert lower == pytest.approx((-1) ** ell * link.lambda_poly(0, ell, 1 - p), rel=1e-12)

    def test_logit_second_moment_at_half(self):
        # symmetric halves of E[X^2] = π²/3 for the standard logistic
        assert get_link("logit").lambda_poly(1, 2, 0.5) == pytest.approx(math.pi ** 2 / 3.0, abs=1e-12)

    @pytest.mark.parametrize("name", ["probit", "linear", "logit"])
    def test_lambda1_strictly_increasing(self, name):
        link = get_link(name)
        values = np.array([link.lambda1(p) for p in P_GRID])
        assert np.all(np.diff(values) > 0)

    def test_gamma_poly_order_one_is_gamma(self):
        link = get_link("probit")
        assert link.gamma_poly(1, 0.2, 0.6) == link.gamma(0.2, 0.6)

    def test_gamma_is_interval_mean(self):
        link = get_link("probit")
        p, q = 0.2, 0.6
        expected = (npdf(ndtri(p)) - npdf(ndtri(q))) / (q - p)
        assert link.gamma(p, q) == pytest.approx(expected, rel=1e-12)


class TestArgumentChecks:
    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_outside_unit_interval(self, p):
        with pytest.raises(DomainError):
            get_link("probit").lambda1(p)

    def test_clamp_warns(self):
        with pytest.warns(PropensityClampWarning):
            value = get_link("linear").lambda1(1e-14)
        assert value == pytest.approx(-0.5)

    def test_gamma_requires_order(self):
        with pytest.raises(OrderingError):
            get_link("linear").gamma(0.7, 0.3)

    def test_bad_moment_order(self):
        with pytest.raises(DomainError):
            get_link("linear").lambda_poly(1, 0, 0.5)
        with pytest.raises(DomainError):
            get_link("linear").lambda_poly(1, 13, 0.5)

    def test_bad_arm(self):
        with pytest.raises(DomainError):
            get_link("linear").lambda_d(2, 0.5)


class TestCustomLink:
    def test_identity_matches_linear(self):
        custom = CustomLink(lambda u: u, "identity")
        linear = LinearLink()
        assert custom.mu_j == pytest.approx(0.5, abs=1e-12)
        for p in (0.1, 0.5, 0.8):
            assert custom.lambda1(p) == pytest.approx(linear.lambda1(p), abs=1e-10)

    def test_scalar_only_callable_is_vectorized(self):
        custom = CustomLink(lambda u: math.log(u / (1 - u)), "scalar logit")
        assert custom.lambda1(0.4) == pytest.approx(get_link("logit").lambda1(0.4), abs=1e-8)

    def test_probit_as_custom(self):
        custom = CustomLink(ndtri, "normal quantile")
        assert custom.lambda1(0.35) == pytest.approx(ProbitLink().lambda1(0.35), abs=1e-8)

    def test_decreasing_rejected(self):
        with pytest.raises(LinkError, match="strictly increasing"):
            CustomLink(lambda u: -u, "decreasing")
