"""Tests for multi-valued instrument estimators."""

import numpy as np
import pytest

from dgps import DgpSpec, generate
from errors import DataError, DegeneracyError, DomainError, RankDeficiencyError
from estimators import (
    combination_late2,
    iv_weights,
    pairwise_cf_late,
    pairwise_iv_late,
    poly_cf_fit,
    poly_cf_late,
    weighted_iv_late,
)
from estimators.multi_instrument import combination_weights, lambda_matrix, psi_vector, upsilon_vector
from links import get_link
from sample import cell_stats

from .conftest import random_late_samples

LINKS = ["probit", "linear", "logit"]


@pytest.fixture(scope="module")
def k2_samples():
    return random_late_samples(20, seed=11, k_max=2, n_range=(150, 500))


@pytest.fixture(scope="module")
def k3_samples():
    return random_late_samples(20, seed=13, k_max=3, n_range=(200, 600))


class TestPairwise:
    @pytest.mark.parametrize("name", LINKS)
    def test_pairwise_cf_equals_pairwise_iv(self, k2_samples, name):
        link = get_link(name)
        for sample in k2_samples[:5]:
            stats = cell_stats(sample)
            for z in (1, 2):
                iv = pairwise_iv_late(stats, z)
                assert pairwise_cf_late(sample, link, z) == pytest.approx(iv, abs=1e-8 * (1 + abs(iv)))

    def test_level_out_of_range(self, k2_samples):
        with pytest.raises(DataError):
            pairwise_iv_late(cell_stats(k2_samples[0]), 3)
        with pytest.raises(DataError):
            pairwise_iv_late(cell_stats(k2_samples[0]), 0)


class TestPolynomialCf:
    @pytest.mark.parametrize("name", LINKS)
    @pytest.mark.parametrize("d", [0, 1])
    def test_lambda_psi_identity(self, k3_samples, name, d):
        link = get_link(name)
        p_hat = cell_stats(k3_samples[0]).p_hat
        lam = lambda_matrix(link, d, p_hat, 3)
        for z in (1, 2, 3):
            lhs = lam.T @ psi_vector(d, p_hat, z)
            assert lhs == pytest.approx(upsilon_vector(link, p_hat, z, 3), abs=1e-8)

    @pytest.mark.parametrize("name", LINKS)
    def test_saturated_order_matches_pairwise_iv(self, k2_samples, k3_samples, name):
        link = get_link(name)
        for sample in [*k2_samples[:5], *k3_samples[:5]]:
            stats = cell_stats(sample)
            fit = poly_cf_fit(sample, link, sample.k_max)
            for z in range(1, sample.k_max + 1):
                iv = pairwise_iv_late(stats, z)
                assert poly_cf_late(fit, z) == pytest.approx(iv, abs=1e-6 * (1 + abs(iv)))

    def test_saturated_fit_reproduces_cell_means(self, k3_samples):
        sample = k3_samples[0]
        stats = cell_stats(sample)
        fit = poly_cf_fit(sample, get_link("probit"), 3)
        for z in range(4):
            for d in (0, 1):
                assert fit.fitted_mean(d, z) == pytest.approx(stats.ybar(d, z), abs=1e-7)

    def test_order_above_k_is_rank_deficient(self, k2_samples):
        with pytest.raises(RankDeficiencyError):
            poly_cf_fit(k2_samples[0], get_link("linear"), 3)

    def test_order_zero_rejected(self, k2_samples):
        with pytest.raises(DomainError):
            poly_cf_fit(k2_samples[0], get_link("linear"), 0)

    def test_lower_order_is_restricted(self, k3_samples):
        # L < K constrains the pairwise LATEs, so they no longer match IV exactly
        sample = k3_samples[0]
        stats = cell_stats(sample)
        fit = poly_cf_fit(sample, get_link("linear"), 1)
        gaps = [abs(poly_cf_late(fit, z) - pairwise_iv_late(stats, z)) for z in (1, 2, 3)]
        assert max(gaps) > 1e-8


class TestWeightedIv:
    def test_weights_reproduce_weighted_iv(self, k3_samples):
        for sample in k3_samples[:5]:
            stats = cell_stats(sample)
            weights = iv_weights(sample, float)
            pairwise = np.array([pairwise_iv_late(stats, z) for z in (1, 2, 3)])
            direct = weighted_iv_late(sample, float)
            assert weights.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(weights > 0)
            assert weights @ pairwise == pytest.approx(direct, abs=1e-8 * (1 + abs(direct)))

    def test_weighted_saturated_poly_cf_equals_weighted_iv(self, k3_samples):
        sample = k3_samples[1]
        fit = poly_cf_fit(sample, get_link("probit"), 3)
        weights = iv_weights(sample, {0: 0.0, 1: 1.0, 2: 4.0, 3: 9.0})
        combined = weights @ np.array([poly_cf_late(fit, z) for z in (1, 2, 3)])
        direct = weighted_iv_late(sample, [0.0, 1.0, 4.0, 9.0])
        assert combined == pytest.approx(direct, abs=1e-6 * (1 + abs(direct)))

    def test_constant_g_is_degenerate(self, k3_samples):
        with pytest.raises(DegeneracyError):
            weighted_iv_late(k3_samples[0], lambda z: 2.0)

    def test_binary_instrument_reduces_to_wald(self):
        sample = random_late_samples(1, seed=5)[0]
        stats = cell_stats(sample)
        assert weighted_iv_late(sample, float) == pytest.approx(pairwise_iv_late(stats, 1), rel=1e-10)


class TestCombination:
    def test_weights_sum_to_one(self, k3_samples):
        p_hat = cell_stats(k3_samples[0]).p_hat
        w1, w3 = combination_weights(get_link("linear"), p_hat)
        assert w1 + w3 == pytest.approx(1.0)

    def test_supplied_xi_endpoints(self, k3_samples):
        sample = k3_samples[0]
        stats = cell_stats(sample)
        link = get_link("probit")
        direct = combination_late2(sample, link, xi=1.0)
        assert direct.estimate == pytest.approx(pairwise_iv_late(stats, 2), rel=1e-12)
        interpolated = combination_late2(sample, link, xi=0.0)
        w1, w3 = interpolated.w1, interpolated.w3
        expected = w3 * pairwise_iv_late(stats, 3) + w1 * pairwise_iv_late(stats, 1)
        assert interpolated.estimate == pytest.approx(expected, rel=1e-12)

    def test_xi_out_of_range(self, k3_samples):
        with pytest.raises(DomainError):
            combination_late2(k3_samples[0], get_link("probit"), xi=1.5)

    def test_needs_three_instrument_steps(self, k2_samples):
        with pytest.raises(DataError):
            combination_late2(k2_samples[0], get_link("probit"), xi=0.5)

    @pytest.mark.slow
    def test_bootstrap_xi_is_deterministic(self, k3_samples):
        link = get_link("linear")
        first = combination_late2(k3_samples[2], link, bootstrap_b=60, seed=99)
        second = combination_late2(k3_samples[2], link, bootstrap_b=60, seed=99)
        assert first == second
        assert 0.01 <= first.xi_used <= 0.99
        assert first.v1 > 0 and first.v2 > 0

    def test_linear_in_xi(self, k3_samples):
        link = get_link("logit")
        for sample in k3_samples[:5]:
            ends = [combination_late2(sample, link, xi=xi).estimate for xi in (0.0, 1.0)]
            middle = combination_late2(sample, link, xi=0.35).estimate
            expected = 0.35 * ends[1] + 0.65 * ends[0]
            assert middle == pytest.approx(expected, abs=1e-12 * (1 + abs(expected)))

    @pytest.mark.slow
    def test_consistent_under_linear_mte(self):
        # probit Heckit outcomes make the MTE linear in Φ⁻¹(u); Γ(0.4, 0.6) = 0 so LATE_2 = α₁ - α₀
        spec = DgpSpec("parametric_heckit", p=(0.2, 0.4, 0.6, 0.8), alpha=(0.0, 1.0), gamma=(0.5, -0.5))
        sample = generate(spec, n=50_000, seed=23)
        result = combination_late2(sample, get_link("probit"), bootstrap_b=100, seed=29)
        xi = result.xi_used
        se = np.sqrt(xi ** 2 * result.v1 + (1 - xi) ** 2 * result.v2 + 2 * xi * (1 - xi) * result.v12)
        assert abs(result.estimate - 1.0) <= 3.0 * se
