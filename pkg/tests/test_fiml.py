"""Tests for the binary-outcome likelihood estimators."""

import itertools
import math

import numpy as np
import pytest

from errors import DataError, InfeasibleParameterError
from estimators import FimlParams, fiml_fit, fiml_late, iv_late, iv_po_means, limited_info_fit, log_likelihood
from estimators.fiml import cell_probabilities, start_points
from sample import binary_counts, cell_stats

from .conftest import interior_binary_samples

GRID_STEP = 1e-3


def loglik_by_observation(params: FimlParams, sample) -> float:
    q = cell_probabilities(params)
    return math.fsum(math.log(q[z, d, int(y)]) for y, d, z in zip(sample.y, sample.d, sample.z))


def best_grid_neighbour(params: FimlParams, counts) -> float:
    """Highest log likelihood over the feasible ±1e-3 grid around params."""
    base = params.as_array()
    best = -math.inf
    for offset in itertools.product((-GRID_STEP, 0.0, GRID_STEP), repeat=6):
        candidate = FimlParams(*(base + np.array(offset)))
        if candidate.is_feasible(tol=0.0):
            best = max(best, log_likelihood(candidate, counts))
    return best


@pytest.fixture(scope="module")
def interior_samples():
    return interior_binary_samples(100)


class TestLikelihood:
    def test_cell_probabilities_sum_to_one_per_z(self):
        params = FimlParams(0.2, 0.5, 0.3, 0.6, 0.9, 0.1)
        q = cell_probabilities(params)
        assert q[0].sum() == pytest.approx(1.0)
        assert q[1].sum() == pytest.approx(1.0)
        assert params.pi_nt == pytest.approx(0.3)

    def test_count_path_matches_observation_loop(self, corner_sample):
        params = FimlParams(0.45, 0.15, 0.75, 0.45, 0.95, 0.35)
        fast = log_likelihood(params, binary_counts(corner_sample))
        assert fast == pytest.approx(loglik_by_observation(params, corner_sample), abs=1e-12)

    def test_infeasible_parameters(self, corner_sample):
        with pytest.raises(InfeasibleParameterError):
            log_likelihood(FimlParams(0.6, 0.6, 0.5, 0.5, 0.5, 0.5), binary_counts(corner_sample))
        with pytest.raises(InfeasibleParameterError):
            log_likelihood(FimlParams(0.2, 0.2, 1.5, 0.5, 0.5, 0.5), binary_counts(corner_sample))

    def test_zero_probability_cell_is_minus_infinity(self, corner_sample):
        # μ₁at = 0 cannot produce the Y=1 treated observations at Z=0
        params = FimlParams(0.5, 0.1, 0.0, 0.5, 1.0, 0.0)
        assert log_likelihood(params, binary_counts(corner_sample)) == -math.inf

    @pytest.mark.parametrize("index", range(2, 6))
    def test_concave_in_each_mean(self, corner_sample, index):
        counts = binary_counts(corner_sample)
        base = np.array([0.45, 0.15, 0.75, 0.45, 0.95, 0.35])
        grid = np.linspace(0.005, 0.995, 199)
        values = []
        for mu in grid:
            point = base.copy()
            point[index] = mu
            values.append(log_likelihood(FimlParams(*point), counts))
        assert np.all(np.diff(values, 2) <= 1e-9)

    def test_start_points_are_deterministic(self):
        candidate = np.full(6, 0.5)
        first, second = start_points(candidate), start_points(candidate)
        assert first.shape == (16, 6)
        assert np.array_equal(first, second)
        assert np.array_equal(first[0], candidate)
        assert np.all((first >= 0) & (first <= 1))

    def test_rejects_continuous_outcome(self, toy8):
        with pytest.raises(DataError):
            fiml_fit(toy8)


class TestInterior:
    def test_fiml_equals_iv_plug_ins(self, interior_samples):
        for sample in interior_samples:
            stats = cell_stats(sample)
            result = fiml_fit(sample)
            means = iv_po_means(stats)
            assert result.interior
            assert result.params.pi_at == pytest.approx(stats.p_hat[0], abs=1e-6)
            assert result.params.pi_c == pytest.approx(stats.p_hat[1] - stats.p_hat[0], abs=1e-6)
            assert (result.params.mu_1at, result.params.mu_0nt, result.params.mu_1c, result.params.mu_0c) \
                == pytest.approx(means.as_tuple(), abs=1e-6)
            assert fiml_late(result) == pytest.approx(iv_late(stats), abs=1e-6)

    def test_interior_is_local_maximum(self, interior_samples):
        sample = interior_samples[0]
        result = fiml_fit(sample)
        assert best_grid_neighbour(result.params, binary_counts(sample)) <= result.loglik + 1e-6

    def test_duplicated_sample_doubles_loglik(self, interior_samples):
        sample = interior_samples[0]
        doubled = sample.take(np.tile(np.arange(sample.n), 2))
        single, twice = fiml_fit(sample), fiml_fit(doubled)
        assert twice.loglik == pytest.approx(2.0 * single.loglik, rel=1e-12)
        assert twice.params.as_array() == pytest.approx(single.params.as_array(), abs=1e-12)

    def test_limited_info_equals_iv(self, interior_samples):
        for sample in interior_samples:
            result = limited_info_fit(sample)
            assert result.late == pytest.approx(iv_late(cell_stats(sample)), abs=1e-6)


class TestCorner:
    def test_corner_fixture_iv(self, corner_sample):
        stats = cell_stats(corner_sample)
        means = iv_po_means(stats)
        assert means.mu_1c == pytest.approx(2.0)
        assert means.mu_0c == pytest.approx(0.0, abs=1e-12)
        assert iv_late(stats) == pytest.approx(2.0)

    def test_fiml_moves_to_boundary(self, corner_sample):
        result = fiml_fit(corner_sample)
        assert not result.interior
        assert result.params.is_feasible(tol=0.0)
        mus = result.params.as_array()[2:]
        assert np.all((mus >= 0.0) & (mus <= 1.0))
        assert -1.0 <= result.late <= 1.0
        assert abs(result.late - 2.0) > 1e-6
        assert result.starts == 16

    def test_fiml_matches_grid_refinement(self, corner_sample):
        result = fiml_fit(corner_sample)
        counts = binary_counts(corner_sample)
        assert result.loglik == pytest.approx(log_likelihood(result.params, counts), abs=1e-12)
        assert best_grid_neighbour(result.params, counts) <= result.loglik + 1e-6

    def test_fiml_beats_clamped_iv_candidate(self, corner_sample):
        stats = cell_stats(corner_sample)
        means = iv_po_means(stats)
        p0, p1 = stats.p_hat
        candidate = FimlParams(p0, p1 - p0, means.mu_1at, means.mu_0nt, means.mu_1c, means.mu_0c).clamped()
        counts = binary_counts(corner_sample)
        assert fiml_fit(corner_sample).loglik >= log_likelihood(candidate, counts) - 1e-12

    def test_duplicated_corner_sample_doubles_loglik(self, corner_sample):
        doubled = corner_sample.take(np.tile(np.arange(corner_sample.n), 2))
        single, twice = fiml_fit(corner_sample), fiml_fit(doubled)
        assert not twice.interior
        assert twice.loglik == pytest.approx(2.0 * single.loglik, abs=1e-8 * (1 + abs(twice.loglik)))
        # cell probabilities pin down the argmax even where the parameters tie
        assert cell_probabilities(twice.params) == pytest.approx(cell_probabilities(single.params), abs=1e-5)

    def test_fiml_is_deterministic(self, corner_sample):
        assert fiml_fit(corner_sample) == fiml_fit(corner_sample)

    def test_limited_info_keeps_shares(self, corner_sample):
        stats = cell_stats(corner_sample)
        result = limited_info_fit(corner_sample)
        assert not result.interior
        assert result.params.pi_at == stats.p_hat[0]
        assert result.params.pi_c == pytest.approx(stats.p_hat[1] - stats.p_hat[0])
        assert np.all((result.params.as_array()[2:] >= 0.0) & (result.params.as_array()[2:] <= 1.0))

    @pytest.mark.slow
    def test_parallel_starts_match_serial(self, corner_sample):
        assert fiml_fit(corner_sample, jobs=2) == fiml_fit(corner_sample, jobs=1)
