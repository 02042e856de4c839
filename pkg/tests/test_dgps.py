"""Tests for DGP specs and the seeded generators."""

import logging

import numpy as np
import pytest

from dgps import DGP_GENERATORS, DgpSpec, draw_corner_fixture, generate
from dgps.base import make_rng, open_uniform, report_conditions, standard_normal
from errors import ConfigError
from estimators import bootstrap, cf_fit, cf_late, iv_po_means
from links import get_link
from sample import Sample, cell_stats


class TestSpec:
    def test_default_instrument_probabilities(self):
        spec = DgpSpec("late_nonparametric", p=(0.2, 0.5, 0.8))
        assert spec.z_probs == pytest.approx((1 / 3, 1 / 3, 1 / 3))
        assert spec.k_max == 2

    def test_unknown_variant(self):
        with pytest.raises(ConfigError, match="Unknown DGP variant"):
            DgpSpec("probit_iv")

    @pytest.mark.parametrize("kwargs", [
        {"p": (0.5, 0.4)},
        {"p": (0.0, 0.4)},
        {"p": (0.2, 0.4), "z_probs": (0.5, 0.6)},
        {"p": (0.2, 0.4), "noise": (-1.0, 1.0)},
        {"p": (0.2, 0.4), "group_means": (0.0, 1.0)},
        {"p": (0.2, 0.4), "n": 0},
    ])
    def test_invalid_late_specs(self, kwargs):
        with pytest.raises(ConfigError):
            DgpSpec("late_nonparametric", **kwargs)

    def test_invalid_defier_thresholds(self):
        with pytest.raises(ConfigError, match="thresholds"):
            DgpSpec("defier", kappa=0.1, eta=0.2)

    def test_config_round_trip(self, tmp_path):
        spec = DgpSpec(
            "parametric_heckit", p=(0.25, 0.75), alpha=(-0.5, 0.5), gamma=(4.0, -4.0),
            sigma=(0.5, 1.5), link="linear", x_share=(0.4,), p_x1=(0.3, 0.6), tau=(0.75,), n=321,
        )
        assert DgpSpec.from_config(spec.to_config()) == spec
        path = tmp_path / "spec.env"
        spec.dump(path)
        assert DgpSpec.load(path) == spec

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown DGP key"):
            DgpSpec.from_config({"VARIANT": "late_nonparametric", "COLOUR": "red"})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            DgpSpec.load(tmp_path / "absent.env")


class TestRandomStreams:
    def test_open_uniform_strictly_inside(self):
        u = open_uniform(make_rng(0), 100_000)
        assert u.min() > 0.0 and u.max() < 1.0

    def test_standard_normal_moments(self):
        e = standard_normal(make_rng(1), 200_000)
        assert abs(e.mean()) < 0.01
        assert abs(e.std() - 1.0) < 0.01

    @pytest.mark.parametrize("variant", list(DGP_GENERATORS))
    def test_same_seed_same_sample(self, variant):
        spec = DgpSpec(variant)
        first, second = generate(spec, n=200, seed=42), generate(spec, n=200, seed=42)
        other = generate(spec, n=200, seed=43)
        assert np.array_equal(first.y, second.y)
        assert np.array_equal(first.d, second.d)
        assert np.array_equal(first.z, second.z)
        assert not np.array_equal(first.y, other.y)


class TestGenerators:
    def test_late_sample_group_means(self):
        spec = DgpSpec("late_nonparametric", p=(0.3, 0.7), group_means=(1.5, -1.0, 1.0, 0.0, 0.5, -0.5),
                       noise=(0.0, 0.0))
        sample = generate(spec, n=20_000, seed=3)
        means = iv_po_means(cell_stats(sample))
        assert means.mu_1at == 1.5
        assert means.mu_0nt == -0.5
        assert means.mu_1c == pytest.approx(1.0, abs=0.05)
        assert means.mu_0c == pytest.approx(0.0, abs=0.05)

    def test_covariate_columns(self):
        spec = DgpSpec("late_nonparametric", p=(0.3, 0.7), x_share=(0.5,), p_x1=(0.2, 0.6), tau=(2.0,))
        sample = generate(spec, n=500, seed=4)
        assert sample.n_covariates == 1
        assert set(np.unique(sample.x[:, 0])) == {0.0, 1.0}

    def test_heckit_recovers_late(self):
        spec = DgpSpec("parametric_heckit", p=(0.3, 0.7), alpha=(0.0, 1.0), gamma=(0.5, -0.5))
        sample = generate(spec, n=20_000, seed=5)
        link = get_link("probit")
        truth = 1.0 + (-1.0) * link.gamma(0.3, 0.7)
        assert cf_late(cf_fit(sample, link)) == pytest.approx(truth, abs=0.15)

    @pytest.mark.slow
    def test_heckit_coefficients_within_three_standard_errors(self):
        spec = DgpSpec("parametric_heckit", p=(0.3, 0.7), alpha=(0.0, 1.0), gamma=(0.5, -0.5), sigma=(1.0, 1.0))
        sample = generate(spec, n=100_000, seed=8)
        link = get_link("probit")

        def coefficients(s):
            fit = cf_fit(s, link)
            return [*fit.alpha, *fit.gamma]

        estimate = np.array(coefficients(sample))
        se = np.sqrt(np.diag(bootstrap(sample, coefficients, replicates=100, seed=9).cov))
        truth = np.array([*spec.alpha, *spec.gamma])
        assert np.all(np.abs(estimate - truth) <= 3.0 * se)

    def test_binary_sample(self):
        spec = DgpSpec("binary_outcome", p=(0.3, 0.8), mu=(0.9, 0.1, 0.6, 0.4))
        sample = generate(spec, n=300, seed=6)
        assert set(np.unique(sample.y)) <= {0.0, 1.0}

    def test_defier_choice_probabilities(self):
        spec = DgpSpec("defier", kappa=0.4, eta=0.3, upsilon=0.8, link="linear")
        stats = cell_stats(generate(spec, n=40_000, seed=8))
        assert stats.p_hat[0] == pytest.approx(0.4, abs=0.02)
        assert stats.p_hat[1] == pytest.approx(0.4 + 0.3 * (2 * 0.8 - 1), abs=0.02)

    def test_corner_fixture(self):
        spec = DgpSpec("binary_outcome", p=(0.5, 0.6), mu=(0.8, 0.5, 1.0, 0.5))
        sample, attempt = draw_corner_fixture(spec, n=40, seed=2026)
        assert attempt >= 0
        assert iv_po_means(cell_stats(sample)).mu_1c > 1.0
        again, same_attempt = draw_corner_fixture(spec, n=40, seed=2026)
        assert same_attempt == attempt
        assert np.array_equal(again.y, sample.y)

    def test_condition_report_is_logged(self, caplog):
        sample = Sample.from_arrays([0.0, 1.0, 0.0], [0, 0, 1], [0, 1, 1])
        with caplog.at_level(logging.WARNING):
            assert not report_conditions(sample, "fixture")
        assert "violates Conditions 1-2" in caplog.text
