"""Full-size randomized equivalence suites (run with -m slow)."""

import pytest

from estimators import (
    cf_fit,
    cf_late,
    cf_po_means,
    iv_late,
    iv_po_means,
    pairwise_iv_late,
    poly_cf_fit,
    poly_cf_late,
    telser_late,
)
from links import get_link
from sample import cell_stats

from .conftest import random_late_samples

pytestmark = pytest.mark.slow

LINKS = ["probit", "linear", "logit"]


@pytest.fixture(scope="module")
def binary_z_samples():
    return random_late_samples(500, seed=2026, n_range=(20, 500))


@pytest.fixture(scope="module", params=[2, 3])
def multi_z_samples(request):
    return random_late_samples(100, seed=31 + request.param, k_max=request.param, n_range=(150, 600))


class TestBinaryInstrument:
    @pytest.mark.parametrize("name", LINKS)
    def test_cf_late_equals_iv(self, binary_z_samples, name):
        link = get_link(name)
        for sample in binary_z_samples:
            iv = iv_late(cell_stats(sample))
            assert cf_late(cf_fit(sample, link)) == pytest.approx(iv, abs=1e-8 * (1 + abs(iv)))

    @pytest.mark.parametrize("name", LINKS)
    def test_cf_po_means_equal_iv(self, binary_z_samples, name):
        link = get_link(name)
        for sample in binary_z_samples:
            expected = iv_po_means(cell_stats(sample)).as_tuple()
            got = cf_po_means(cf_fit(sample, link)).as_tuple()
            for a, b in zip(got, expected):
                assert a == pytest.approx(b, abs=1e-8 * (1 + abs(b)))

    def test_telser_equals_iv(self, binary_z_samples):
        for sample in binary_z_samples:
            iv = iv_late(cell_stats(sample))
            assert telser_late(sample) == pytest.approx(iv, abs=1e-10 * (1 + abs(iv)))


class TestMultiValuedInstrument:
    @pytest.mark.parametrize("name", LINKS)
    def test_saturated_poly_cf_equals_pairwise_iv(self, multi_z_samples, name):
        link = get_link(name)
        for sample in multi_z_samples:
            stats = cell_stats(sample)
            fit = poly_cf_fit(sample, link, sample.k_max)
            for z in range(1, sample.k_max + 1):
                iv = pairwise_iv_late(stats, z)
                assert poly_cf_late(fit, z) == pytest.approx(iv, abs=1e-6 * (1 + abs(iv)))
