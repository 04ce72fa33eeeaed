"""Sine-kernel determinant, Gaudin density, moments, comparisons."""

import math

import numpy as np
import pytest

from conftest import (ORACLE_C1, ORACLE_E, ORACLE_GAUDIN_CDF, ORACLE_P,
                      assert_close)
from zetagap.errors import DomainError, TooFewSamplesError
from zetagap.gue import (build_gaudin_table, c1, compare_histogram, fredholm_E,
                         gaudin_cdf, gaudin_p, gaudin_sample, predicted_moment)


class TestFredholm:
    def test_e_at_zero_exact(self):
        assert fredholm_E(0.0) == 1.0

    def test_trace_term_slope(self):
        # dE/ds(0) = -int_0^s K(x,x) dx / ds = -1 since K(x,x) = 1
        h = 1e-5
        slope = (fredholm_E(h) - 1.0) / h
        assert_close(slope, -1.0, 1e-4, "E'(0)")

    def test_oracle_values(self):
        for s, ref in ORACLE_E.items():
            assert abs(fredholm_E(s) - ref) <= 1e-9 * max(ref, 1e-6)

    def test_order_doubling(self):
        for s in np.linspace(0.1, 5.0, 25):
            a = fredholm_E(float(s), 40)
            b = fredholm_E(float(s), 80)
            assert abs(a - b) <= 1e-8 * abs(b)

    def test_monotone_decreasing(self):
        us = np.linspace(0.0, 5.0, 26)
        es = [fredholm_E(float(u)) for u in us]
        assert all(a > b for a, b in zip(es, es[1:]))
        assert 0.0 < es[-1] < 1e-3

    def test_order_validation(self):
        with pytest.raises(DomainError):
            fredholm_E(1.0, order=5)
        with pytest.raises(DomainError):
            fredholm_E(-1.0)


class TestGaudinDensity:
    def test_p_at_zero(self):
        assert gaudin_p(0.0) == 0.0

    def test_oracle_values(self):
        for u, ref in ORACLE_P.items():
            assert_close(gaudin_p(u), ref, 5e-8, f"p({u})")

    def test_small_u_quadratic_scaling(self):
        # p/u^2 approaches a constant; ratios at 0.02/0.04/0.08 within 5%
        ratios = [gaudin_p(u) / u ** 2 for u in (0.02, 0.04, 0.08)]
        for r in ratios[1:]:
            assert abs(r / ratios[0] - 1.0) < 0.05
        # the determinant arbitrates the series constant: pi^2/3, not pi^3/3
        assert abs(ratios[0] - math.pi ** 2 / 3.0) < 0.01
        assert abs(ratios[0] - math.pi ** 3 / 3.0) > 5.0

    def test_small_u_fine_scaling(self):
        # halving u from 0.02 to 0.01 tracks pure u^2 scaling within 1%
        r1 = gaudin_p(0.01) / 0.01 ** 2
        r2 = gaudin_p(0.02) / 0.02 ** 2
        assert abs(r2 / r1 - 1.0) < 0.01

    def test_nonnegative(self):
        for u in np.linspace(0.0, 5.0, 41):
            assert gaudin_p(float(u)) >= -1e-10

    def test_cdf_matches_oracle(self):
        for u, ref in ORACLE_GAUDIN_CDF.items():
            assert_close(gaudin_cdf(u), ref, 1e-7, f"CDF({u})")

    def test_total_mass_on_grid(self):
        # int p over [0, u_max] = CDF(5): all mass except < 1e-6 in the tail
        assert 1.0 - 1e-6 <= gaudin_cdf(5.0) <= 1.0 + 1e-9

    def test_cdf_is_integral_of_p(self):
        # two independent finite-difference routes: E'(u)+1 vs quadrature of E''
        from scipy.integrate import quad
        val, _ = quad(gaudin_p, 0.0, 1.5, limit=100)
        assert_close(val, gaudin_cdf(1.5), 1e-6, "CDF consistency")


class TestMoments:
    def test_normalization_pair(self):
        assert abs(c1(0.0) - 1.0) <= 1e-4
        assert abs(c1(1.0) - 1.0) <= 1e-4

    def test_oracle_c1_2_and_4(self):
        assert abs(c1(2.0) / ORACLE_C1[2] - 1.0) <= 1e-4
        assert abs(c1(4.0) / ORACLE_C1[4] - 1.0) <= 1e-4

    def test_domain(self):
        with pytest.raises(DomainError):
            c1(-1.0)


class TestPredictions:
    def test_k1_is_T(self):
        p = predicted_moment(1.0, 10_000.0)
        assert abs(p.predicted_s_k / 10_000.0 - 1.0) <= 1e-4

    def test_k0_approximates_count(self):
        T = 10_000.0
        p = predicted_moment(0.0, T)
        from zetagap.counting import n_main
        assert abs(p.predicted_s_k / n_main(T) - 1.0) <= 0.05

    def test_forms_agree(self, table_2000):
        T = 2000.0
        p = predicted_moment(2.0, T, n_of_t=float(table_2000.count_upto(T)))
        assert abs(p.predicted_s_k / p.predicted_s_k_count_form - 1.0) <= 0.02

    def test_precondition(self):
        with pytest.raises(DomainError):
            predicted_moment(2.0, 20.0)


class TestComparison:
    def test_self_consistency_inverse_transform(self):
        draws = gaudin_sample(10_000, seed=20240811)
        comp = compare_histogram(draws, bins=30)
        assert comp.ks_distance <= 0.02

    def test_sampling_deterministic(self):
        a = gaudin_sample(100, seed=5)
        b = gaudin_sample(100, seed=5)
        assert np.array_equal(a, b)

    def test_empirical_spacings(self, table_2000):
        from zetagap.gaps import gaps
        seq = gaps(table_2000, 2000.0)
        comp = compare_histogram(seq.normalized, bins=25)
        assert comp.n_samples == len(seq)
        assert comp.ks_distance < 0.08      # informational scale at T = 2000
        assert abs(comp.predicted.sum() - 1.0) < 1e-3

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            compare_histogram(np.ones(100), bins=20)

    def test_bins_minimum(self):
        with pytest.raises(DomainError):
            compare_histogram(np.ones(2000), bins=5)

    def test_degenerate_interval_mass_zero(self):
        # the predicted mass of [a, a] vanishes: CDF(a) - CDF(a) = 0
        assert gaudin_cdf(1.3) - gaudin_cdf(1.3) == 0.0


class TestGaudinTable:
    def test_grid_invariants(self):
        table = build_gaudin_table(n_points=81)
        assert table.e_values[0] == 1.0
        assert np.all(np.diff(table.e_values) < 0)
        assert np.all(table.p_values >= -1e-10)
        assert 0.0 < table.e_values[-1] < 1e-3
