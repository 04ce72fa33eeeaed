"""Counting formula, argument function, S(T) bounds."""

import math

import numpy as np
import pytest

from conftest import ORACLE_COUNTS, ORACLE_S, assert_close, mp
from zetagap.counting import (HOLDS, REPORT_ONLY, check_S_bounds,
                              counting_terms, n_main, s_of_T, trudgian_rhs)
from zetagap.errors import DomainError


class TestNMain:
    def test_at_2pi(self):
        assert n_main(2 * math.pi) == pytest.approx(-0.125, abs=1e-15)

    def test_at_2pi_e(self):
        assert n_main(2 * math.pi * math.e) == pytest.approx(0.875, abs=1e-12)

    def test_n100(self):
        # 29 zeros below 100: main + S must round there
        assert round(n_main(100.0) + s_of_T(100.0)) == ORACLE_COUNTS[100]

    def test_domain(self):
        with pytest.raises(DomainError):
            n_main(0.0)


class TestSofT:
    def test_between_first_two_zeros(self):
        # N(16) = 1, so S(16) = 1 - n_main(16) up to the tiny O(1/T) defect
        s = s_of_T(16.0)
        assert_close(s, 1.0 - n_main(16.0), 1e-3, "S(16) identity")
        assert_close(s, ORACLE_S[16.0], 1e-9, "S(16) oracle")

    def test_oracle_values(self):
        for T, ref in ORACLE_S.items():
            assert_close(s_of_T(T), ref, 1e-8, f"S({T})")

    def test_against_mpmath_independent(self):
        # independent oracle: S(T) = nzeros(T) - 1 - siegeltheta(T)/pi
        mpmath = mp()
        mpmath.mp.dps = 20
        for T in (33.0, 77.7, 250.3):
            ref = float(mpmath.nzeros(T) - 1 - mpmath.siegeltheta(T) / mpmath.pi)
            assert_close(s_of_T(T), ref, 1e-8, f"S({T})")

    def test_below_support(self):
        with pytest.raises(DomainError):
            s_of_T(2.0)

    def test_counting_terms_near_integer(self):
        ct = counting_terms(55.5)
        assert abs(ct.n_estimate - round(ct.n_estimate)) < 0.5
        assert ct.o_term_bound == pytest.approx(1 / 55.5)

    def test_round_consistency_named_heights(self, table_2000):
        for T in (50.0, 100.0, 500.0, 1000.0):
            assert round(n_main(T) + s_of_T(T)) == table_2000.count_upto(T)

    def test_inversion_identity(self, table_400):
        # round(n_main + S) equals the certified count away from ordinates
        rng = np.random.default_rng(11)
        ords = table_400.ordinates
        for T in rng.uniform(20.0, 399.0, size=12):
            if np.min(np.abs(ords - T)) < 1e-3:
                continue
            n_est = n_main(float(T)) + s_of_T(float(T))
            assert round(n_est) == table_400.count_upto(float(T))

    def test_no_integer_crossing_between_ordinates(self, table_400):
        # between consecutive ordinates the estimate stays on one integer
        ords = table_400.ordinates
        for i in (10, 50, 120):
            a, b = ords[i], ords[i + 1]
            counts = {round(n_main(float(t)) + s_of_T(float(t)))
                      for t in np.linspace(a + 1e-4, b - 1e-4, 5)}
            assert len(counts) == 1


class TestSBounds:
    def test_trudgian_rhs_at_e(self):
        assert trudgian_rhs(math.e) == pytest.approx(0.112 + 2.510, abs=1e-12)

    def test_holds_at_1000(self):
        checks = check_S_bounds(1000.0, assume_rh=False)
        main = [c for c in checks if c.bound_id == "2.3"][0]
        assert main.verdict == HOLDS
        assert main.margin > 2.0

    def test_holds_at_e(self):
        main = [c for c in check_S_bounds(math.e) if c.bound_id == "2.3"][0]
        assert main.verdict == HOLDS
        assert main.rhs == pytest.approx(2.622, abs=1e-12)

    def test_log_spaced_sweep(self):
        for T in np.geomspace(math.e, 2000.0, 60):
            main = [c for c in check_S_bounds(float(T)) if c.bound_id == "2.3"][0]
            assert main.verdict == HOLDS, T

    def test_rh_entries_gated(self):
        without = {c.bound_id for c in check_S_bounds(1000.0, assume_rh=False)}
        with_rh = {c.bound_id for c in check_S_bounds(1000.0, assume_rh=True)}
        assert "2.2" not in without
        assert {"2.2", "2.2-GG", "1.4-RH"} <= with_rh

    def test_ratio_report_below_quarter(self):
        # |S| loglog/log is far under 1/4 at moderate heights
        c22 = [c for c in check_S_bounds(10000.0, assume_rh=True)
               if c.bound_id == "2.2"][0]
        assert c22.verdict == REPORT_ONLY
        assert c22.lhs < 0.25

    def test_all_report_entries_have_values(self):
        for c in check_S_bounds(500.0, assume_rh=True):
            assert math.isfinite(c.lhs)
            assert c.verdict in (HOLDS, REPORT_ONLY)
