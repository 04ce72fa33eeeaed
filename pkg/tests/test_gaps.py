"""Gap statistics and their explicit bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ORACLE_ZEROS_30, assert_close
from zetagap.counting import FAILS, HOLDS, REPORT_ONLY, TWO_PI
from zetagap.errors import DomainError, UncertifiedRangeError
from zetagap.gaps import (count_large_gaps, extremes, extremes_checks,
                          fujii_window, gaps, large_gap_checks,
                          moment_bound_checks, moment_sum, reciprocal_checks,
                          reciprocal_sum, telescoping_check)
from zetagap.zeros import ZeroRecord, ZeroTable

FIRST_GAP = ORACLE_ZEROS_30[1] - ORACLE_ZEROS_30[0]   # 6.887314497...


@pytest.fixture(scope="module")
def two_zero_table():
    recs = [ZeroRecord(1, ORACLE_ZEROS_30[0], 1e-9),
            ZeroRecord(2, ORACLE_ZEROS_30[1], 1e-9)]
    t = ZeroTable(records=recs)
    t.t_cert = 20.0     # hand-certified: N(20) = 1 and both zeros are real
    return t


class TestGapSequence:
    def test_first_gap(self, table_400):
        g = gaps(table_400, 20.0)
        assert_close(g.gaps[0], FIRST_GAP, 1e-6, "first gap")

    def test_telescoping(self, table_400):
        g = gaps(table_400, 350.0)
        n = len(g)
        direct = table_400.ordinates[n] - table_400.ordinates[0]
        assert abs(g.telescoped_sum() - direct) <= 1e-6 * n

    def test_straddling_pair_included(self, table_400):
        # the pair at the last gamma_n <= T is present even though its
        # partner exceeds T
        T = float(table_400.ordinates[10]) + 1e-6
        g = gaps(table_400, T)
        assert len(g) == 11

    def test_two_record_table(self, two_zero_table):
        g = gaps(two_zero_table, 20.0)
        assert len(g) == 1

    def test_uncertified_range(self, table_400):
        with pytest.raises(UncertifiedRangeError):
            gaps(table_400, 10_000.0)

    def test_normalized_definition(self, table_400):
        g = gaps(table_400, 100.0)
        n = 3
        expected = g.gaps[n] * math.log(table_400.ordinates[n] / TWO_PI) / TWO_PI
        assert g.normalized[n] == expected


class TestMoments:
    def test_k0_is_count(self, table_400):
        rep = moment_sum(table_400, 0.0, 350.0)
        assert rep.s_k == table_400.count_upto(350.0)
        assert rep.normalized_ratio == 1.0

    def test_k1_telescopes(self, table_400):
        rep = moment_sum(table_400, 1.0, 350.0, with_prediction=False)
        gamma_1 = table_400.ordinates[0]
        max_gap = float(np.diff(table_400.ordinates).max())
        assert abs(rep.s_k - 350.0) <= gamma_1 + max_gap + 1.0

    def test_k2_under_conditional_bound(self, table_400):
        rep = moment_sum(table_400, 2.0, 350.0, with_prediction=False)
        assert rep.s_k <= 9.0 * TWO_PI * 350.0 / math.log(350.0 / TWO_PI)

    def test_negative_k(self, table_400):
        rep = moment_sum(table_400, -1.0, 350.0)
        rec = reciprocal_sum(table_400, 350.0)
        assert rep.s_k == rec.h_value
        assert rep.gue_prediction is None

    def test_continuity_in_k(self, table_400):
        eps = 1e-6
        base = moment_sum(table_400, 2.0, 350.0, with_prediction=False).s_k
        up = moment_sum(table_400, 2.0 + eps, 350.0, with_prediction=False).s_k
        assert abs(math.log(up) - math.log(base)) <= 1e-4


class TestFujiiWindow:
    def test_k0_exact(self, table_400):
        assert fujii_window(table_400, 0.0, 350.0) == (1.0, 1.0)

    def test_k1_near_2pi(self, table_400):
        lo, hi = fujii_window(table_400, 1.0, 350.0)
        # S_1 log T' / N ~ 2pi log T'/log(T'/2pi): above 2pi, inflated at the
        # smallest sub-heights by the gamma_1 offset in the telescoped sum
        assert TWO_PI * 0.9 < lo <= hi < TWO_PI * 3.0

    def test_k2_window_against_gue_prediction(self, table_2000):
        # the sub-height envelope tracks the GUE second-moment constant: the
        # lower end sits within 20% of the prediction at T itself, while the
        # upper end (smallest sub-height) overshoots at desk heights
        from zetagap.gue import predicted_moment
        T = 2000.0
        lo, hi = fujii_window(table_2000, 2.0, T)
        n_of_t = float(table_2000.count_upto(T))
        pred = predicted_moment(2.0, T, n_of_t=n_of_t)
        ratio = pred.predicted_s_k * math.log(T) ** 2 / n_of_t
        assert lo <= 1.2 * ratio
        assert hi >= 0.8 * ratio

    def test_k0_count_at_1000(self, table_2000):
        rep = moment_sum(table_2000, 0.0, 1000.0, with_prediction=False,
                         window_samples=0)
        assert rep.s_k == 649

    def test_mu_lambda_at_2000(self, table_2000):
        proxy, _ = extremes(table_2000, 2000.0)
        assert proxy.mu_emp < 1.0 < proxy.lambda_emp

    def test_window_orders(self, table_400):
        lo, hi = fujii_window(table_400, 2.0, 350.0)
        assert lo <= hi

    def test_negative_k_rejected(self, table_400):
        with pytest.raises(DomainError):
            fujii_window(table_400, -0.5, 350.0)


class TestLargeGaps:
    def test_tiny_threshold_counts_everything(self, table_400):
        lg = count_large_gaps(table_400, 1e-12, 350.0)
        assert lg.count == table_400.count_upto(350.0)

    def test_monotone_weakly_decreasing(self, table_400):
        counts = [count_large_gaps(table_400, c, 350.0).count
                  for c in (0.5, 1.0, 2.0, math.pi, 2 * math.pi, 10.0)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.01, max_value=20.0),
           st.floats(min_value=0.01, max_value=20.0))
    def test_monotone_property(self, table_2000, c1_val, c2_val):
        lo, hi = sorted((c1_val, c2_val))
        assert count_large_gaps(table_2000, lo, 2000.0).count >= \
            count_large_gaps(table_2000, hi, 2000.0).count

    def test_above_max_gap_empty(self, table_400):
        g = gaps(table_400, 350.0)
        lam = float(g.gaps.max()) * math.log(350.0 / TWO_PI) * 1.01
        assert count_large_gaps(table_400, lam, 350.0).count == 0

    def test_5_1_explicit(self, table_400):
        n = table_400.count_upto(350.0)
        for C in (1.0, math.pi, TWO_PI, 2 * TWO_PI):
            lg = count_large_gaps(table_400, C, 350.0)
            assert lg.count <= lg.upper_bounds["eq_5_1"]
            assert lg.upper_bounds["eq_5_1"] >= (TWO_PI / C) * n

    def test_4_9_holds_in_range(self, table_400):
        for C in (1.0, math.pi, 5.0):
            lg = count_large_gaps(table_400, C, 350.0)
            assert lg.count >= lg.lower_bounds["eq_4_9"]

    def test_precondition(self, table_400):
        with pytest.raises(DomainError):
            count_large_gaps(table_400, -1.0, 350.0)
        with pytest.raises(DomainError):
            count_large_gaps(table_400, 1.0, 10.0)


class TestReciprocal:
    def test_two_zero_table(self, two_zero_table):
        rep = reciprocal_sum(two_zero_table, 20.0)
        assert_close(rep.h_value, 1.0 / FIRST_GAP, 1e-9, "H")
        assert rep.r_value == 1

    def test_reciprocal_bound_chain(self, table_400):
        rep = reciprocal_sum(table_400, 350.0)
        log_x = math.log(350.0 / TWO_PI)
        assert rep.r_value <= table_400.count_upto(350.0)
        max_gap = float(np.diff(table_400.ordinates[:rep.r_value + 1]).max())
        assert rep.h_value >= rep.r_value / max_gap   # crude sanity floor
        assert rep.h_value >= rep.bound_6_4
        assert rep.max_reciprocal >= 2.0 * log_x / (25.0 * math.pi)
        assert rep.min_gap <= 25.0 * math.pi / (2.0 * log_x)

    def test_requires_verified_ordinates(self, table_400, tmp_path):
        from zetagap.store import TableSource, export_table, import_zeros
        path = tmp_path / "t.csv"
        export_table(table_400, path)
        text = path.read_text().replace(",computed,true", ",imported,false")
        path.write_text(text)
        imported = import_zeros(TableSource("local_file", str(path), "internal_csv"))
        with pytest.raises(DomainError):
            reciprocal_sum(imported, 350.0)


class TestExtremes:
    def test_max_gap_at_100_is_first_gap(self, table_400):
        _, ext = extremes(table_400, 100.0)
        assert_close(ext.max_gap, FIRST_GAP, 1e-6, "max gap")
        assert ext.argmax_index == 1

    def test_mu_lambda_straddle_one(self, table_400):
        proxy, _ = extremes(table_400, 350.0)
        assert proxy.mu_emp < 1.0 < proxy.lambda_emp

    def test_min_height(self, table_400):
        with pytest.raises(DomainError):
            extremes(table_400, 50.0)

    def test_weak_max_gap_bound(self, table_400):
        checks = extremes_checks(table_400, 350.0)
        weak = [c for c in checks if c.bound_id == "2.6-weak"][0]
        assert weak.verdict == HOLDS
        assert weak.lhs == pytest.approx(TWO_PI / math.log(350.0 / TWO_PI))

    def test_explicit_gap_report_only_by_default(self, table_400):
        checks = extremes_checks(table_400, 350.0)
        c24 = [c for c in checks if c.bound_id == "2.4"][0]
        assert c24.verdict == REPORT_ONLY

    def test_explicit_gap_verdict_when_requested(self, table_2000):
        checks = extremes_checks(table_2000, 2000.0,
                                 explicit_gap_min_height=1000.0)
        c24 = [c for c in checks if c.bound_id == "2.4"][0]
        assert c24.verdict in (HOLDS, FAILS)
        # measured gaps above 1000 exceed 1.414 well before T = 2000
        assert c24.verdict == FAILS

    def test_asymptotic_reports_present(self, table_400):
        ids = {c.bound_id for c in extremes_checks(table_400, 350.0)}
        assert {"2.6", "1.6", "1.7", "2.1", "2.7", "2.8"} <= ids


class TestCheckAssemblies:
    def test_telescoping_check_holds(self, table_400):
        assert telescoping_check(table_400, 350.0).verdict == HOLDS

    def test_moment_checks(self, table_400):
        checks = moment_bound_checks(table_400, 350.0, assume_rh=True)
        c48 = [c for c in checks if c.bound_id == "4.8"][0]
        assert c48.verdict == HOLDS
        assert all(c.verdict == REPORT_ONLY for c in checks
                   if c.bound_id == "3.1")

    def test_reciprocal_checks_hold(self, table_400):
        for c in reciprocal_checks(table_400, 350.0):
            assert c.verdict == HOLDS, c

    def test_large_gap_checks_hold(self, table_400):
        for C in (1.0, math.pi, TWO_PI, 2 * TWO_PI):
            for c in large_gap_checks(table_400, C, 350.0, assume_rh=True,
                                      gue_c1_2=1.18, gue_c1_4=2.33):
                assert c.verdict in (HOLDS, REPORT_ONLY), c
        ids = {c.bound_id for c in large_gap_checks(
            table_400, math.pi, 350.0, True, 1.18, 2.33)}
        assert {"5.1", "4.9", "4.1", "4.3", "5.2", "5.3"} <= ids
