"""Zero location, refinement, and count certification."""

import numpy as np
import pytest

from conftest import (ORACLE_COUNTS, ORACLE_G0, ORACLE_G1, ORACLE_ZEROS_30,
                      assert_close)
from zetagap.errors import CertificationError, DomainError
from zetagap.zeros import (Bracket, ZeroRecord, ZeroTable, build_table,
                           gram_point, gram_points, refine_zero, scan_zeros,
                           scan_zeros_chunked, turing_certify)


class TestGramPoints:
    def test_g0(self):
        assert_close(gram_point(0), ORACLE_G0, 1e-8, "g0")

    def test_g1(self):
        assert_close(gram_point(1), ORACLE_G1, 1e-8, "g1")

    def test_monotone(self):
        ns = np.arange(-1, 10_001)
        pts = gram_points(ns)
        assert np.all(np.diff(pts) > 0)

    def test_residual_contract(self):
        import math
        from zetagap.zeta import theta
        for n in (-1, 0, 17, 5000):
            assert abs(theta(gram_point(n)) - n * math.pi) <= 1e-9

    def test_below_minus_one_rejected(self):
        with pytest.raises(DomainError):
            gram_point(-2)


class TestScan:
    def test_first_zero_bracketed(self):
        brs = scan_zeros(14.0, 15.0)
        assert len(brs) == 1
        assert brs[0].lo <= ORACLE_ZEROS_30[0] <= brs[0].hi

    def test_empty_window(self):
        # nearest zeros are 98.83 and 101.32
        assert scan_zeros(100.0, 100.5) == []

    def test_degenerate_window(self):
        assert scan_zeros(50.0, 50.0) == []

    def test_brackets_disjoint_ordered(self):
        brs = scan_zeros(10.0, 120.0)
        assert len(brs) == 38  # N(120) = 38
        for a, b in zip(brs[:-1], brs[1:]):
            assert a.hi <= b.lo

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            scan_zeros(5.0, 50.0)


class TestRefine:
    def test_first_zero(self):
        rec = refine_zero(Bracket(14.0, 15.0, -1, 1), tol=1e-9)
        assert_close(rec.ordinate, ORACLE_ZEROS_30[0], 2e-9, "gamma_1")
        assert rec.err_radius <= 1e-9
        assert rec.sign_change_verified

    def test_second_zero(self):
        brs = scan_zeros(21.0, 21.1)
        rec = refine_zero(brs[0], tol=1e-9)
        assert_close(rec.ordinate, ORACLE_ZEROS_30[1], 2e-9, "gamma_2")

    def test_tolerance_monotone(self):
        br = Bracket(14.0, 15.0, -1, 1)
        radii = [refine_zero(br, tol).err_radius for tol in (1e-6, 1e-7, 1e-8)]
        assert radii[0] <= 1e-6 and radii[1] <= 1e-7 and radii[2] <= 1e-8

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            refine_zero(Bracket(14.0, 15.0, -1, 1), tol=1e-13)

    def test_invalid_bracket(self):
        with pytest.raises(DomainError):
            Bracket(15.0, 14.0, 1, -1)
        with pytest.raises(DomainError):
            Bracket(14.0, 15.0, 1, 1)


class TestTable:
    def test_records_validated(self):
        r1 = ZeroRecord(1, 14.134725, 1e-9)
        r2 = ZeroRecord(2, 21.022040, 1e-9)
        ZeroTable(records=[r1, r2])
        with pytest.raises(DomainError):
            ZeroTable(records=[r2, r1])

    def test_overlap_rejected(self):
        r1 = ZeroRecord(1, 14.134725, 1e-3)
        r2 = ZeroRecord(2, 14.135, 1e-3)
        with pytest.raises(DomainError):
            ZeroTable(records=[r1, r2])

    def test_first_30_match_oracle(self, first_30):
        for rec, ref in zip(first_30, ORACLE_ZEROS_30):
            assert abs(rec.ordinate - ref) <= 1e-8

    def test_simplicity_witness(self, table_400):
        # every computed record is certified by a sign change: on the line,
        # odd order, and at refinement resolution a single flip
        assert all(r.sign_change_verified for r in table_400.records)
        assert all(r.source == "computed" for r in table_400.records)


class TestCertification:
    def test_t50(self, table_400):
        rep = turing_certify(table_400, 50.0)
        assert rep.n_located == ORACLE_COUNTS[50]
        assert rep.discrepancy == 0

    def test_t100(self, table_400):
        rep = turing_certify(table_400, 100.0)
        assert rep.n_located == ORACLE_COUNTS[100]
        assert rep.discrepancy == 0

    def test_below_first_zero(self, table_400):
        rep = turing_certify(table_400, 10.0)
        assert rep.n_located == 0
        assert rep.discrepancy == 0

    def test_every_sample_height(self, table_400):
        # completeness: located == round(n_main + S) at many interior heights
        rng = np.random.default_rng(4)
        for T in rng.uniform(15.0, 399.0, size=24):
            rep = turing_certify(table_400, float(T))
            assert rep.discrepancy == 0, T
            assert abs(rep.n_formula_raw - rep.n_formula) < 0.5

    def test_missing_zero_detected(self, table_400):
        broken = [r for r in table_400.records if r.index != 100]
        from dataclasses import replace
        renumbered = [replace(r, index=i + 1) for i, r in enumerate(broken)]
        table = ZeroTable(records=renumbered)
        with pytest.raises(CertificationError) as exc_info:
            turing_certify(table, 300.0)
        window = exc_info.value.window
        assert window is not None
        # zero #100 sits at 236.52; the first divergence window must cover it
        assert window[0] <= 237.0 and exc_info.value.discrepancy == -1

    def test_requires_coverage(self, table_400):
        with pytest.raises(DomainError):
            turing_certify(table_400, 500.0)


class TestDeterminism:
    def test_partitioned_scan_identical(self):
        whole = scan_zeros(10.0, 250.0)
        parts = scan_zeros_chunked(10.0, 250.0, 3)
        assert len(whole) == len(parts)
        t_whole = build_table(whole)
        t_parts = build_table(parts)
        for a, b in zip(t_whole.records, t_parts.records):
            assert a == b  # bit-for-bit, including err_radius

    def test_rerun_identical(self):
        a = build_table(scan_zeros(10.0, 120.0))
        b = build_table(scan_zeros(10.0, 120.0))
        assert a.records == b.records
