"""Gap statistics over a certified zero table: moment sums S_k(T), normalized
spacings, large-gap counts, reciprocal-gap sums, extreme gaps, and the
explicit inequalities they satisfy.

Summation convention: a pair (gamma_n, gamma_{n+1}) belongs to height T when
gamma_n <= T, even if gamma_{n+1} > T, exactly as the summation condition
0 < gamma_n <= T dictates.  Sums are accumulated with math.fsum so chunked
and whole-range computations agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counting import TWO_PI, BoundCheck
from .errors import DomainError, UncertifiedRangeError
from .zeros import ZeroTable

__all__ = [
    "GapSequence",
    "MomentReport",
    "LargeGapCount",
    "ReciprocalReport",
    "MuLambdaProxy",
    "GapExtremes",
    "gaps",
    "moment_sum",
    "count_large_gaps",
    "reciprocal_sum",
    "extremes",
    "fujii_window",
    "telescoping_check",
    "moment_bound_checks",
    "large_gap_checks",
    "reciprocal_checks",
    "extremes_checks",
]

MAX_GAP_EXPLICIT = 1.414      # the unconditional explicit gap bound (onset height unknown)


@dataclass(frozen=True)
class GapSequence:
    table: ZeroTable
    T: float
    n_index: np.ndarray          # 1-based index n of each pair
    gaps: np.ndarray             # d_n = gamma_{n+1} - gamma_n
    normalized: np.ndarray       # delta_n = d_n log(gamma_n/2pi) / 2pi

    def __len__(self):
        return self.gaps.size

    def telescoped_sum(self) -> float:
        return math.fsum(self.gaps.tolist())


@dataclass(frozen=True)
class MomentReport:
    k: float
    T: float
    s_k: float
    normalized_ratio: float          # S_k(T) (log T)^k / N(T)
    gue_prediction: float | None
    fujii_window: tuple[float, float] | None


@dataclass(frozen=True)
class LargeGapCount:
    C: float
    T: float
    threshold: float
    count: int
    lower_bounds: dict = field(default_factory=dict)
    upper_bounds: dict = field(default_factory=dict)
    eq_5_2_by_k: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ReciprocalReport:
    T: float
    h_value: float
    r_value: int
    bound_6_4: float
    max_reciprocal: float
    min_gap: float


@dataclass(frozen=True)
class MuLambdaProxy:
    T: float
    mu_emp: float
    lambda_emp: float
    argmin_index: int
    argmax_index: int


@dataclass(frozen=True)
class GapExtremes:
    T: float
    max_gap: float
    min_gap: float
    argmax_index: int
    argmin_index: int


def _require_certified(table: ZeroTable, T: float):
    if T > table.t_cert:
        raise UncertifiedRangeError(
            f"T = {T:g} above certified height {table.t_cert:g}")


def gaps(table: ZeroTable, T: float) -> GapSequence:
    """Consecutive differences d_n and normalized spacings delta_n up to T."""
    _require_certified(table, T)
    if len(table) < 2:
        raise DomainError("gap sequence needs at least two records")
    ords = table.ordinates
    n_pairs = int(np.searchsorted(ords, T, side="right"))
    n_pairs = min(n_pairs, ords.size - 1)
    if n_pairs < 1:
        raise DomainError(f"no zero pairs below T = {T:g}")
    d = np.diff(ords[:n_pairs + 1])
    first_index = table.records[0].index
    idx = np.arange(first_index, first_index + n_pairs)
    delta = d * np.log(ords[:n_pairs] / TWO_PI) / TWO_PI
    return GapSequence(table=table, T=T, n_index=idx, gaps=d, normalized=delta)


def moment_sum(table: ZeroTable, k: float, T: float,
               with_prediction: bool = True,
               window_samples: int = 20) -> MomentReport:
    """S_k(T) = sum of d_n^k over gamma_n <= T, with the GUE prediction and
    the empirical Fujii window alongside.  k = 0 returns exactly N(T)."""
    g = gaps(table, T)
    if k == 0:
        s_k = float(len(g))
    else:
        s_k = math.fsum((g.gaps ** k).tolist())
    n_of_t = float(table.count_upto(T))
    ratio = s_k * math.log(T) ** k / n_of_t
    prediction = None
    if with_prediction and k >= 0 and T > TWO_PI * math.e ** 2:
        from . import gue  # deferred: keeps gap statistics importable alone
        prediction = gue.predicted_moment(k, T, n_of_t=n_of_t).predicted_s_k
    window = None
    if window_samples >= 2 and k > 0:
        window = fujii_window(table, k, T, window_samples)
    return MomentReport(k=k, T=T, s_k=s_k, normalized_ratio=ratio,
                        gue_prediction=prediction, fujii_window=window)


def fujii_window(table: ZeroTable, k: float, T: float,
                 samples: int = 20) -> tuple[float, float]:
    """Empirical envelope (min, max) of S_k(T') (log T')^k / N(T') over
    log-spaced sub-heights T' in [T/10, T]; stands in for the two-sided
    moment constants whose exact values are not published.  k = 0 gives
    (1, 1) exactly since S_0 = N."""
    if k < 0:
        raise DomainError("fujii_window requires k >= 0")
    if samples < 2:
        raise DomainError("fujii_window requires samples >= 2")
    _require_certified(table, T)
    if k == 0:
        return (1.0, 1.0)
    ords = table.ordinates
    lo = max(T / 10.0, ords[1] + 1.0)
    heights = np.geomspace(lo, T, samples)
    d_all = np.diff(ords)
    powers = d_all ** k
    csum = np.cumsum(powers)
    ratios = []
    for Tp in heights:
        n_pairs = min(int(np.searchsorted(ords, Tp, side="right")), d_all.size)
        if n_pairs < 1:
            continue
        s_k = float(csum[n_pairs - 1])
        ratios.append(s_k * math.log(Tp) ** k / n_pairs)
    return (min(ratios), max(ratios))


def count_large_gaps(table: ZeroTable, C: float, T: float,
                     window_samples: int = 20) -> LargeGapCount:
    """Count of n with gamma_n <= T and d_n > C / log(T/2pi), with every
    bound the count satisfies (explicit ones instantiated, shapes reported)."""
    if not C > 0:
        raise DomainError("C must be positive")
    if not T > TWO_PI * math.e:
        raise DomainError("count_large_gaps requires T > 2 pi e")
    g = gaps(table, T)
    log_x = math.log(T / TWO_PI)
    threshold = C / log_x
    count = int(np.count_nonzero(g.gaps > threshold))
    n_of_t = float(table.count_upto(T))

    ext = _gap_extremes(g)
    gamma_1 = table.ordinates[0]
    window_term = gamma_1 + ext.max_gap + 1.0

    lower = {}
    # RH route: telescoping + the conditional second-moment bound
    lower["eq_4_9"] = (T * log_x / (18.0 * math.pi)) * (1.0 - C / TWO_PI) ** 2 \
        if C < TWO_PI else 0.0
    # empirical-constant form of the unconditional lower bound
    c1_2 = fujii_window(table, 2.0, T, window_samples)[0]
    c2_4 = fujii_window(table, 4.0, T, window_samples)[1]
    lower["eq_4_1"] = ((c1_2 - C * C) ** 2 / c2_4) * n_of_t \
        if C < math.sqrt(c1_2) else 0.0

    upper = {}
    upper["eq_5_1"] = (TWO_PI / C) * n_of_t + window_term * log_x / C
    by_k = {}
    for k in (1, 2, 3, 4):
        c2_k = fujii_window(table, float(k), T, window_samples)[1]
        by_k[k] = c2_k / C ** k * n_of_t
    upper["eq_5_2"] = min(by_k.values())
    # exp(-A C) shape: only the implied decay constant is reportable
    upper["eq_5_3_shape"] = (math.log(n_of_t / count) / C) if count > 0 else math.inf

    return LargeGapCount(C=C, T=T, threshold=threshold, count=count,
                         lower_bounds=lower, upper_bounds=upper,
                         eq_5_2_by_k=by_k)


def reciprocal_sum(table: ZeroTable, T: float) -> ReciprocalReport:
    """H(T) = sum of 1/d_n over on-line ordinates t_n <= T, R(T) its length."""
    _require_certified(table, T)
    if not all(r.sign_change_verified for r in table.records):
        raise DomainError(
            "reciprocal_sum needs sign-change-verified (on-line) ordinates")
    g = gaps(table, T)
    h_value = math.fsum((1.0 / g.gaps).tolist())
    log_x = math.log(T / TWO_PI)
    return ReciprocalReport(
        T=T,
        h_value=h_value,
        r_value=len(g),
        bound_6_4=T * log_x ** 2 / (25.0 * math.pi ** 2),
        max_reciprocal=float((1.0 / g.gaps).max()),
        min_gap=float(g.gaps.min()),
    )


def _gap_extremes(g: GapSequence) -> GapExtremes:
    i_max = int(np.argmax(g.gaps))
    i_min = int(np.argmin(g.gaps))
    return GapExtremes(T=g.T, max_gap=float(g.gaps[i_max]),
                       min_gap=float(g.gaps[i_min]),
                       argmax_index=int(g.n_index[i_max]),
                       argmin_index=int(g.n_index[i_min]))


def extremes(table: ZeroTable, T: float) -> tuple[MuLambdaProxy, GapExtremes]:
    """Finite-T proxies for the liminf/limsup of normalized gaps, plus the
    raw extreme gaps with their indices."""
    _require_certified(table, T)
    if T < 100:
        raise DomainError("extremes requires T >= 100")
    g = gaps(table, T)
    i_min = int(np.argmin(g.normalized))
    i_max = int(np.argmax(g.normalized))
    proxy = MuLambdaProxy(T=T, mu_emp=float(g.normalized[i_min]),
                          lambda_emp=float(g.normalized[i_max]),
                          argmin_index=int(g.n_index[i_min]),
                          argmax_index=int(g.n_index[i_max]))
    return proxy, _gap_extremes(g)


# ---------------------------------------------------------------------------
# bound checks

def telescoping_check(table: ZeroTable, T: float) -> BoundCheck:
    """|S_1(T) - T| <= gamma_1 + max_gap + 1: the telescoping identity
    S_1(T) = gamma_{N+1} - gamma_1 made explicit at finite T."""
    g = gaps(table, T)
    s1 = g.telescoped_sum()
    ext = _gap_extremes(g)
    window = table.ordinates[0] + ext.max_gap + 1.0
    return BoundCheck.decide("2.5-window", T, abs(s1 - T), window, s1=s1)


def moment_bound_checks(table: ZeroTable, T: float,
                        assume_rh: bool = True) -> list[BoundCheck]:
    """Second-moment bound (RH) and the lower-bound shape for S_k."""
    checks = []
    log_x = math.log(T / TWO_PI)
    if assume_rh:
        s2 = moment_sum(table, 2.0, T, with_prediction=False,
                        window_samples=0).s_k
        checks.append(BoundCheck.decide(
            "4.8", T, s2, 9.0 * TWO_PI * T / log_x, conditional="RH"))
    # lower-bound shape (2pi + o(1))^k with the finite-T log correction
    n_of_t = float(table.count_upto(T))
    eps_t = TWO_PI * n_of_t / (T * log_x) - 1.0
    for k in (1.0, 2.0, 3.0):
        rep = moment_sum(table, k, T, with_prediction=False, window_samples=0)
        checks.append(BoundCheck.report(
            "3.1", T, rep.normalized_ratio, (TWO_PI * (1.0 - eps_t)) ** k,
            k=k, eps_t=eps_t))
    return checks


def large_gap_checks(table: ZeroTable, C: float, T: float,
                     assume_rh: bool = True,
                     gue_c1_2: float | None = None,
                     gue_c1_4: float | None = None) -> list[BoundCheck]:
    """Checks attached to one large-gap count at (C, T)."""
    lg = count_large_gaps(table, C, T)
    n_of_t = float(table.count_upto(T))
    checks = [BoundCheck.decide("5.1", T, float(lg.count),
                                lg.upper_bounds["eq_5_1"], C=C)]
    if assume_rh and C < TWO_PI:
        checks.append(BoundCheck.decide(
            "4.9", T, lg.lower_bounds["eq_4_9"], float(lg.count),
            C=C, conditional="RH"))
    checks.append(BoundCheck.report("4.1", T, lg.lower_bounds["eq_4_1"],
                                    float(lg.count), C=C,
                                    form="(C1(2)-C^2)^2/C2(4) N(T), empirical constants"))
    if gue_c1_2 is not None and gue_c1_4 is not None:
        rhs = 0.0
        if C < TWO_PI * math.sqrt(gue_c1_2):
            rhs = ((TWO_PI ** 2 * gue_c1_2 - C * C) ** 2
                   / (TWO_PI ** 2 * gue_c1_4)) * n_of_t / (TWO_PI ** 2)
        checks.append(BoundCheck.report(
            "4.3", T, rhs, float(lg.count), C=C,
            form="GUE-constant lower bound vs measured count"))
    for k, bound in lg.eq_5_2_by_k.items():
        checks.append(BoundCheck.report("5.2", T, float(lg.count), bound,
                                        C=C, k=k))
    checks.append(BoundCheck.report(
        "5.3", T, lg.upper_bounds["eq_5_3_shape"], None, C=C,
        form="implied A in count <= N(T) exp(-A C)"))
    return checks


def reciprocal_checks(table: ZeroTable, T: float) -> list[BoundCheck]:
    """Reciprocal-gap sum bounds (all explicit, all unconditional)."""
    rep = reciprocal_sum(table, T)
    log_x = math.log(T / TWO_PI)
    return [
        BoundCheck.decide("6.4", T, rep.bound_6_4, rep.h_value, h_value=rep.h_value),
        BoundCheck.decide("6.5", T, 2.0 * log_x / (25.0 * math.pi),
                          rep.max_reciprocal),
        BoundCheck.decide("6.6", T, rep.min_gap, 25.0 * math.pi / (2.0 * log_x)),
    ]


def extremes_checks(table: ZeroTable, T: float,
                    explicit_gap_min_height: float | None = None) -> list[BoundCheck]:
    """Extreme-gap checks: the weakened explicit max-gap lower bound is
    verdict-bearing; every asymptotic form is reported with its ratio.

    The 1.414 gap bound holds only above an onset height nobody has made
    explicit; measured desk-scale gaps exceed it well past 1e4, so by
    default it is emitted report_only.  Passing explicit_gap_min_height
    turns it into a hard per-n check above that height.
    """
    _, ext = extremes(table, T)
    g = gaps(table, T)
    log_x = math.log(T / TWO_PI)
    checks = [BoundCheck.decide("2.6-weak", T, TWO_PI / log_x, ext.max_gap,
                                argmax_index=ext.argmax_index)]
    checks.append(BoundCheck.report(
        "2.6", T, ext.max_gap * log_x / TWO_PI, 1.0,
        form="max gap over (2pi/log(T/2pi)); 1 + o(1) expected"))

    if explicit_gap_min_height is None:
        above = g.gaps[g.table.ordinates[:len(g)] >= 1000.0]
        worst = float(above.max()) if above.size else 0.0
        checks.append(BoundCheck.report(
            "2.4", T, worst, MAX_GAP_EXPLICIT,
            form="max gap above height 1000; bound onset height "
                 "unknown and empirically above desk scale"))
    else:
        mask = g.table.ordinates[:len(g)] >= explicit_gap_min_height
        worst = float(g.gaps[mask].max()) if mask.any() else 0.0
        checks.append(BoundCheck.decide(
            "2.4", T, worst, MAX_GAP_EXPLICIT,
            min_height=explicit_gap_min_height))

    # asymptotic gap bounds: report the scaled quantities beside their constants
    start_ord = g.table.ordinates[:len(g)]
    lll = np.log(np.log(np.log(start_ord[start_ord > math.e ** math.e])))
    if lll.size:
        scaled = g.gaps[start_ord > math.e ** math.e] * lll
        checks.append(BoundCheck.report(
            "1.6", T, float(scaled.max()), math.pi / 2.0,
            form="max gap * logloglog(gamma_n); any A > pi/2 admissible"))
    ll = np.log(np.log(start_ord))
    scaled2 = g.gaps * ll
    checks.append(BoundCheck.report(
        "1.7", T, float(scaled2.max()), None,
        form="max gap * loglog(gamma_n) (RH: << 1)"))
    checks.append(BoundCheck.report(
        "2.1", T, float(scaled2.max()), math.pi / 2.0,
        form="max gap * loglog(gamma_n) vs pi/2 + o(1) (RH, asymptotic)"))
    checks.append(BoundCheck.report(
        "2.7", T, ext.max_gap, 8.0 / math.sqrt(2.0 * math.log(T)),
        form="measured max gap vs GUE prediction 8/sqrt(2 log T)"))
    checks.append(BoundCheck.report(
        "2.8", T, ext.max_gap, 1.0 / math.sqrt(math.log(T) * math.log(math.log(T))),
        form="measured max gap vs Dyson-Montgomery shape, implied constant 1"))
    return checks
