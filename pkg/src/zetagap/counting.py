"""The zero-counting formula N(T) = n_main(T) + S(T) + O(1/T) and checks on
the argument function S(T).

S(T) is (1/pi) times the argument of zeta at 1/2 + iT obtained by continuous
variation along 2 -> 2 + iT -> 1/2 + iT.  On the vertical segment
|zeta(2+iy) - 1| <= zeta(2) - 1 < 0.645, so the argument never leaves
(-pi/2, pi/2) and the principal value at the corner is already the tracked
value; only the horizontal segment needs stepping.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, StepCollapseError
from .zeta import zeta_general

__all__ = [
    "CountingTerms",
    "BoundCheck",
    "n_main",
    "s_of_T",
    "counting_terms",
    "check_S_bounds",
    "trudgian_rhs",
    "S_SUPPORT_MIN",
]

TWO_PI = 2.0 * math.pi
S_SUPPORT_MIN = math.e        # (2.3)-style checks start at T = e
_H_STEP0 = 0.05               # initial step on the horizontal segment
_H_STEP_MIN = 1e-12

HOLDS = "holds"
FAILS = "fails"
REPORT_ONLY = "report_only"


@dataclass(frozen=True)
class BoundCheck:
    """One inequality instantiated at height T.

    verdict is 'holds'/'fails' for explicit finite-T bounds and
    'report_only' for asymptotic statements whose constants the source
    leaves unquantified; report entries carry the interesting ratio in lhs
    (and rhs when a natural comparison value exists).
    """

    bound_id: str
    T: float
    lhs: float
    rhs: float | None
    verdict: str
    params: dict = field(default_factory=dict)

    @property
    def margin(self) -> float | None:
        if self.rhs is None:
            return None
        return self.rhs - self.lhs

    @staticmethod
    def decide(bound_id: str, T: float, lhs: float, rhs: float,
               **params) -> "BoundCheck":
        verdict = HOLDS if lhs <= rhs else FAILS
        return BoundCheck(bound_id, T, lhs, rhs, verdict, params)

    @staticmethod
    def report(bound_id: str, T: float, lhs: float, rhs: float | None = None,
               **params) -> "BoundCheck":
        return BoundCheck(bound_id, T, lhs, rhs, REPORT_ONLY, params)


@dataclass(frozen=True)
class CountingTerms:
    T: float
    main_term: float
    s_value: float
    n_estimate: float
    o_term_bound: float


def n_main(T: float) -> float:
    """Smooth part (T/2pi) log(T/2pi) - T/2pi + 7/8 of the counting formula."""
    if not T > 0:
        raise DomainError(f"n_main requires T > 0, got {T}")
    x = T / TWO_PI
    return x * math.log(x) - x + 0.875


def _arg_step(sigma_hi: float, sigma_lo: float, w_hi: complex,
              T: float) -> tuple[float, complex]:
    """Accumulated argument change walking sigma_hi -> sigma_lo at height T."""
    total = 0.0
    sigma = sigma_hi
    w = w_hi
    step = _H_STEP0
    while sigma > sigma_lo + 1e-15:
        step = min(step, sigma - sigma_lo)
        while True:
            nxt = sigma - step
            w_next = zeta_general(max(nxt, sigma_lo), T).value
            if w_next == 0:
                raise StepCollapseError(f"zeta vanished on path at T = {T!r}")
            delta = cmath.phase(w_next / w)
            if abs(delta) <= 0.5 * math.pi:
                break
            step *= 0.5
            if step < _H_STEP_MIN:
                raise StepCollapseError(
                    f"argument step collapsed below {_H_STEP_MIN:g} at T = {T!r}")
        total += delta
        sigma = nxt
        w = w_next
        step = min(_H_STEP0, step * 2.0)
    return total, w


def s_of_T(T: float) -> float:
    """S(T) = (1/pi) arg zeta(1/2 + iT) by continuous variation.

    Supported for T >= e.  If T sits numerically on an ordinate the path is
    retried at T + 1e-9 once, matching the right-limit convention
    S(T) = S(T+0).
    """
    if T < S_SUPPORT_MIN:
        raise DomainError(f"s_of_T requires T >= e, got {T}")
    try:
        return _s_of_T_once(T)
    except StepCollapseError:
        return _s_of_T_once(T + 1e-9)


def _s_of_T_once(T: float) -> float:
    corner = zeta_general(2.0, T).value
    arg0 = cmath.phase(corner)        # principal == tracked on the vertical leg
    horiz, _ = _arg_step(2.0, 0.5, corner, T)
    return (arg0 + horiz) / math.pi


def counting_terms(T: float) -> CountingTerms:
    main = n_main(T)
    s = s_of_T(T)
    return CountingTerms(T=T, main_term=main, s_value=s,
                         n_estimate=main + s, o_term_bound=1.0 / T)


def trudgian_rhs(T: float) -> float:
    """0.112 log T + 0.278 log log T + 2.510, valid for T >= e."""
    if T < math.e:
        raise DomainError("Trudgian bound needs T >= e")
    return 0.112 * math.log(T) + 0.278 * math.log(math.log(T)) + 2.510


def check_S_bounds(T: float, assume_rh: bool = False,
                   s_value: float | None = None) -> list[BoundCheck]:
    """Every explicit or reported bound on |S(T)| at a single height.

    Verdict-bearing: the unconditional Trudgian bound.  Everything with an
    o(1) or an unquantified <<-constant is emitted report_only carrying the
    relevant ratio; RH-conditional entries appear only when assume_rh.
    """
    if T < S_SUPPORT_MIN:
        raise DomainError(f"check_S_bounds requires T >= e, got {T}")
    s = s_of_T(T) if s_value is None else s_value
    abs_s = abs(s)
    log_t = math.log(T)
    checks = [BoundCheck.decide("2.3", T, abs_s, trudgian_rhs(T), s_value=s)]
    checks.append(BoundCheck.report("1.4", T, abs_s / log_t, None,
                                    s_value=s, form="S(T) << log T"))
    if T > math.e:
        loglog = math.log(log_t)
        if loglog > 0:
            checks.append(BoundCheck.report(
                "1.4-LH", T, abs_s / log_t, None,
                form="S(T) = o(log T) on LH; same ratio, expect decay"))
            if assume_rh:
                ratio = abs_s * loglog / log_t
                checks.append(BoundCheck.report(
                    "1.4-RH", T, ratio, None,
                    form="S(T) << log T / log log T on RH"))
                checks.append(BoundCheck.report(
                    "2.2", T, ratio, 0.25,
                    form="|S| <= (1/4 + o(1)) log T / log log T on RH"))
                checks.append(BoundCheck.report(
                    "2.2-GG", T, ratio, 0.5,
                    form="Goldston-Gonek constant 1/2 + o(1)"))
                if log_t > math.e:
                    # implied constant of the refined O(logloglog/loglog) form
                    lll = math.log(loglog) if loglog > 1 else None
                    if lll and lll > 0:
                        implied = (ratio - 0.25) * loglog / lll
                        checks.append(BoundCheck.report(
                            "2.2-refined", T, implied, None,
                            form="implied constant in O(logloglog T/loglog T)"))
    return checks
