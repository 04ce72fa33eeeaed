"""Locating, refining and certifying zeros of Z(t).

Strategy: Gram points anchor the search (theta(g_n) = n*pi).  A Gram point
is "good" when (-1)^n Z(g_n) is positive beyond its error radius; between
consecutive good points lies a Gram block expected to hold exactly as many
zeros as it has Gram intervals (Rosser's rule, reliable far beyond the
heights we compute).  Blocks that show fewer sign changes than expected get
their grid subdivided x8 up to 4 levels, which resolves close pairs like
the one near t = 7005.  Anything still missing is caught afterwards by the
argument-principle count, never silently.

Scanning uses the cheap Riemann-Siegel route; final refinement switches to
Euler-Maclaurin so the default 1e-9 ordinate tolerance is certified by
sign changes that exceed the evaluation error radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import lambertw

from . import counting
from .errors import (CertificationError, ConvergenceError, DomainError,
                     PrecisionUnreachableError, ToleranceUnreachableError)
from .zeta import (SUPPORTED_HEIGHT, Method, Precision, hardy_Z,
                   hardy_z_batch, theta, theta_deriv)

__all__ = [
    "Bracket",
    "ZeroRecord",
    "ZeroTable",
    "CertificationReport",
    "gram_point",
    "gram_points",
    "scan_zeros",
    "scan_zeros_chunked",
    "refine_zero",
    "build_table",
    "turing_certify",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9      # far below the smallest desk-scale gap (~1e-2)
MIN_TOL = 1e-12
_SCAN_FLOOR = 10.0      # g_{-1} = 9.667 anchors everything below gamma_1
_SUBDIV_FACTOR = 8
_MAX_SUBDIV_LEVELS = 4
_BASE_GRID = 4          # subintervals per Gram interval before any refinement


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval: Z(lo) and Z(hi) have opposite signs."""

    lo: float
    hi: float
    sign_lo: int
    sign_hi: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.sign_lo == self.sign_hi or self.sign_lo not in (-1, 1) \
                or self.sign_hi not in (-1, 1):
            raise DomainError("bracket requires opposite signs +-1")


@dataclass(frozen=True)
class ZeroRecord:
    """One ordinate as midpoint + error radius."""

    index: int
    ordinate: float
    err_radius: float
    source: str = "computed"            # computed | imported
    sign_change_verified: bool = True

    def __post_init__(self):
        if self.index < 1:
            raise DomainError("index must be a positive integer")
        if not self.ordinate > 0:
            raise DomainError("ordinate must be positive")
        if self.source not in ("computed", "imported"):
            raise DomainError(f"unknown source {self.source!r}")


@dataclass
class ZeroTable:
    """Contiguous, ordinate-sorted zero list, certifiable up to t_cert."""

    records: list[ZeroRecord]
    t_cert: float = 0.0
    count_formula_check: int | None = None
    _ordinates: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        prev = None
        for rec in self.records:
            if prev is not None:
                if rec.ordinate <= prev.ordinate:
                    raise DomainError(
                        f"ordinates not strictly increasing at index {rec.index}")
                if rec.ordinate - prev.ordinate <= rec.err_radius + prev.err_radius:
                    # never observed for on-line simple zeros; a multiplicity-2
                    # record is deliberately not representable
                    raise DomainError(
                        f"overlapping error intervals at index {rec.index}")
                if rec.index != prev.index + 1:
                    raise DomainError("record indices must be contiguous")
            prev = rec

    @property
    def ordinates(self) -> np.ndarray:
        if self._ordinates is None or self._ordinates.size != len(self.records):
            self._ordinates = np.array([r.ordinate for r in self.records])
        return self._ordinates

    def count_upto(self, T: float) -> int:
        return int(np.searchsorted(self.ordinates, T, side="right"))

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class CertificationReport:
    T: float
    n_located: int
    n_formula: int
    n_formula_raw: float        # n_main(T) + S(T) before rounding
    discrepancy: int
    certified: bool


# ---------------------------------------------------------------------------
# Gram points

def _theta_vec(ts: np.ndarray) -> np.ndarray:
    from .zeta import _theta_any  # noqa: PLC0415 (cheap, avoids public clutter)
    return np.array([_theta_any(float(t)) for t in ts])

def gram_points(ns: np.ndarray) -> np.ndarray:
    """Vectorized Gram points g_n for integer n >= -1 (Newton, <= 50 steps)."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and int(ns.min()) < -1:
        raise DomainError("gram point index must be >= -1")
    # main-term inversion: x(log x - 1) = n + 1/8 with x = g/(2 pi)
    rhs = (ns + 0.125) / math.e
    x = np.real(lambertw(rhs))
    guess = 2.0 * math.pi * np.where(x > 0, (ns + 0.125) / np.maximum(x, 1e-12), 1.6)
    g = np.maximum(guess, 9.2)
    target = ns * math.pi
    for _ in range(50):
        f = _theta_vec(g) - target
        df = np.array([theta_deriv(float(t)) for t in g])
        step = f / df
        g_new = np.maximum(g - step, 7.0)
        g = g_new
        if np.max(np.abs(step)) < 1e-11:
            break
    else:
        raise ConvergenceError("Gram-point Newton did not converge in 50 steps")
    resid = np.abs(_theta_vec(g) - target)
    if np.max(resid) > 1e-9:
        raise ConvergenceError(
            f"Gram-point residual {np.max(resid):.2e} above 1e-9 (theta bug?)")
    return g

def gram_point(n: int) -> float:
    """Gram point g_n: the unique solution of theta(g) = n*pi, g > 6.3."""
    return float(gram_points(np.array([n]))[0])


# ---------------------------------------------------------------------------
# scanning

def _sign_with_margin(vals, errs):
    """+1 / -1 where the sign is certain beyond the error radius, else 0."""
    s = np.zeros(vals.shape, dtype=np.int64)
    s[vals > errs] = 1
    s[vals < -errs] = -1
    return s

def _block_grid(g_lo: float, g_hi: float, subdiv: int) -> np.ndarray:
    return np.linspace(g_lo, g_hi, subdiv + 1)

def scan_zeros(t_lo: float, t_hi: float,
               base_subdiv: int = _BASE_GRID) -> list[Bracket]:
    """All sign-change brackets of Z inside [t_lo, t_hi].

    Brackets are disjoint, ordered and each certified by opposite signs
    beyond the evaluation error.  Missed zeros (none expected after the
    Rosser-block subdivision) are the certifier's job, not ours.
    """
    if not (_SCAN_FLOOR <= t_lo <= t_hi <= SUPPORTED_HEIGHT):
        raise DomainError(
            f"scan range [{t_lo}, {t_hi}] outside [{_SCAN_FLOOR}, {SUPPORTED_HEIGHT:g}]")
    if t_lo == t_hi:
        return []

    # anchor Gram indices, extended until both ends are good
    n_lo = max(-1, int(math.floor(theta(t_lo) / math.pi)))
    n_hi = int(math.ceil(theta(t_hi) / math.pi))
    ns = np.arange(n_lo, n_hi + 1)
    pts = gram_points(ns)
    vals, errs = hardy_z_batch(pts)
    good = _sign_with_margin(vals, errs) * np.where(ns % 2 == 0, 1, -1) > 0
    for _ in range(64):
        grew = False
        if not good[0] and ns[0] > -1:
            ns = np.concatenate(([ns[0] - 1], ns))
            pts = np.concatenate((gram_points(ns[:1]), pts))
            v, e = hardy_z_batch(pts[:1])
            vals = np.concatenate((v, vals))
            errs = np.concatenate((e, errs))
            good = np.concatenate(
                ([_sign_with_margin(v, e)[0] * (1 if ns[0] % 2 == 0 else -1) > 0], good))
            grew = True
        if not good[-1]:
            ns = np.concatenate((ns, [ns[-1] + 1]))
            pts = np.concatenate((pts, gram_points(ns[-1:])))
            v, e = hardy_z_batch(pts[-1:])
            vals = np.concatenate((vals, v))
            errs = np.concatenate((errs, e))
            good = np.concatenate(
                (good, [_sign_with_margin(v, e)[0] * (1 if ns[-1] % 2 == 0 else -1) > 0]))
            grew = True
        if (good[0] or ns[0] == -1) and good[-1] and not grew:
            break
    # blocks between consecutive good anchors (index -1 acts as a boundary:
    # there is no zero below g_{-1})
    anchors = [i for i, g in enumerate(good) if g]
    if not good[0]:
        anchors = [0] + anchors

    brackets: list[Bracket] = []
    pending = []   # (i_lo, i_hi) anchor index pairs
    for a, b in zip(anchors[:-1], anchors[1:]):
        pending.append((a, b))

    for a, b in pending:
        expected = b - a
        subdiv = base_subdiv
        level = 0
        while True:
            xs = np.concatenate([
                _block_grid(pts[i], pts[i + 1], subdiv)[:-1] for i in range(a, b)
            ] + [pts[b:b + 1]])
            zv, ze = hardy_z_batch(xs)
            zs = np.sign(zv)
            flips = np.nonzero(zs[1:] * zs[:-1] < 0)[0]
            if flips.size >= expected or level >= _MAX_SUBDIV_LEVELS:
                break
            subdiv *= _SUBDIV_FACTOR
            level += 1
        for i in flips:
            brackets.append(Bracket(float(xs[i]), float(xs[i + 1]),
                                    int(zs[i]), int(zs[i + 1])))

    return _clip_brackets(brackets, t_lo, t_hi)

def scan_zeros_chunked(t_lo: float, t_hi: float, n_chunks: int) -> list[Bracket]:
    """scan_zeros split at good Gram anchors and merged in order.

    Emulates disjoint-range worker partitioning; the merge reproduces the
    single-range scan exactly because chunk edges never cut a Gram block.
    """
    if n_chunks < 2:
        return scan_zeros(t_lo, t_hi)
    n_a = int(math.floor(theta(t_lo) / math.pi))
    n_b = int(math.ceil(theta(t_hi) / math.pi))
    targets = np.unique(np.linspace(n_a, n_b, n_chunks + 1).astype(np.int64))
    edges = [t_lo]
    for n in targets[1:-1]:
        # slide forward to a good Gram point so no block is cut
        for cand in range(int(n), int(n) + 50):
            g = gram_point(cand)
            v, e = hardy_z_batch(np.array([g]))
            if int(_sign_with_margin(v, e)[0]) * (1 if cand % 2 == 0 else -1) > 0:
                if t_lo < g < t_hi and g > edges[-1]:
                    edges.append(g)
                break
    edges.append(t_hi)
    out: list[Bracket] = []
    for a, b in zip(edges[:-1], edges[1:]):
        out.extend(scan_zeros(a, b))
    return sorted(out, key=lambda br: br.lo)


def _clip_brackets(brackets, t_lo, t_hi):
    out = []
    for br in sorted(brackets, key=lambda b: b.lo):
        if br.hi <= t_lo or br.lo >= t_hi:
            continue
        if br.lo >= t_lo and br.hi <= t_hi:
            out.append(br)
            continue
        shrunk = _shrink_into(br, t_lo, t_hi)
        if shrunk is not None:
            out.append(shrunk)
    return out

def _shrink_into(br: Bracket, t_lo: float, t_hi: float) -> Bracket | None:
    """Bisect a boundary-straddling bracket until it falls on one side."""
    lo, hi, s_lo, s_hi = br.lo, br.hi, br.sign_lo, br.sign_hi
    for _ in range(60):
        if lo >= t_lo and hi <= t_hi:
            return Bracket(lo, hi, s_lo, s_hi)
        if hi <= t_lo or lo >= t_hi:
            return None
        mid = 0.5 * (lo + hi)
        v, e = hardy_z_batch(np.array([mid]))
        s_mid = int(_sign_with_margin(v, e)[0])
        if s_mid == 0:
            mid = lo + 0.61803 * (hi - lo)  # dodge a near-zero probe
            v, e = hardy_z_batch(np.array([mid]))
            s_mid = int(_sign_with_margin(v, e)[0])
            if s_mid == 0:
                return None
        if s_mid != s_lo:
            hi, s_hi = mid, s_mid
        else:
            lo, s_lo = mid, s_mid
    return None


# ---------------------------------------------------------------------------
# refinement

def _z_floor(t: float) -> float:
    """Best certifiable EM accuracy near a zero at height t (rounding-bound)."""
    return 6e-16 * math.sqrt(max(t, 1.0)) + 1e-14

def _z_certified(t: float, target: float) -> tuple[float, float]:
    """Z(t) with error radius, tightening until the sign is resolvable."""
    floor = 2.0 * _z_floor(t)
    prec_target = max(target, floor)
    res = None
    for _ in range(6):
        try:
            res = hardy_Z(t, Precision(prec_target, Method.EULER_MACLAURIN))
        except PrecisionUnreachableError:
            prec_target *= 4.0
            continue
        if abs(res.value) > res.err_radius or prec_target <= floor * 1.001:
            return res.value, res.err_radius
        prec_target = max(prec_target * 1e-2, floor)
    if res is None:
        raise ToleranceUnreachableError(f"cannot evaluate Z near t = {t:.6f}")
    return res.value, res.err_radius

def _bisect_lockstep(brackets: list[Bracket], coarse_width: float):
    """Bisect many brackets in parallel rounds on the cheap evaluator."""
    lo = np.array([b.lo for b in brackets])
    hi = np.array([b.hi for b in brackets])
    s_lo = np.array([b.sign_lo for b in brackets], dtype=np.int64)
    s_hi = np.array([b.sign_hi for b in brackets], dtype=np.int64)
    # a wrong claimed sign would silently bisect toward a non-zero; check
    # cheaply and trust the claim only where the evaluator is uncertain
    obs_lo = _sign_with_margin(*hardy_z_batch(lo))
    obs_hi = _sign_with_margin(*hardy_z_batch(hi))
    bad = ((obs_lo != 0) & (obs_lo != s_lo)) | ((obs_hi != 0) & (obs_hi != s_hi))
    if np.any(bad):
        i = int(np.nonzero(bad)[0][0])
        raise DomainError(
            f"bracket [{lo[i]}, {hi[i]}] does not have the claimed signs")
    for _ in range(80):
        active = hi - lo > coarse_width
        if not np.any(active):
            break
        idx = np.nonzero(active)[0]
        mids = 0.5 * (lo[idx] + hi[idx])
        v, e = hardy_z_batch(mids)
        s = _sign_with_margin(v, e)
        for j, i in enumerate(idx):
            sj = int(s[j])
            if sj == 0:
                val, err = _z_certified(float(mids[j]), 1e-12)
                if abs(val) <= err:
                    continue  # sitting on the zero; stage 2 will finish it
                sj = 1 if val > 0 else -1
            if sj != s_lo[i]:
                hi[i] = mids[j]
            else:
                lo[i] = mids[j]
                s_lo[i] = sj
    return lo, hi, s_lo


def refine_zero(bracket: Bracket, tol: float = DEFAULT_TOL,
                index: int = 1) -> ZeroRecord:
    """Shrink a sign-change bracket to err_radius <= tol.

    Bisection down to width 1000*tol on the cheap evaluator, then guarded
    secant on the Euler-Maclaurin evaluator, falling back to bisection when
    a step stagnates.  The final endpoints carry certified opposite signs.
    """
    if tol < MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL:g}")
    coarse_width = max(1000.0 * tol, 1e-6)
    lo_a, hi_a, _ = _bisect_lockstep([bracket], coarse_width)
    return _secant_stage(float(lo_a[0]), float(hi_a[0]), tol, index)


def _secant_stage(lo: float, hi: float, tol: float, index: int) -> ZeroRecord:
    f_lo, e_lo = _z_certified(lo, 1e-12)
    f_hi, e_hi = _z_certified(hi, 1e-12)
    if abs(f_lo) <= e_lo or abs(f_hi) <= e_hi or (f_lo > 0) == (f_hi > 0):
        raise ToleranceUnreachableError(
            f"cannot certify bracket signs near t = {0.5 * (lo + hi):.6f}")
    prev_width = hi - lo
    stagnant = 0
    for _ in range(200):
        width = hi - lo
        if width <= 2.0 * tol:
            break
        x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        margin = 0.05 * width
        if not (lo + margin < x < hi - margin) or stagnant >= 2:
            x = 0.5 * (lo + hi)
            stagnant = 0
        fx, ex = _z_certified(x, 1e-12)
        if abs(fx) <= ex:
            # probe sits on the zero closer than we can certify; nudge it
            x = lo + 0.61803 * width
            fx, ex = _z_certified(x, 1e-12)
            if abs(fx) <= ex:
                if width <= 2.0 * max(tol, ex / max(abs(f_lo / width), 1e-30)):
                    break
                raise ToleranceUnreachableError(
                    f"evaluation error {ex:.2e} blocks sign certification "
                    f"near t = {x:.9f} (tol {tol:g})")
        if (fx > 0) == (f_hi > 0):
            hi, f_hi = x, fx
        else:
            lo, f_lo = x, fx
        stagnant = stagnant + 1 if hi - lo > 0.5 * prev_width else 0
        prev_width = hi - lo
    else:
        raise ToleranceUnreachableError(
            f"refinement did not reach tol {tol:g} near t = {0.5 * (lo + hi):.6f}")

    ordinate = 0.5 * (lo + hi)
    return ZeroRecord(index=index, ordinate=ordinate,
                      err_radius=max(0.5 * (hi - lo), 5e-14),
                      source="computed", sign_change_verified=True)


def build_table(brackets: list[Bracket], tol: float = DEFAULT_TOL,
                first_index: int = 1) -> ZeroTable:
    """Refine brackets and fold them into an index-contiguous table.

    The fold is a deterministic order-by-ordinate merge, so chunked or
    parallel scans reproduce the single-scan table bit for bit as long as
    chunk edges sit on good Gram points.
    """
    if not brackets:
        return ZeroTable(records=[])
    coarse_width = max(1000.0 * tol, 1e-6)
    lo, hi, _ = _bisect_lockstep(brackets, coarse_width)
    recs = [_secant_stage(float(a), float(b), tol, 1)
            for a, b in zip(lo, hi)]
    recs.sort(key=lambda r: r.ordinate)
    recs = [replace(r, index=first_index + i) for i, r in enumerate(recs)]
    return ZeroTable(records=recs)


# ---------------------------------------------------------------------------
# certification

def _formula_count(T: float) -> tuple[int, float]:
    raw = counting.n_main(T) + counting.s_of_T(T)
    return int(round(raw)), raw

def turing_certify(table: ZeroTable, T: float) -> CertificationReport:
    """Certify that the table holds every zero up to T.

    Compares the located count against the argument-principle count
    N(T) = n_main(T) + S(T) (the O(1/T) defect is ~1/(48 pi T), far inside
    rounding distance at every supported height).  On success table.t_cert
    is raised to T; on failure the first height window where the counts
    diverge is located and reported.
    """
    if T < 10:
        raise DomainError("certification supported for T >= 10")
    if not table.records or table.records[-1].ordinate <= T:
        raise DomainError("table must extend beyond T before certification")
    n_loc = table.count_upto(T)
    n_for, raw = _formula_count(T)
    disc = n_loc - n_for
    if disc == 0:
        table.t_cert = max(table.t_cert, T)
        table.count_formula_check = 0
        return CertificationReport(T, n_loc, n_for, raw, 0, True)

    # localize the first disagreement window by bisection over height
    lo, hi = 10.0, T
    for _ in range(40):
        if hi - lo < 1.0:
            break
        mid = 0.5 * (lo + hi)
        if table.count_upto(mid) - _formula_count(mid)[0] != 0:
            hi = mid
        else:
            lo = mid
    raise CertificationError(
        f"count mismatch at T = {T:g}: located {n_loc}, formula {n_for} "
        f"(first divergence in [{lo:.3f}, {hi:.3f}])",
        window=(lo, hi), discrepancy=disc)
