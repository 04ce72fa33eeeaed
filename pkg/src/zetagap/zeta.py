"""Evaluation of the Riemann-Siegel phase theta(t), Hardy's Z(t), zeta(1/2+it)
and zeta(s) in the strip 0 < sigma <= 2, each with a tracked absolute error
radius.

Two evaluation routes:

* Riemann-Siegel: main sum of length sqrt(t/2pi) plus the C0..C3 remainder
  terms, usable for t >= T_SWITCH.  The remainder bound is Gabcke's
  0.031 * (t/2pi)^(-9/4), so the achievable accuracy improves from ~1e-5
  near t = 200 to ~2e-9 near t = 1e4.  Cheap: O(sqrt(t)) per point.
* Euler-Maclaurin: O(t) per point but certifiable to ~1e-12 at any height
  we care about, and valid off the critical line.

Oscillatory phases (theta(t), t*log n) are computed in 80-bit extended
precision and reduced mod 2pi before any trig call, so the error radii stay
honest at large t where the raw phases reach 1e5 and double rounding alone
would exceed 1e-11.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import loggamma

from ._rs_coeffs import TABLES as _RS_TABLES
from .errors import DomainError, PrecisionUnreachableError

__all__ = [
    "EvalResult",
    "Precision",
    "Method",
    "theta",
    "theta_deriv",
    "hardy_Z",
    "hardy_z_batch",
    "zeta_half",
    "zeta_general",
    "chi",
    "T_SWITCH",
    "SUPPORTED_HEIGHT",
]

T_SWITCH = 200.0          # Riemann-Siegel allowed from here up (remainder bound needs t >= 200)
SUPPORTED_HEIGHT = 1.0e7  # hard ceiling; Euler-Maclaurin cost grows linearly in t

_LD = np.longdouble
_TWO_PI_LD = 2 * np.arctan2(_LD(0), _LD(-1))   # 2*pi to 19 digits
_TWO_PI = float(_TWO_PI_LD)
_LOG_PI_LD = np.log(np.arctan2(_LD(0), _LD(-1)))

# theta(t) ~ (t/2)log(t/2pi) - t/2 - pi/8 + sum c_k / t^(2k-1);
# c_k = (2^(2k)-2)|B_2k| / (2k(2k-1) 2^(2k+1)).  First omitted term at t=10
# is below 1e-13, so the series is used for t >= 10.
_THETA_TAIL = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0,
               127.0 / 430080.0, 511.0 / 1216512.0)
_THETA_ASYMPTOTIC_MIN = 10.0

_GABCKE_C3 = 0.031  # |R_3(t)| <= 0.031 (t/2pi)^(-9/4) for t >= 200

# Bernoulli numbers B_2, B_4, ..., B_48 for Euler-Maclaurin correction terms.
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330, 854513 / 138,
    -236364091 / 2730, 8553103 / 6, -23749461029 / 870,
    8615841276005 / 14322, -7709321041217 / 510, 2577687858367 / 6,
    -26315271553053477373 / 1919190, 2929993913841559 / 6,
    -261082718496449122051 / 13530, 1520097643918070802691 / 1806,
    -27833269579301024235023 / 690, 596451111593912163277961 / 282,
    -5609403368997817686249127547 / 46410,
)


class Method(Enum):
    RIEMANN_SIEGEL = "riemann_siegel"
    EULER_MACLAURIN = "euler_maclaurin"


@dataclass(frozen=True)
class Precision:
    """Requested absolute accuracy and evaluation route."""

    target_abs_err: float
    method: Method

    def __post_init__(self):
        if not (self.target_abs_err > 0):
            raise DomainError("target_abs_err must be positive")


@dataclass(frozen=True)
class EvalResult:
    """A value with a certified absolute error radius at height t."""

    value: float | complex
    err_radius: float
    t: float

    def __post_init__(self):
        if not (self.err_radius >= 0 and math.isfinite(self.err_radius)):
            raise DomainError("err_radius must be finite and >= 0")


# ---------------------------------------------------------------------------
# theta

def _theta_ld(t_ld):
    """Asymptotic series in extended precision; valid for t >= 10 (array ok)."""
    half_t = t_ld / 2
    out = half_t * np.log(t_ld / _TWO_PI_LD) - half_t - _TWO_PI_LD / 16
    inv2 = 1 / (t_ld * t_ld)
    term = 1 / t_ld
    for c in _THETA_TAIL:
        out = out + _LD(c) * term
        term = term * inv2
    return out

def _theta_small(t):
    """Direct log-gamma route for 0 <= t < 10."""
    return float(loggamma(0.25 + 0.5j * t).imag) - 0.5 * t * float(_LOG_PI_LD)

def _theta_any(t):
    if t >= _THETA_ASYMPTOTIC_MIN:
        return float(_theta_ld(_LD(t)))
    return _theta_small(t)

def _theta_abs_err(t):
    """Certified absolute error of _theta_any: series truncation (tight only
    near t = 10) plus extended-precision rounding on a value of size ~t log t."""
    if t < 12.0:
        return 2e-13
    return 5e-15 + t * 2.2e-19

def theta(t: float) -> float:
    """Riemann-Siegel phase theta(t); absolute error <= 1e-10 up to 1e7.

    theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.  Increasing for
    t > 6.29 or so; theta(g_n) = n*pi defines the Gram points.
    """
    if not t > 0:
        raise DomainError(f"theta requires t > 0, got {t}")
    if t > SUPPORTED_HEIGHT:
        raise DomainError(f"t = {t} above supported height {SUPPORTED_HEIGHT:g}")
    return _theta_any(t)

def theta_deriv(t: float) -> float:
    """d theta/dt; asymptotic form, adequate for Newton steering at t > 7."""
    if not t > 0:
        raise DomainError(f"theta_deriv requires t > 0, got {t}")
    out = 0.5 * math.log(t / _TWO_PI)
    inv2 = 1.0 / (t * t)
    term = inv2
    for k, c in enumerate(_THETA_TAIL, start=1):
        out -= (2 * k - 1) * c * term
        term *= inv2
    return out


# ---------------------------------------------------------------------------
# Riemann-Siegel Z

_ld_log_cache = np.log(np.arange(1, 64, dtype=_LD))

def _ld_logs(n):
    global _ld_log_cache
    if n > _ld_log_cache.size:
        _ld_log_cache = np.log(np.arange(1, max(n, 2 * _ld_log_cache.size) + 1, dtype=_LD))
    return _ld_log_cache[:n]

def _horner(table, z):
    acc = np.zeros_like(z)
    for c in reversed(table):
        acc = acc * z + c
    return acc

def _rs_bound(t):
    """Certified RS error: Gabcke remainder plus a rounding allowance."""
    return _GABCKE_C3 * (t / _TWO_PI) ** -2.25 + 1e-12

def _rs_z_values(ts: np.ndarray) -> np.ndarray:
    """Riemann-Siegel Z on an array of heights (each must be >= T_SWITCH)."""
    ts_ld = ts.astype(_LD)
    tau = np.sqrt(ts_ld / _TWO_PI_LD)
    N = np.floor(tau).astype(np.int64)
    p = (tau - N).astype(np.float64)
    z = 2.0 * p - 1.0
    theta_vals = _theta_ld(ts_ld)

    out = np.empty(ts.size, dtype=np.float64)
    order = np.argsort(N, kind="stable")
    i = 0
    while i < ts.size:
        j = i
        n_terms = N[order[i]]
        while j < ts.size and N[order[j]] == n_terms:
            j += 1
        idx = order[i:j]
        logs = _ld_logs(int(n_terms))
        phase = np.remainder(theta_vals[idx, None] - ts_ld[idx, None] * logs[None, :],
                             _TWO_PI_LD).astype(np.float64)
        weights = 1.0 / np.sqrt(np.arange(1, n_terms + 1, dtype=np.float64))
        main = 2.0 * np.sum(np.cos(phase) * weights, axis=1, dtype=_LD).astype(np.float64)
        out[idx] = main
        i = j

    x = ts / _TWO_PI
    corr = np.zeros(ts.size)
    for jj, table in enumerate(_RS_TABLES):
        corr += _horner(table, z) * x ** (-0.5 * jj)
    sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return out + sign * x ** -0.25 * corr


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta

def _em_zeta(sigma: float, t: float, target: float):
    """zeta(sigma + it) by Euler-Maclaurin with a certified truncation bound.

    Returns (value, err_radius).  t must be >= 0 (use conjugation for t < 0).
    """
    s = complex(sigma, t)
    n_terms = max(24, int(0.35 * t) + 16)
    for _ in range(6):
        value, err = _em_zeta_once(s, sigma, t, n_terms, target)
        if err is not None:
            return value, err
        n_terms = int(n_terms * 1.7) + 8
    raise PrecisionUnreachableError(
        f"Euler-Maclaurin cannot reach {target:g} at s = {sigma} + {t}i")

def _em_zeta_once(s, sigma, t, n_terms, target):
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    amp = n ** (-sigma)
    phase = np.remainder(_LD(t) * _ld_logs(n_terms), _TWO_PI_LD).astype(np.float64)
    re = float(np.sum(amp * np.cos(phase), dtype=_LD))
    im = float(np.sum(amp * np.sin(phase), dtype=_LD))
    main = complex(re, -im)

    # e^{-i t log N} from the already-reduced phase
    rot = complex(math.cos(phase[-1]), -math.sin(phase[-1]))
    n_f = float(n_terms)
    n_pow_ms = n_f ** (-sigma) * rot           # N^{-s}
    tail = n_f ** (1.0 - sigma) * rot / (s - 1.0)  # N^{1-s}/(s-1)
    value = main + tail - 0.5 * n_pow_ms

    # Bernoulli corrections: term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    term = n_pow_ms * s / n_f * (_BERNOULLI[0] / 2.0)
    trunc = None
    prev_mag = math.inf
    for k in range(1, len(_BERNOULLI)):
        value += term
        # ratio to get term_{k+1}
        ratio = (s + (2 * k - 1)) * (s + 2 * k) / (n_f * n_f) \
            * (_BERNOULLI[k] / _BERNOULLI[k - 1]) / ((2 * k + 1) * (2 * k + 2))
        nxt = term * ratio
        mag = abs(nxt)
        bound = mag * abs(s + 2 * k + 1) / (sigma + 2 * k + 1)
        if bound <= 0.25 * target:
            trunc = bound
            break
        if mag > prev_mag:     # divergence onset: N too small for this target
            return None, None
        prev_mag = mag
        term = nxt
    if trunc is None:
        return None, None
    # rounding: extended-precision phases leave ~|s|*log(N)*1e-19 per term,
    # double arithmetic ~1e-16 per operation on sums of size sum(n^-sigma)
    rounding = (np.sum(np.abs(amp)) * 4e-16 + abs(value) * 5e-16 + 1e-15)
    return value, trunc + rounding


# ---------------------------------------------------------------------------
# public evaluators

def _default_precision(t: float) -> Precision:
    if t >= T_SWITCH:
        return Precision(max(1e-10, 2.0 * _rs_bound(t)), Method.RIEMANN_SIEGEL)
    return Precision(1e-10, Method.EULER_MACLAURIN)

def hardy_Z(t: float, prec: Precision | None = None) -> EvalResult:
    """Hardy's function Z(t) = e^{i theta(t)} zeta(1/2 + it); real-valued.

    Raises PrecisionUnreachableError when the chosen method cannot certify
    prec.target_abs_err at this height (the Riemann-Siegel remainder bound
    is a hard floor for that route).
    """
    if t < 0:
        raise DomainError(f"hardy_Z requires t >= 0, got {t}")
    if t > SUPPORTED_HEIGHT:
        raise DomainError(f"t = {t} above supported height {SUPPORTED_HEIGHT:g}")
    if prec is None:
        prec = _default_precision(t)
    if prec.method is Method.RIEMANN_SIEGEL:
        if t < T_SWITCH:
            raise DomainError(
                f"riemann_siegel method requires t >= {T_SWITCH:g}, got {t}")
        err = _rs_bound(t)
        if err > prec.target_abs_err:
            raise PrecisionUnreachableError(
                f"RS remainder bound {err:.2e} exceeds target "
                f"{prec.target_abs_err:.2e} at t = {t:g}")
        value = float(_rs_z_values(np.array([t]))[0])
        return EvalResult(value, err, t)

    # Euler-Maclaurin route: rotate zeta(1/2+it) onto the real axis
    zeta_val, zeta_err = _em_zeta(0.5, t, 0.5 * prec.target_abs_err)
    th = _theta_any(t) if t > 0 else 0.0
    rotated = complex(math.cos(th), math.sin(th)) * zeta_val
    err = zeta_err + abs(zeta_val) * _theta_abs_err(t) + abs(rotated.imag)
    if err > prec.target_abs_err:
        raise PrecisionUnreachableError(
            f"certified error {err:.2e} exceeds target "
            f"{prec.target_abs_err:.2e} at t = {t:g}")
    return EvalResult(rotated.real, err, t)

def hardy_z_batch(ts: np.ndarray,
                  rs_from: float = T_SWITCH) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized best-effort Z over heights: RS above rs_from, EM below.

    Returns (values, err_radii).  Used by the zero scanner, where the
    per-point accuracy requirement is only 'well below the local |Z| scale'.
    """
    ts = np.asarray(ts, dtype=np.float64)
    vals = np.empty_like(ts)
    errs = np.empty_like(ts)
    hi = ts >= rs_from
    if np.any(hi):
        vals[hi] = _rs_z_values(ts[hi])
        errs[hi] = _rs_bound(ts[hi])
    for i in np.nonzero(~hi)[0]:
        r = hardy_Z(float(ts[i]), Precision(1e-9, Method.EULER_MACLAURIN))
        vals[i], errs[i] = r.value, r.err_radius
    return vals, errs

def zeta_half(t: float, prec: Precision | None = None) -> EvalResult:
    """zeta(1/2 + it) = Z(t) e^{-i theta(t)}; modulus identical to |Z(t)|."""
    z = hardy_Z(t, prec)
    th = _theta_any(t) if t > 0 else 0.0
    value = z.value * complex(math.cos(th), -math.sin(th))
    return EvalResult(value, z.err_radius + abs(z.value) * _theta_abs_err(max(t, 1.0)), t)

def zeta_general(sigma: float, t: float, target_abs_err: float = 1e-10) -> EvalResult:
    """zeta(sigma + it) by Euler-Maclaurin in the strip 0 < sigma <= 2.

    Absolute error at most target_abs_err (default well under the 1e-8
    contract).  Negative t handled by conjugation.
    """
    if not (0 < sigma <= 2):
        raise DomainError(f"sigma = {sigma} outside supported strip (0, 2]")
    if abs(t) > SUPPORTED_HEIGHT:
        raise DomainError(f"|t| = {abs(t)} above supported height {SUPPORTED_HEIGHT:g}")
    value, err = _em_zeta(sigma, abs(t), target_abs_err)
    if t < 0:
        value = value.conjugate()
    return EvalResult(value, err, t)

def chi(sigma: float, t: float) -> complex:
    """chi(s) from the functional equation zeta(s) = chi(s) zeta(1-s)."""
    s = complex(sigma, t)
    log_chi = (s * math.log(2.0) + (s - 1.0) * math.log(math.pi)
               + loggamma(1.0 - s))
    return np.exp(log_chi) * np.sin(np.pi * s / 2.0)
