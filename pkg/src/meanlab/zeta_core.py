"""theta(t), Hardy's Z, zeta(sigma + it), log zeta and S(t).

Z uses the Riemann-Siegel main sum with the corrections C0..C6; zeta off
that path is Euler-Maclaurin. Everything numerically hot is compiled with
numba and accepts arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numba as nb
import numpy as np
from scipy.special import loggamma

from .arith import _zeta_minus_one
from .errors import CoverageError, DomainError, SingularPointError

TWO_PI = 2.0 * math.pi
THETA_MIN_T = 10.0

_coeffs = json.loads(resources.files("meanlab").joinpath("data/rs_coeffs.json").read_text())
_RS = np.zeros((len(_coeffs), max(len(v) for v in _coeffs.values())))
for _k in range(len(_coeffs)):
    _c = _coeffs[f"C{_k}"]
    _RS[_k, : len(_c)] = _c
_RS_DEG = _RS.shape[1]

# B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
_EM_K = 60
_EM_B = np.array([(-1) ** (k + 1) * 2.0 * (1.0 + _zeta_minus_one(2 * k)) / TWO_PI ** (2 * k)
                  for k in range(1, _EM_K + 1)])


@nb.njit(cache=True)
def _theta1(t):
    # asymptotic expansion; truncation error below 1e-12 for t >= 10
    it = 1.0 / t
    it2 = it * it
    corr = it * (1.0 / 48 + it2 * (7.0 / 5760 + it2 * (31.0 / 80640 + it2 * (127.0 / 430080 + it2 * 511.0 / 1216512))))
    return 0.5 * t * math.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8 + corr


@nb.njit(cache=True)
def _theta_arr(ts):
    out = np.empty(ts.size)
    for i in range(ts.size):
        out[i] = _theta1(ts[i])
    return out


@nb.njit(cache=True)
def _rs_Z1(t, rs):
    a = math.sqrt(t / (2.0 * math.pi))
    N = int(a)
    p = a - N
    th = _theta1(t)
    s = 0.0
    for n in range(1, N + 1):
        s += math.cos(th - t * math.log(n)) / math.sqrt(n)
    x = p - 0.5
    ia = 1.0 / a
    corr = 0.0
    scale = 1.0
    for k in range(rs.shape[0]):
        c = 0.0
        for j in range(rs.shape[1] - 1, -1, -1):
            c = c * x + rs[k, j]
        corr += c * scale
        scale *= ia
    sign = 1.0 if (N - 1) % 2 == 0 else -1.0
    return 2.0 * s + sign * corr / math.sqrt(a)


@nb.njit(cache=True)
def _rs_Z_arr(ts, rs):
    out = np.empty(ts.size)
    for i in range(ts.size):
        out[i] = _rs_Z1(ts[i], rs)
    return out


@nb.njit(cache=True)
def _em_zeta1(sr, si, bern):
    """Euler-Maclaurin zeta(s). Returns (value, truncation+rounding estimate)."""
    abs_s = math.hypot(sr, si)
    N = int(abs_s / math.pi) + 10
    total = 0.0 + 0.0j
    absum = 0.0
    rnd = 0.0
    for n in range(1, N):
        ln = math.log(n)
        mag = math.exp(-sr * ln)
        ph = -si * ln
        total += mag * complex(math.cos(ph), math.sin(ph))
        absum += mag
        e = mag * (1.0 + abs(si) * ln)
        rnd += e * e
    s = complex(sr, si)
    lnN = math.log(N)
    Ns = math.exp(-sr * lnN) * complex(math.cos(-si * lnN), math.sin(-si * lnN))  # N^{-s}
    total += Ns * N / (s - 1.0) + 0.5 * Ns
    # Bernoulli tail terms b_k * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    poch = s
    powN = Ns / N
    err = 0.0
    converged = False
    for k in range(bern.size):
        term = bern[k] * poch * powN
        total += term
        at = abs(term)
        poch *= (s + 2 * k + 1) * (s + 2 * k + 2)
        powN /= N * N
        nxt = abs(bern[k + 1] * poch * powN) if k + 1 < bern.size else at
        if nxt < 1e-17 * abs(total):
            err = nxt
            converged = True
            break
        if nxt > at and k > 2:
            err = at
            break
    if not converged and err == 0.0:
        err = abs(total)
    err += 2.2e-16 * (math.sqrt(rnd) + absum)
    return total, err


@nb.njit(cache=True)
def _em_zeta_arr(srs, sis, bern):
    vals = np.empty(srs.size, dtype=np.complex128)
    errs = np.empty(srs.size)
    for i in range(srs.size):
        v, e = _em_zeta1(srs[i], sis[i], bern)
        vals[i] = v
        errs[i] = e
    return vals, errs


@nb.njit(cache=True)
def _em_Z_arr(ts, bern):
    out = np.empty(ts.size)
    for i in range(ts.size):
        v, _ = _em_zeta1(0.5, ts[i], bern)
        th = _theta1(ts[i])
        out[i] = (complex(math.cos(th), math.sin(th)) * v).real
    return out


@nb.njit(cache=True)
def _continue_log(sigma, t, bern):
    """log zeta(sigma + it), imaginary part continued from sigma = 3 along Im s = t.

    On t = 0 left of the pole the path is taken just above the real axis
    (t -> 0+), which gives arg = -pi since zeta(sigma) < 0 there. Heights
    below 1e-290 get the same value: Im zeta is subnormal there, and the
    O(t) correction to the argument is far below rounding anyway.
    """
    if t < 1e-290 and sigma < 1.0:
        z, _ = _em_zeta1(sigma, 0.0, bern)
        return complex(math.log(abs(z)), -math.pi), z
    s_cur = 3.0
    z_cur, _ = _em_zeta1(s_cur, t, bern)
    arg = math.atan2(z_cur.imag, z_cur.real)
    h = 0.25
    while s_cur > sigma:
        s_nxt = max(sigma, s_cur - h)
        z_nxt, _ = _em_zeta1(s_nxt, t, bern)
        r = z_nxt / z_cur
        d = math.atan2(r.imag, r.real)
        if abs(d) > math.pi / 4 and h > 1e-9:
            h *= 0.5
            continue
        arg += d
        s_cur = s_nxt
        z_cur = z_nxt
        h = min(0.25, 2.0 * h)
    return complex(math.log(abs(z_cur)), arg), z_cur


@nb.njit(cache=True)
def _continue_log_arr(sigma, ts, bern):
    out = np.empty(ts.size, dtype=np.complex128)
    for i in range(ts.size):
        v, _ = _continue_log(sigma, ts[i], bern)
        out[i] = v
    return out


def _as_array(t):
    arr = np.asarray(t, dtype=np.float64)
    return arr, arr.ndim == 0


def _ret(out, scalar):
    return out.reshape(()).item() if scalar else out


def riemann_siegel_theta(t):
    """theta(t) from its asymptotic expansion (five correction terms), t >= 10."""
    arr, scalar = _as_array(t)
    if np.any(arr < THETA_MIN_T):
        raise DomainError("riemann_siegel_theta needs t >= 10")
    return _ret(_theta_arr(arr.ravel()).reshape(arr.shape), scalar)


def theta_exact(t):
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, valid for all t >= 0."""
    arr, scalar = _as_array(t)
    out = np.imag(loggamma(0.25 + 0.5j * arr)) - 0.5 * arr * math.log(math.pi)
    return _ret(np.asarray(out), scalar)


def theta(t):
    """theta(t) on all t >= 0: asymptotic for t >= 10, log-gamma below."""
    arr, scalar = _as_array(t)
    flat = arr.ravel()
    out = np.empty(flat.size)
    hi = flat >= THETA_MIN_T
    out[hi] = _theta_arr(flat[hi])
    if np.any(~hi):
        out[~hi] = theta_exact(flat[~hi])
    return _ret(out.reshape(arr.shape), scalar)


def hardy_Z(t):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it) by Riemann-Siegel, t >= 10."""
    arr, scalar = _as_array(t)
    if np.any(arr < THETA_MIN_T):
        raise DomainError("hardy_Z needs t >= 10")
    return _ret(_rs_Z_arr(arr.ravel(), _RS).reshape(arr.shape), scalar)


def hardy_Z_em(t):
    """Z(t) through Euler-Maclaurin zeta; slower, but accurate at low heights."""
    arr, scalar = _as_array(t)
    if np.any(arr < THETA_MIN_T):
        raise DomainError("hardy_Z_em needs t >= 10")
    return _ret(_em_Z_arr(arr.ravel(), _EM_B).reshape(arr.shape), scalar)


@dataclass(frozen=True)
class ZetaPoint:
    sigma: float
    t: float
    value: complex
    log_value: complex
    err_est: float
    precision_loss: bool = False


def zeta(sigma: float, t: float) -> ZetaPoint:
    """zeta(sigma + it) by Euler-Maclaurin, for 1/2 <= sigma <= 4 and t >= 0.

    ``err_est`` is relative (truncation plus a rounding model). The log is the
    horizontal continuation from sigma = 3; ``precision_loss`` flags
    |value| < 1e-12, where the relative estimate is meaningless.
    """
    if not 0.5 <= sigma <= 4.0:
        raise DomainError("sigma must lie in [1/2, 4]")
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0.0 and sigma == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    v, e = _em_zeta1(float(sigma), float(t), _EM_B)
    flag = abs(v) < 1e-12
    if flag:
        lv = complex(-math.inf, math.nan) if v == 0 else complex(math.log(abs(v)), math.nan)
    elif sigma >= 3.0:
        lv = complex(math.log(abs(v)), math.atan2(v.imag, v.real))
    else:
        lv, _ = _continue_log(float(sigma), float(t), _EM_B)
    return ZetaPoint(sigma=float(sigma), t=float(t), value=complex(v), log_value=complex(lv),
                     err_est=float(e / max(abs(v), 1e-300)), precision_loss=bool(flag))


def zeta_values(sigma, t):
    """Vectorised Euler-Maclaurin zeta(sigma + it); returns (values, abs error estimates)."""
    s, tt = np.broadcast_arrays(np.asarray(sigma, dtype=float), np.asarray(t, dtype=float))
    v, e = _em_zeta_arr(np.array(s, copy=True).ravel(), np.array(tt, copy=True).ravel(), _EM_B)
    return v.reshape(s.shape), e.reshape(s.shape)


def log_zeta_continued(sigma: float, t) -> np.ndarray:
    """log zeta(sigma + it) by horizontal continuation from sigma = 3 (no zero table)."""
    if not 0.5 <= sigma <= 4.0:
        raise DomainError("sigma must lie in [1/2, 4]")
    arr, scalar = _as_array(t)
    return _ret(_continue_log_arr(float(sigma), arr.ravel(), _EM_B).reshape(arr.shape), scalar)


def _check_cover(zeros, t_max: float) -> None:
    if zeros is None:
        raise CoverageError("a certified zero table is required")
    if not getattr(zeros, "certified", False):
        raise CoverageError("zero table is not certified")
    if t_max > zeros.height:
        raise CoverageError(f"zero table reaches {zeros.height:g}, need {t_max:g}")


def zero_count(t, zeros):
    """N(t) from the table: ordinates <= t."""
    return np.searchsorted(zeros.ordinates, np.asarray(t, dtype=float), side="right")


def S_of_t(t, zeros):
    """S(t) = N(t) - theta(t)/pi - 1 with N counted from a certified table."""
    arr, scalar = _as_array(t)
    _check_cover(zeros, float(np.max(arr)) if arr.size else 0.0)
    out = zero_count(arr, zeros) - theta(arr) / math.pi - 1.0
    return _ret(np.asarray(out, dtype=float), scalar)


ZERO_GUARD = 1e-12


def log_zeta(sigma: float, t, zeros=None, guard: bool = True):
    """log zeta(sigma + it) on the branch continuous from sigma = +infinity.

    On the critical line this is log|Z(t)| + i pi S(t), which needs a table
    certified to t + 2 and raises SingularPointError at a tabulated ordinate
    (quadrature of the integrable log singularity passes ``guard=False``).
    For sigma > 1/2 the imaginary part is continued horizontally from
    sigma = 3 and ``zeros`` is not consulted.
    """
    arr, scalar = _as_array(t)
    if sigma == 0.5:
        _check_cover(zeros, float(np.max(arr)) + 2.0)
        flat = arr.ravel()
        idx = np.searchsorted(zeros.ordinates, flat)
        for side in (idx - 1, idx) if guard else ():
            ok = (side >= 0) & (side < zeros.ordinates.size)
            near = np.abs(zeros.ordinates[np.clip(side, 0, zeros.ordinates.size - 1)] - flat)
            if np.any(ok & (near <= ZERO_GUARD * np.maximum(flat, 1.0))):
                raise SingularPointError("log zeta requested at a tabulated zero on the critical line")
        re = np.log(np.abs(critical_Z(flat)))
        im = math.pi * S_of_t(flat, zeros)
        return _ret((re + 1j * im).reshape(arr.shape), scalar)
    return log_zeta_continued(sigma, t)


EM_BELOW = 300.0


def critical_Z(t):
    """Most accurate available Z: Euler-Maclaurin below ``EM_BELOW``, Riemann-Siegel above.

    Below t = 10 theta comes from log-gamma.
    """
    arr, scalar = _as_array(t)
    flat = arr.ravel()
    out = np.empty(flat.size)
    hi = flat >= EM_BELOW
    out[hi] = _rs_Z_arr(flat[hi], _RS)
    lo = ~hi
    if np.any(lo):
        v, _ = zeta_values(0.5, flat[lo])
        out[lo] = np.real(np.exp(1j * theta(flat[lo])) * v)
    return _ret(out.reshape(arr.shape), scalar)
