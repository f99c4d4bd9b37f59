"""Dirichlet polynomials over the von Mangoldt function.

Every polynomial here is stored as P(t) = sum_n a_n n^{-it} with real a_n
(any fixed real shift sigma is folded into a_n). Pointwise evaluation uses a
compensated direct sum; uniform grids over [T, 2T] use phase rotors.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numba as nb
import numpy as np
from scipy.special import digamma, polygamma, zeta

from .arith import ArithTables
from .errors import NumericError, RangeError, ResolutionGuardError
from .weights import WeightSpec


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class DirichletSpec:
    """Coefficients of P(t) = sum a_n n^{-it} over the integers ``ns``.

    ``X`` is the nominal length; the resolution guards use ``log X``.
    """

    kind: str
    X: float
    ns: np.ndarray
    coeffs: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ns = np.ascontiguousarray(self.ns, dtype=np.int64)
        a = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if ns.shape != a.shape or ns.ndim != 1:
            raise ValueError("ns and coeffs must be 1-D arrays of equal length")
        if ns.size and (ns[0] < 1 or np.any(np.diff(ns) <= 0)):
            raise ValueError("ns must be strictly increasing positive integers")
        if self.X < 1:
            raise ValueError("X must be >= 1")
        ns.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "coeffs", a)
        logn = np.log(ns.astype(np.float64))
        logn.setflags(write=False)
        object.__setattr__(self, "log_n", logn)

    @property
    def logX(self) -> float:
        return math.log(self.X)

    @property
    def size(self) -> int:
        return int(self.ns.size)

    def describe(self) -> dict:
        return {"kind": self.kind, "X": self.X, "terms": self.size, **self.params}

    def key(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.describe(), sort_keys=True, default=str).encode())
        h.update(self.ns.tobytes())
        h.update(self.coeffs.tobytes())
        return h.hexdigest()[:24]


def _support(X: float, tables: ArithTables, primes_only: bool):
    tables.check_covers(X)
    sl = tables.upto(X)
    n = np.asarray(tables.prime_powers[sl])
    lam = np.asarray(tables.log_p[sl])
    if primes_only:
        keep = np.isin(n, tables.primes_upto(X), assume_unique=True)
        n, lam = n[keep], lam[keep]
    return n, lam


def weighted_vm(X: float, V: WeightSpec, tables: ArithTables, sigma: float = 0.5,
                primes_only: bool = False) -> DirichletSpec:
    """a_n = Lambda(n) V(log n) / (n^sigma log n) for 2 <= n <= X."""
    if X < 2:
        raise RangeError("X must be >= 2")
    n, lam = _support(X, tables, primes_only)
    logn = np.log(n.astype(np.float64))
    a = lam * V(logn) / logn * np.exp(-sigma * logn)
    return DirichletSpec("weighted_vm", float(X), n, a,
                         {"weight": V.label, "weight_logX": V.logX, "sigma": sigma, "primes_only": primes_only})


def logderiv(X: float, tables: ArithTables, sigma: float = 0.5) -> DirichletSpec:
    """a_n = Lambda(n) (1 - log n / log X) / n^sigma for n <= X."""
    if X < 2:
        raise RangeError("X must be >= 2")
    n, lam = _support(X, tables, False)
    logn = np.log(n.astype(np.float64))
    a = lam * (1.0 - logn / math.log(X)) * np.exp(-sigma * logn)
    return DirichletSpec("logderiv", float(X), n, a, {"sigma": sigma})


def lambda_x(n, x: float, lam) -> np.ndarray:
    """Selberg's Lambda_x(n): Lambda(n) up to x, Lambda(n) log(x^2/n)/log x on (x, x^2]."""
    n = np.asarray(n, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    lx = math.log(x)
    w = np.where(n <= x, 1.0, np.clip((2.0 * lx - np.log(n)) / lx, 0.0, None))
    return np.where(n <= x * x, lam * w, 0.0)


def selberg(x: float, tables: ArithTables) -> DirichletSpec:
    """a_n = Lambda_x(n) / (n^{1/2 + 1/log x} log n) for n <= x^2."""
    if x < 2:
        raise RangeError("x must be >= 2")
    X = x * x
    n, lam = _support(X, tables, False)
    logn = np.log(n.astype(np.float64))
    a = lambda_x(n, x, lam) / logn * np.exp(-(0.5 + 1.0 / math.log(x)) * logn)
    return DirichletSpec("selberg", float(X), n, a, {"x": x})


def goldston_f(u):
    """f(u) = (pi/2) u cot(pi u/2) with f(0) = 1 and f(1) = 0."""
    u = np.asarray(u, dtype=np.float64)
    safe = np.where((u == 0) | (u == 1), 0.5, u)
    out = 0.5 * math.pi * safe / np.tan(0.5 * math.pi * safe)
    out = np.where(u == 0, 1.0, np.where(u == 1, 0.0, out))
    return out if out.ndim else float(out)


def goldston(x: float, tables: ArithTables) -> DirichletSpec:
    """a_n = Lambda(n) f(log n/log x) / (sqrt(n) log n), so that P_x = Im P / pi."""
    if x < 4:
        raise RangeError("x must be >= 4")
    n, lam = _support(x, tables, False)
    logn = np.log(n.astype(np.float64))
    a = lam * goldston_f(logn / math.log(x)) / (np.sqrt(n.astype(np.float64)) * logn)
    return DirichletSpec("goldston", float(x), n, a, {"x": x})


def from_coefficients(ns, coeffs, X: float | None = None, label: str = "custom") -> DirichletSpec:
    ns = np.asarray(ns, dtype=np.int64)
    return DirichletSpec(label, float(X if X is not None else max(int(ns.max()), 1)), ns, coeffs)


# ------------------------------------------------------------ direct sums

@nb.njit(cache=True)
def _direct(logn, a, ts):
    out = np.empty(ts.size, dtype=np.complex128)
    for j in range(ts.size):
        t = ts[j]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for k in range(a.size):
            ph = t * logn[k]
            x = a[k] * math.cos(ph)
            y = -a[k] * math.sin(ph)
            # Neumaier on both parts
            s = sr + x
            if abs(sr) >= abs(x):
                cr += (sr - s) + x
            else:
                cr += (x - s) + sr
            sr = s
            s = si + y
            if abs(si) >= abs(y):
                ci += (si - s) + y
            else:
                ci += (y - s) + si
            si = s
        out[j] = complex(sr + cr, si + ci)
    return out


def evaluate(spec: DirichletSpec, t):
    """P(t) by a compensated direct sum; scalar in, complex out."""
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = _direct(spec.log_n, spec.coeffs, np.ascontiguousarray(ts.ravel())).reshape(ts.shape)
    return out if np.ndim(t) else complex(out[0])


def eval_weighted_vm(t, X: float, V: WeightSpec, tables: ArithTables, sigma: float = 0.5):
    return evaluate(weighted_vm(X, V, tables, sigma), t)


def eval_logderiv(t, X: float, tables: ArithTables):
    return evaluate(logderiv(X, tables), t)


def goldston_Px(t, x: float, tables: ArithTables):
    """P_x(t) = -(1/pi) sum Lambda(n) sin(t log n) f(log n/log x) / (sqrt(n) log n)."""
    v = evaluate(goldston(x, tables), t)
    return np.imag(v) / math.pi if np.ndim(v) else v.imag / math.pi


def selberg_S_approx(t, x: float, tables: ArithTables):
    v = evaluate(selberg(x, tables), t)
    return np.imag(v) / math.pi if np.ndim(v) else v.imag / math.pi


# ---------------------------------------------------------- the h kernel

def h_inner(v):
    """int_0^inf u / ((u^2 + v^2) sinh u) du = pi/(2|v|) - beta(1 + |v|/pi).

    beta is Dirichlet's beta-type digamma difference; the identity follows
    from expanding 1/sinh u in exponentials and is checked against direct
    quadrature in the tests.
    """
    v = np.abs(np.asarray(v, dtype=np.float64))
    if np.any(v == 0):
        raise ValueError("inner integral diverges at v = 0")
    x = 1.0 + v / math.pi
    out = math.pi / (2 * v) - 0.5 * (digamma(0.5 * (x + 1)) - digamma(0.5 * x))
    return out if out.ndim else float(out)


def h_kernel(v):
    """h(v) = sin(v) * inner(v), odd, with the midpoint value h(0) = 0 at its jump."""
    v = np.asarray(v, dtype=np.float64)
    nz = v != 0
    out = np.zeros(v.shape)
    out[nz] = np.sin(v[nz]) * h_inner(v[nz])
    return out if out.ndim else float(out)


#: sup (1 + v^2) |h(v)|, the envelope constant (checked on a dense grid in tests)
H_ENVELOPE = 2.5
H_TRUNCATION = 1e-10
H_WINDOW = math.sqrt(H_ENVELOPE / H_TRUNCATION)

# beta(1 + v/pi) tabulated with exact derivatives for cubic Hermite interpolation
_H_VMAX = 50.0
_H_STEP = 1.0 / 128
_hv = np.arange(0.0, _H_VMAX + 2 * _H_STEP, _H_STEP)
_hx = 1.0 + _hv / math.pi
_H_G = 0.5 * (digamma(0.5 * (_hx + 1)) - digamma(0.5 * _hx))
_H_DG = 0.25 * (polygamma(1, 0.5 * (_hx + 1)) - polygamma(1, 0.5 * _hx)) / math.pi
# large-v expansion: inner(v) ~ sum_k (-1)^k m_k / v^(2k+2), m_k = int u^(2k+1)/sinh u du
_H_ASYMP = np.array([(-1) ** k * 2.0 * math.factorial(2 * k + 1) * (1 - 2.0 ** (-2 * k - 2))
                     * float(zeta(2 * k + 2))
                     for k in range(12)])


@nb.njit(inline="always")
def _h_fast(v, G, DG, asym):
    av = abs(v)
    if av == 0.0:
        return 0.0
    if av >= 50.0:
        iv2 = 1.0 / (av * av)
        acc = 0.0
        for k in range(asym.size - 1, -1, -1):
            acc = acc * iv2 + asym[k]
        inner = acc * iv2
    else:
        pos = av * 128.0
        i = int(pos)
        s = pos - i
        h = 1.0 / 128.0
        s2 = s * s
        s3 = s2 * s
        g = ((2 * s3 - 3 * s2 + 1) * G[i] + (s3 - 2 * s2 + s) * h * DG[i]
             + (-2 * s3 + 3 * s2) * G[i + 1] + (s3 - s2) * h * DG[i + 1])
        inner = math.pi / (2.0 * av) - g
    return math.sin(v) * inner


@nb.njit(cache=True)
def _zx_kernel(ts, gam, logx, window, G, DG, asym):
    out = np.empty(ts.size)
    n = gam.size
    for j in range(ts.size):
        t = ts[j]
        lo = np.searchsorted(gam, t - window / logx)
        hi = np.searchsorted(gam, t + window / logx)
        acc = 0.0
        comp = 0.0
        for k in range(lo, hi):
            y = _h_fast((t - gam[k]) * logx, G, DG, asym) - comp
            s = acc + y
            comp = (s - acc) - y
            acc = s
        # conjugate zeros at -gamma
        hi2 = np.searchsorted(gam, window / logx - t)
        for k in range(0, min(hi2, n)):
            y = _h_fast((t + gam[k]) * logx, G, DG, asym) - comp
            s = acc + y
            comp = (s - acc) - y
            acc = s
        out[j] = acc / math.pi
    return out


def h_kernel_fast(v):
    """Interpolated h used inside the zero sums (agrees with :func:`h_kernel` to ~1e-11)."""
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    out = _h_vec(np.ascontiguousarray(v.ravel()), _H_G, _H_DG, _H_ASYMP).reshape(v.shape)
    return out


@nb.njit(cache=True)
def _h_vec(vs, G, DG, asym):
    out = np.empty(vs.size)
    for i in range(vs.size):
        out[i] = _h_fast(vs[i], G, DG, asym)
    return out


ZX_MARGIN = 50.0


def goldston_Zx(t, x: float, zeros):
    """Z_x(t) = (1/pi) sum_gamma h((t - gamma) log x) over gamma = +-tabulated ordinates.

    Terms with |v| beyond H_WINDOW (where the envelope drops below 1e-10) are
    dropped. The table must be certified to t + 50.
    """
    if x < 4:
        raise RangeError("x must be >= 4")
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    zeros.require(float(np.max(ts)) + ZX_MARGIN)
    out = _zx_kernel(np.ascontiguousarray(ts.ravel()), zeros.ordinates, math.log(x), H_WINDOW,
                     _H_G, _H_DG, _H_ASYMP).reshape(ts.shape)
    return out if np.ndim(t) else float(out[0])


# ------------------------------------------------------------- grid path

@dataclass(frozen=True)
class SampledPolynomial:
    """P on the closed grid t_j = T + j dt, j = 0..count, with dt = span/count."""

    T: float
    span: float
    count: int
    dt: float
    values: np.ndarray
    spec: dict
    logX: float

    @property
    def t(self) -> np.ndarray:
        return self.T + self.dt * np.arange(self.count + 1)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re", "im"])
            for tj, v in zip(self.t, self.values):
                w.writerow([repr(float(tj)), repr(float(v.real)), repr(float(v.imag))])


ROTOR_BLOCK = 512       # fine steps per block (fine rotor renormalization period)
ROTOR_RESEED = 64       # coarse steps between exact re-seeds
N_CHUNK = 4096
ROW_CAP = 1024
EVAL_GUARD = math.pi / 4
MEAN_GUARD = math.pi / 2


@nb.njit(cache=True)
def _fine_rotor(logn, dt, B):
    """W[k, i] = exp(-i * i dt log n_k), advanced multiplicatively, renormalized every 512 steps."""
    n = logn.size
    W = np.empty((n, B), dtype=np.complex128)
    for k in range(n):
        sr = math.cos(dt * logn[k])
        si = -math.sin(dt * logn[k])
        rr = 1.0
        ri = 0.0
        for i in range(B):
            W[k, i] = complex(rr, ri)
            nr = rr * sr - ri * si
            ri = rr * si + ri * sr
            rr = nr
            if (i + 1) % 512 == 0:
                m = 1.0 / math.sqrt(rr * rr + ri * ri)
                rr *= m
                ri *= m
    return W


@nb.njit(cache=True)
def _coarse_rotor(logn, a, t0, step, J, reseed):
    """U[j, k] = a_k exp(-i (t0 + j step) log n_k), exact seed every ``reseed`` rows."""
    n = logn.size
    U = np.empty((J, n), dtype=np.complex128)
    for k in range(n):
        sr = math.cos(step * logn[k])
        si = -math.sin(step * logn[k])
        rr = 0.0
        ri = 0.0
        for j in range(J):
            if j % reseed == 0:
                ph = (t0 + j * step) * logn[k]
                rr = math.cos(ph)
                ri = -math.sin(ph)
            U[j, k] = complex(a[k] * rr, a[k] * ri)
            nr = rr * sr - ri * si
            ri = rr * si + ri * sr
            rr = nr
    return U


def _cache_dir(cache_dir):
    d = cache_dir if cache_dir is not None else os.environ.get("MEANLAB_CACHE")
    return Path(d) if d else None


def _grid_rotor(spec: DirichletSpec, T: float, dt: float, npts: int) -> np.ndarray:
    B = ROTOR_BLOCK
    J_total = -(-npts // B)
    out = np.empty(J_total * B, dtype=np.complex128)
    for r0 in range(0, J_total, ROW_CAP):
        J = min(ROW_CAP, J_total - r0)
        acc = np.zeros((J, B), dtype=np.complex128)
        comp = np.zeros((J, B), dtype=np.complex128)
        t0 = T + r0 * B * dt
        for c0 in range(0, spec.size, N_CHUNK):
            sl = slice(c0, c0 + N_CHUNK)
            logn = np.ascontiguousarray(spec.log_n[sl])
            U = _coarse_rotor(logn, np.ascontiguousarray(spec.coeffs[sl]), t0, B * dt, J, ROTOR_RESEED)
            W = _fine_rotor(logn, dt, B)
            part = U @ W
            # Kahan step, ascending chunk order -> reproducible for fixed chunk size
            y = part - comp
            s = acc + y
            comp = (s - acc) - y
            acc = s
        out[r0 * B:(r0 + J) * B] = acc.ravel()
    return out[:npts]


def eval_grid(spec: DirichletSpec, T: float, count: int, span: float | None = None,
              cache_dir=None, spot_checks: int = 4, seed: int = 0) -> SampledPolynomial:
    """P on count + 1 equispaced points of [T, T + span] (span defaults to T).

    Phases are split as exp(-i t log n) = exp(-i t_block log n) exp(-i s log n)
    with both factors advanced by multiplicative rotors; each block is then a
    complex matrix product. ``spot_checks`` random grid points are compared
    with the direct sum, and a deviation above 1e-8 raises NumericError.
    Results are cached under ``cache_dir`` (or $MEANLAB_CACHE) when set.
    """
    count = int(count)
    if count < 2:
        raise ValueError("count must be >= 2")
    span = float(T if span is None else span)
    dt = span / count
    if dt * spec.logX > EVAL_GUARD:
        raise ResolutionGuardError(
            f"dt*log X = {dt * spec.logX:.4g} exceeds pi/4; use count >= {math.ceil(span * spec.logX / EVAL_GUARD)}")
    desc = {**spec.describe(), "T": T, "span": span, "count": count,
            "block": ROTOR_BLOCK, "chunk": N_CHUNK}
    cdir = _cache_dir(cache_dir)
    path = None
    if cdir is not None:
        key = hashlib.sha256((spec.key() + json.dumps(desc, sort_keys=True, default=str)).encode()).hexdigest()[:32]
        path = cdir / f"grid_{spec.kind}_{key}.npy"
        if path.exists():
            vals = np.load(path)
            vals.setflags(write=False)
            return SampledPolynomial(T, span, count, dt, vals, desc, spec.logX)
    vals = _grid_rotor(spec, T, dt, count + 1)
    if spot_checks:
        rng = np.random.default_rng(seed)
        idx = np.unique(np.concatenate([[0, count], rng.integers(0, count + 1, spot_checks)]))
        exact = evaluate(spec, T + dt * idx)
        dev = np.abs(vals[idx] - exact) / np.maximum(np.abs(exact), 1.0)
        if np.max(dev) > 1e-8:
            raise NumericError(f"rotor drift {np.max(dev):.3g} exceeds 1e-8")
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npy")
        np.save(tmp, vals)
        os.replace(tmp, path)
    vals.setflags(write=False)
    return SampledPolynomial(T, span, count, dt, vals, desc, spec.logX)


def grid_count(span: float, logX: float, factor: int = 1, multiple: int = 4) -> int:
    """Smallest count (a multiple of ``multiple``) meeting dt * factor * log X <= guard."""
    guard = EVAL_GUARD if factor == 1 else MEAN_GUARD / factor
    n = math.ceil(span * logX / guard) if logX > 0 else multiple
    return max(multiple, -(-n // multiple) * multiple)


def _part(values: np.ndarray, part: str) -> np.ndarray:
    if part == "re":
        return values.real
    if part == "im":
        return values.imag
    if part == "abs":
        return np.abs(values)
    raise ValueError("part must be 're', 'im' or 'abs'")


def _simpson(f: np.ndarray, h: float) -> float:
    w = np.full(f.size, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return h / 3.0 * math.fsum(w * f)


def mean_power(sp: SampledPolynomial, two_k: int, part: str = "abs", with_error: bool = False):
    """(1/span) int (part of P)^{2k} dt by composite Simpson on the grid.

    The error estimate is |S_h - S_2h|/15 from the half grid (count divisible
    by 4), else the Simpson/trapezoid gap.
    """
    if two_k < 1:
        raise ValueError("two_k must be >= 1")
    if sp.count % 2:
        raise ValueError("Simpson needs an even count")
    if sp.dt * two_k * sp.logX > MEAN_GUARD:
        raise ResolutionGuardError(
            f"dt*2k*log X = {sp.dt * two_k * sp.logX:.4g} exceeds pi/2 for 2k = {two_k}")
    if part == "abs" and two_k % 2 == 0:
        f = (sp.values.real ** 2 + sp.values.imag ** 2) ** (two_k // 2)
    else:
        f = _part(sp.values, part) ** two_k
    val = _simpson(f, sp.dt) / sp.span
    if not with_error:
        return val
    if sp.count % 4 == 0:
        coarse = _simpson(f[::2], 2 * sp.dt) / sp.span
        err = abs(val - coarse) / 15.0
    else:
        trap = sp.dt * (math.fsum(f) - 0.5 * (f[0] + f[-1])) / sp.span
        err = abs(val - trap)
    return val, err
