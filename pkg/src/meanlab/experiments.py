"""Drivers that build both sides of each identity or asymptotic and return an
:class:`ExperimentReport`.

Constants that the theory leaves implicit (O(1) sizes, corridor ends, the
constant in exp(-C W log W)) come from ``data/golden.json``, written by
``tools/calibrate_golden.py`` from runs at parameters other than the ones the
acceptance suite checks.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.special import sici

from . import polyeval as pe
from . import quadrature as quad
from . import zeros as zr
from .arith import EULER_GAMMA, ArithTables, c_k, prime_power_constant, prime_power_cosine_sum, prime_weight_sum
from .errors import CoverageError, DomainError, RangeError
from .weights import WeightSpec, fejer_weight
from .zeta_core import log_zeta, log_zeta_continued, theta

SCHEMA = 1


@lru_cache(maxsize=1)
def load_golden() -> dict:
    with resources.files("meanlab.data").joinpath("golden.json").open() as fh:
        return json.load(fh)


def golden(key: str) -> float:
    return float(load_golden()[key]["value"])


def golden_range(key: str) -> tuple[float, float]:
    lo, hi = load_golden()[key]["value"]
    return float(lo), float(hi)


# ----------------------------------------------------------------- report

def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


@dataclass
class ExperimentReport:
    name: str
    params: dict
    empirical: float
    components: dict
    error_budget: str
    runtime_s: float
    diagnostics: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    @property
    def theoretical(self) -> float:
        return float(sum(self.components.values())) if self.components else 0.0

    @property
    def ratio(self):
        th = self.theoretical
        return self.empirical / th if th != 0 else None

    def to_dict(self) -> dict:
        return _clean({
            "schema": SCHEMA,
            "name": self.name,
            "params": self.params,
            "components": self.components,
            "theoretical": self.theoretical,
            "empirical": self.empirical,
            "ratio": self.ratio,
            "error_budget": self.error_budget,
            "diagnostics": self.diagnostics,
            "artifacts": self.artifacts,
            "runtime_s": self.runtime_s,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _rng_times(T: float, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.sort(T + T * rng.random(n))


# ------------------------------------------------------- key proposition

def _rhs_key(t, sigma, vh, zeros, tol, L):
    # (1/2pi) int_{-1}^{1} log zeta(sigma + i(y + t)) Vhat(y) dy
    knots = [-1.0, 1.0]
    if L > 0:
        step = 2 * math.pi / L
        knots += list(np.arange(step, 1.0, step)) + list(-np.arange(step, 1.0, step))
    if sigma == 0.5:
        g = zeros.ordinates
        near = g[(g > t - 1) & (g < t + 1)] - t
        for y0 in near:
            lo = max(-1.0, y0 - 0.25)
            hi = min(1.0, y0 + 0.25)
            knots += list(quad.graded_edges(lo, y0, False, True)) + list(quad.graded_edges(y0, hi, True, False))
        f = lambda y: log_zeta(0.5, t + y, zeros, guard=False) * vh(y)
    else:
        f = lambda y: log_zeta_continued(sigma, t + y) * vh(y)
    val, _ = quad.adaptive(f, -1.0, 1.0, tol=tol, knots=np.unique(knots), floor=1e-3 * tol)
    return val / (2 * math.pi)


def check_key_prop(T: float, X: float, V: WeightSpec, sigma: float, n_samples: int, zeros,
                   tables: ArithTables, seed: int = 0, vhat=None, quad_tol: float = 1e-8) -> ExperimentReport:
    """Weighted von Mangoldt sum against the smoothed log zeta integral at random t in [T, 2T]."""
    t0 = time.perf_counter()
    if not 0.5 <= sigma <= 1.0:
        raise DomainError("sigma must lie in [1/2, 1]")
    if X > T ** (2 * V.m) or X < 2:
        raise RangeError("need 2 <= X <= T^(2m)")
    if sigma == 0.5:
        zeros.require(2 * T + 2)
    vh = vhat if vhat is not None else (lambda y: np.real(V.vhat(y)))
    spec = pe.weighted_vm(X, V, tables, sigma)
    ts = _rng_times(T, n_samples, seed)
    lhs = pe.evaluate(spec, ts)
    L = V.logX if vhat is None else 0.0
    rhs = np.array([_rhs_key(float(t), sigma, vh, zeros, quad_tol, L) for t in ts])
    diff = np.abs(lhs - rhs)
    m = V.m
    contour = X ** (1 - sigma) / T**m
    return ExperimentReport(
        name="keyprop",
        params={"T": T, "X": X, "sigma": sigma, "n_samples": n_samples, "seed": seed, "weight": V.label,
                "m": m, "quad_tol": quad_tol, "integration_range": [-1, 1]},
        empirical=float(np.max(diff)),
        components={},
        error_budget=f"O(1); contour term X^(1-sigma)/T^m = {contour:.3g}",
        runtime_s=time.perf_counter() - t0,
        diagnostics={"max_diff": float(np.max(diff)), "mean_diff": float(np.mean(diff)),
                     "t": ts, "lhs_re": lhs.real, "lhs_im": lhs.imag, "rhs_re": rhs.real, "rhs_im": rhs.imag},
    )


# ------------------------------------------------- log-derivative kernel

def fX(y, X: float):
    """f_X(y) = (X^{iy}(2 - iy log X) - 2 - iy log X) / (y^3 log X); f_X(0) = i (log X)^2 / 6."""
    L = math.log(X)
    y = np.asarray(y, dtype=np.float64)
    z = 1j * y * L
    small = np.abs(z) < 0.1
    zs = np.where(small, z, 0.0)
    # i L^2 sum_{n>=3} (n-2)/n! z^(n-3)
    ser = np.zeros(y.shape, dtype=np.complex128)
    for n in range(14, 2, -1):
        ser = ser * zs + (n - 2) / math.factorial(n)
    ser = 1j * L * L * ser
    yb = np.where(small, 1.0, y)
    zb = 1j * yb * L
    direct = (np.exp(zb) * (2 - zb) - 2 - zb) / (yb**3 * L)
    out = np.where(small, ser, direct)
    return out if out.ndim else complex(out)


def fX_fourier(x: float, X: float) -> complex:
    """int e^{-ixy} f_X(y) dy = 2 pi i x log(X/e^x) / log X on 0 < x < log X, else 0."""
    if X < 3:
        raise ValueError("X must be >= 3")
    L = math.log(X)
    if not 0 < x < L:
        return 0j
    return 2j * math.pi * x * (L - x) / L


def fX_fourier_truncated(x: float, X: float, Y: float, nodes: int = 16) -> complex:
    """The same transform integrated numerically over [-Y, Y] only.

    The gap to :func:`fX_fourier` is the truncation term, bounded by 4/Y
    since |f_X(y)| <= 2/y^2 + O(1/(|y|^3 log X)).
    """
    L = math.log(X)
    width = min(0.25, math.pi / (2 * (L + abs(x))))
    n = max(1, int(math.ceil(2 * Y / width)))
    y, w = quad.composite_nodes(np.linspace(-Y, Y, n + 1), nodes)
    return complex(np.sum(w * np.exp(-1j * x * y) * fX(y, X)))


def _S_signed(t, zeros):
    # S(-u) = -S(u); S itself is N(t) - theta(t)/pi - 1
    t = np.asarray(t, dtype=np.float64)
    a = np.abs(t)
    s = zeros.count(a) - theta(a) / math.pi - 1.0
    return np.sign(t) * s


def _piece_nodes(a: float, b: float, breaks: np.ndarray, width: float, nodes: int):
    """Gauss-Legendre nodes on [a, b], split at ``breaks`` and into panels no wider than ``width``."""
    edges = np.unique(np.concatenate([[a, b], breaks[(breaks > a) & (breaks < b)]]))
    pieces = [edges[:1]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((hi - lo) / width)))
        pieces.append(np.linspace(lo, hi, k + 1)[1:])
    return quad.composite_nodes(np.concatenate(pieces), nodes)


def check_logderiv_conv(T: float, X: float, n_samples: int, zeros, tables: ArithTables,
                        seed: int = 0, nodes: int = 16) -> ExperimentReport:
    """Log-derivative polynomial against int S(t + y) f_X(y) dy over |y| <= log T / log log T."""
    t0 = time.perf_counter()
    if X > T**4 or X < 3:
        raise RangeError("need 3 <= X <= T^4")
    Y = math.log(T) / math.log(math.log(T))
    zeros.require(2 * T + math.log(T))
    ts = _rng_times(T, n_samples, seed)
    lhs = pe.evaluate(pe.logderiv(X, tables), ts)
    L = math.log(X)
    width = min(0.25, math.pi / (2 * L))
    g = zeros.ordinates
    rhs = np.empty(ts.size, dtype=np.complex128)
    for i, t in enumerate(ts):
        near = g[(g > t - Y) & (g < t + Y)] - t
        y, w = _piece_nodes(-Y, Y, np.concatenate([near, [0.0]]), width, nodes)
        rhs[i] = np.sum(w * _S_signed(t + y, zeros) * fX(y, X))
    diff = np.abs(lhs - rhs)
    return ExperimentReport(
        name="logderiv-conv",
        params={"T": T, "X": X, "n_samples": n_samples, "seed": seed, "Y": Y, "nodes": nodes, "panel_width": width},
        empirical=float(np.max(diff)),
        components={},
        error_budget="O(1) + O(X^(1/2)/(t^2 log X)) + O((log T)^2/T)",
        runtime_s=time.perf_counter() - t0,
        diagnostics={"max_diff": float(np.max(diff)), "mean_diff": float(np.mean(diff)), "t": ts,
                     "lhs_abs_mean": float(np.mean(np.abs(lhs)))},
    )


# --------------------------------------------------------------- moments

def _main_sum(T: float, theta_: float, k: float, V, tables: ArithTables) -> tuple[float, float]:
    Y = T ** (theta_ / k)
    if Y < 2:
        return Y, 0.0
    return Y, prime_weight_sum(Y, V, 2, tables)


def moment_budget(T: float, k: float, C: float) -> float:
    return T * (C * k) ** (4 * k) * math.log(math.log(T)) ** (k - 0.5)


def moment_report(T: float, X: float, two_k: int, part: str, theta: float = 0.25, V: WeightSpec | None = None,
                  tables: ArithTables | None = None, count: int | None = None, cache_dir=None,
                  C_budget: float | None = None) -> ExperimentReport:
    """int_T^{2T} (part of the weighted sum)^{2k} dt against k! T S_V^k or c_k T S_V^k."""
    t0 = time.perf_counter()
    if part not in ("re", "im", "abs"):
        raise ValueError("part must be 're', 'im' or 'abs'")
    if part == "abs" and two_k % 2:
        raise ValueError("two_k must be even for part='abs'")
    V = V if V is not None else fejer_weight(X)
    if X > T ** (2 * V.m):
        raise RangeError("X exceeds T^(2m)")
    k = two_k / 2
    spec = pe.weighted_vm(X, V, tables)
    count = count or pe.grid_count(T, spec.logX, two_k)
    sp = pe.eval_grid(spec, T, count, cache_dir=cache_dir)
    mp, mp_err = pe.mean_power(sp, two_k, part, with_error=True)
    Y, S = _main_sum(T, theta, k, V, tables)
    if part == "abs":
        coef = float(math.factorial(int(k)))
    else:
        coef = float(c_k(two_k))
    main = coef * T * S**k
    C = C_budget if C_budget is not None else golden("moment_budget_C")
    budget = moment_budget(T, k, C)
    emp = T * mp
    return ExperimentReport(
        name="moments",
        params={"T": T, "X": X, "two_k": two_k, "part": part, "theta": theta, "weight": V.label,
                "count": count, "dt": sp.dt, "main_sum_cutoff": Y, "C_budget": C},
        empirical=emp,
        components={"main": main},
        error_budget=f"T (C k)^(4k) (log log T)^(k-1/2) with C = {C:.4g}: {budget:.6g}",
        runtime_s=time.perf_counter() - t0,
        diagnostics={"S_V": S, "coefficient": coef, "budget": budget, "abs_deviation": abs(emp - main),
                     "within_budget": abs(emp - main) <= budget, "quadrature_error": T * mp_err},
    )


def logderiv_main_terms(T: float, X: float, zeros, tables: ArithTables) -> dict:
    L = math.log(X)
    p = tables.primes_upto(min(T, X)).astype(np.float64)
    lp = np.log(p)
    prime = T * math.fsum(lp**2 / p * (1 - lp / L) ** 2)
    fterm = 0.0
    parts = {}
    for t, sgn in ((2 * T, 1.0), (T, -1.0)):
        if X >= t:
            val = t * math.log(t) ** 2 * zr.F_poly_integral(zeros, t, L)
        else:
            val = 0.0
        parts[f"F_at_{t:g}"] = val
        fterm += sgn * val
    return {"prime_sum": prime, "F_term": fterm, **{"parts": parts}}


def logderiv_moment_report(T: float, X: float, zeros, tables: ArithTables, count: int | None = None,
                           cache_dir=None) -> ExperimentReport:
    """Mean square of the log-derivative polynomial against its prime-sum and F(u, t) terms."""
    t0 = time.perf_counter()
    if X > T**4:
        raise RangeError("X exceeds T^4")
    if X >= T:
        zeros.require(2 * T)
    spec = pe.logderiv(X, tables)
    count = count or pe.grid_count(T, spec.logX, 2)
    sp = pe.eval_grid(spec, T, count, cache_dir=cache_dir)
    mp, mp_err = pe.mean_power(sp, 2, "abs", with_error=True)
    emp = T * mp
    mt = logderiv_main_terms(T, X, zeros, tables)
    log_T = math.log(T)
    p = tables.primes_upto(T).astype(np.float64)
    return ExperimentReport(
        name="logderiv-moment",
        params={"T": T, "X": X, "count": count, "dt": sp.dt},
        empirical=emp,
        components={"prime_sum": mt["prime_sum"], "F_term": mt["F_term"]},
        error_budget=f"o(T (log T)^2); T (log T)^2 = {T * log_T**2:.6g}",
        runtime_s=time.perf_counter() - t0,
        diagnostics={"F_parts": mt["parts"], "corollary_ratio": emp / (T * log_T**2),
                     "prime_sum_upper": T * math.fsum(np.log(p) ** 2 / p),
                     "quadrature_error": T * mp_err},
    )


# ------------------------------------------------------- S correlations

def c_constant(y1: float, y2: float, tables: ArithTables) -> float:
    """c(y1, y2) with weights 1/(m p^m) in the first prime sum and 1/(m^2 p^m) in the second."""
    d = y1 - y2
    first = math.cos(d * math.log(2)) * (math.log(math.log(2)) + EULER_GAMMA + prime_power_constant(1e-12))
    second, _ = prime_power_cosine_sum(d, tables)
    return first + second


def log_cos_integral(delta: float, T: float) -> float:
    """int_{log 2}^{log T} cos(u delta)/u du."""
    a, b = math.log(2), math.log(T)
    if delta == 0:
        return math.log(b) - math.log(a)
    _, ci_b = sici(abs(delta) * b)
    _, ci_a = sici(abs(delta) * a)
    return float(ci_b - ci_a)


def S_product_integral(T: float, y1: float, y2: float, zeros, nodes: int = 8) -> float:
    """int_0^T S(t + y1) S(t + y2) dt, exact up to Gauss-Legendre on each smooth piece.

    Between consecutive jump points both factors are N - theta/pi - 1 with N
    constant, so each piece is a product of two smooth functions.
    """
    g = zeros.ordinates
    br = np.concatenate([g - y1, g - y2, -g - y1, -g - y2, [-y1, -y2]])
    t, w = _piece_nodes(0.0, T, br, 1.0, nodes)
    return math.fsum(w * _S_signed(t + y1, zeros) * _S_signed(t + y2, zeros))


RESIDUAL_FROM = 100.0


def decomposition_residual(T: float, x: float, zeros, tables: ArithTables, t_lo: float = RESIDUAL_FROM,
                           nodes: int = 6, width: float = 0.5) -> float:
    """(1/T) int_{t_lo}^T (S - P_x - Z_x)^2 dt, split at ordinates.

    Below t of order 100 the approximation carries errors that grow with x
    and do not decay in T, so the default lower limit skips that stretch.
    """
    g = zeros.ordinates
    t, w = _piece_nodes(t_lo, T, g, min(width, math.pi / (2 * math.log(x))), nodes)
    r = _S_signed(t, zeros) - pe.goldston_Px(t, x, tables) - pe.goldston_Zx(t, x, zeros)
    return math.fsum(w * r * r) / T


def s_correlation_report(T: float, y1: float, y2: float, zeros, tables: ArithTables, beta: float = 0.4,
                         U_max: float = 64.0, residual: bool = True) -> ExperimentReport:
    """int_0^T S(t+y1) S(t+y2) dt against the three main terms of the correlation formula."""
    t0 = time.perf_counter()
    log_T = math.log(T)
    if max(abs(y1), abs(y2)) > log_T:
        raise RangeError("|y_j| must be <= log T")
    if not 0 < beta < 0.5:
        raise RangeError("beta must lie in (0, 1/2)")
    zeros.require(T + log_T + 1)
    d = y1 - y2
    scale = T / (2 * math.pi**2)
    emp = S_product_integral(T, y1, y2, zeros)
    I1 = log_cos_integral(d, T)
    I2, tail = zr.F_cos_integral(zeros, T, d, U_max)
    c = c_constant(y1, y2, tables)
    diag = {"log_integral": I1, "F_integral": I2, "c": c, "F_tail_bound": scale * tail,
            "error_terms": {"delta_sq": T * d * d / (1 + d * d), "delta_loglog": T * abs(d) * math.log(log_T)}}
    if residual:
        x = T**beta
        diag["x"] = x
        diag["residual"] = decomposition_residual(T, x, zeros, tables)
    return ExperimentReport(
        name="scorr",
        params={"T": T, "y1": y1, "y2": y2, "beta": beta, "U_max": U_max, "residual_from": RESIDUAL_FROM},
        empirical=emp,
        components={"log_integral": scale * I1, "F_integral": scale * I2, "c_term": scale * c},
        error_budget=(f"O(T d^2/(1+d^2)) + O(T |d| log log T) + o(T) with d = {d:g}"),
        runtime_s=time.perf_counter() - t0,
        diagnostics=diag,
    )


def k_kernel(u):
    """k(u) = (1/(2u) - (pi^2/2) cot(pi^2 u))^2 for |u| <= 1/(2 pi), 1/(4u^2) beyond; k(0) = 0."""
    u = np.asarray(u, dtype=np.float64)
    au = np.abs(u)
    inner = au <= 1 / (2 * math.pi)
    small = au < 1e-3
    us = np.where(inner & ~small, au, 0.1)
    z = math.pi**2 * us
    near = 1 / (2 * us) - 0.5 * math.pi**2 * np.cos(z) / np.sin(z)
    # series: pi^4 u/6 + pi^8 u^3/90 + 2 pi^12 u^5/1890
    ser = math.pi**4 * au / 6 + math.pi**8 * au**3 / 90 + 2 * math.pi**12 * au**5 / 1890
    safe = np.where(inner, 1.0, au)
    out = np.where(inner, np.where(small, ser, near) ** 2, 1 / (4 * safe**2))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- tails

def a_parameter(W: float, log_T: float) -> float:
    """The three-case parameter A; the first applicable case wins when ranges overlap."""
    l2 = math.log(log_T)
    l3 = math.log(l2)
    if W <= l2:
        return 0.5 * l3
    if W <= 0.5 * l2 * l3:
        return l2 / (2 * W) * l3
    return 1.0


def _tail_normalization(V: WeightSpec) -> tuple[float, bool]:
    y = np.linspace(-1, 1, 2001)
    vh = np.real(V.vhat(y))
    if np.all(vh >= 0):
        return float(V(0.0)), False
    warnings.warn("transform changes sign on [-1, 1]; using (1/2pi) int |Vhat| as the normalization")
    val, _ = quad.adaptive(lambda s: np.abs(np.real(V.vhat(s))), -1.0, 1.0, tol=1e-10)
    return val / (2 * math.pi), True


def tail_bound(W, log_T: float, eps: float, C: float):
    W = np.asarray(W, dtype=np.float64)
    l2 = math.log(log_T)
    return np.exp(-(1 - eps) * W**2 / l2) + np.exp(-C * W * np.log(W))


def _split_polys(T: float, A: float, W: float, tables: ArithTables):
    """Soundararajan-type pieces: primes up to Z and in (Z, Y] with Y = T^(A/W), Z = Y^(1/log log T)."""
    Y = T ** (A / W)
    Z = Y ** (1 / math.log(math.log(T)))
    out = []
    for lo, hi in ((1.0, Z), (Z, Y)):
        if hi < 2:
            out.append(None)
            continue
        p = tables.primes_upto(hi)
        p = p[p > lo]
        if not p.size:
            out.append(None)
            continue
        lp = np.log(p.astype(np.float64))
        lY = math.log(Y)
        a = np.exp(-(0.5 + 1 / (2 * lY)) * lp) * (lY - lp) / lY
        out.append(pe.DirichletSpec("sound_split", float(hi), p, a, {"lo": lo, "hi": hi}))
    return Y, Z, out


def _smoothed_abs(spec, T, dt, count, vh_y, vh_w):
    # g(t) = (1/2pi) int_{-1}^{1} |P(t + y)| Vhat(y) dy on the main grid, y on the same spacing
    m = (vh_y.size - 1) // 2
    if spec is None:
        return np.zeros(count + 1)
    ext = pe.eval_grid(spec, T - m * dt, count + 2 * m, span=dt * (count + 2 * m), spot_checks=2)
    f = np.abs(ext.values)
    return np.convolve(f, (vh_w)[::-1], mode="valid") / (2 * math.pi)


def tail_report(T: float, X: float, part: str, W_list, V: WeightSpec | None = None, tables: ArithTables | None = None,
                eps: float = 0.1, C_fit: float | None = None, count: int | None = None, cache_dir=None,
                safety: float = 3.0, csv_path=None) -> ExperimentReport:
    """Measure of large values of the weighted sum against the Gaussian-plus-exponential bound."""
    t0 = time.perf_counter()
    if part not in ("re", "im"):
        raise ValueError("part must be 're' or 'im'")
    V = V if V is not None else fejer_weight(X)
    log_T = math.log(T)
    l2 = math.log(log_T)
    W = np.sort(np.asarray(W_list, dtype=np.float64))
    if W[0] < math.sqrt(l2) * (1 - 1e-12):
        raise RangeError("W must be >= sqrt(log log T)")
    norm, remark = _tail_normalization(V)
    spec = pe.weighted_vm(X, V, tables)
    count = count or pe.grid_count(T, spec.logX, 1)
    sp = pe.eval_grid(spec, T, count, cache_dir=cache_dir)
    vals = sp.values.real if part == "re" else sp.values.imag
    # trapezoid measure on the grid
    wts = np.full(count + 1, sp.dt)
    wts[0] = wts[-1] = 0.5 * sp.dt
    emp = np.array([math.fsum(wts[vals >= w * norm]) / T for w in W])
    C = C_fit if C_fit is not None else golden("tail_C_fit")
    bnd = tail_bound(W, log_T, eps, C)
    # split statistics, one set per distinct A
    m = int(math.ceil(1.0 / sp.dt))
    ys = sp.dt * np.arange(-m, m + 1)
    inside = np.abs(ys) <= 1.0
    vh = np.where(inside, np.real(V.vhat(ys)), 0.0)
    vw = vh * sp.dt
    vw[0] *= 0.5
    vw[-1] *= 0.5
    split = []
    for w in W:
        A = a_parameter(float(w), log_T)
        Y, Z, polys = _split_polys(T, A, float(w), tables)
        g1 = _smoothed_abs(polys[0], T, sp.dt, count, ys, vw)
        g2 = _smoothed_abs(polys[1], T, sp.dt, count, ys, vw)
        W1 = w * (1 - 7 / (8 * A))
        split.append({"W": w, "A": A, "Y": Y, "Z": Z, "W1": W1,
                      "frac_g1": math.fsum(wts[g1 >= W1]) / T, "frac_g2": math.fsum(wts[g2 >= w / (8 * A)]) / T,
                      "g1_max": float(np.max(g1)), "g2_max": float(np.max(g2))})
    ratios = emp / bnd
    artifacts = []
    if csv_path is not None:
        with open(csv_path, "w") as fh:
            fh.write("W,empirical,bound\n")
            for a, b, c in zip(W, emp, bnd):
                fh.write(f"{a!r},{b!r},{c!r}\n")
        artifacts.append(str(csv_path))
    return ExperimentReport(
        name="tails",
        params={"T": T, "X": X, "part": part, "W": W, "eps": eps, "C_fit": C, "count": count, "dt": sp.dt,
                "weight": V.label, "normalization": norm, "remark_normalization": remark},
        empirical=float(np.max(ratios)),
        components={"safety_factor": safety},
        error_budget=f"exp(-(1-eps) W^2/log log T) + exp(-C W log W), eps = {eps}, C = {C:.4g}",
        runtime_s=time.perf_counter() - t0,
        diagnostics={"empirical_tail": emp, "bound": bnd, "ratio_to_bound": ratios, "split": split,
                     "monotone": bool(np.all(np.diff(emp) <= 0))},
        artifacts=artifacts,
    )
