"""The acceptance suite: ten numbered criteria sharing one resource context.

Each criterion returns a :class:`CriterionResult` whose checks carry the
measured value and the bound it was held to, so ``verify-all`` and the test
suite print the same lines.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import experiments as E
from . import polyeval as pe
from . import store
from . import zeros as zr
from .arith import c_k, multiplicative_f
from .weights import fejer_weight, sharp_weight

ZERO_HEIGHT = 20100.0  # covers 2T + 100 at T = 10^4
T_MAIN = 1e4


@dataclass
class Check:
    label: str
    value: object
    bound: str
    ok: bool


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    runtime_s: float = 0.0
    budget_s: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, label: str, value, bound: str, ok: bool) -> None:
        self.checks.append(Check(label, value, bound, bool(ok)))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} ({self.runtime_s:.1f} s)"

    def detail_lines(self) -> list[str]:
        out = []
        for c in self.checks:
            v = f"{c.value:.6g}" if isinstance(c.value, float) else str(c.value)
            out.append(f"    {'ok ' if c.ok else 'BAD'} {c.label}: {v} (need {c.bound})")
        return out

    def to_dict(self) -> dict:
        return E._clean({"number": self.number, "title": self.title, "passed": self.passed,
                         "runtime_s": self.runtime_s, "budget_s": self.budget_s,
                         "checks": [c.__dict__ for c in self.checks]})


class Context:
    """Lazily built tables shared by all criteria of one run."""

    def __init__(self, cache_dir=None, zeros_path=None):
        self.cache_dir = cache_dir
        self.zeros_path = zeros_path
        self.started = time.perf_counter()
        self._zeros = None

    def zeros(self, height: float = ZERO_HEIGHT) -> zr.ZeroTable:
        if self._zeros is None or self._zeros.height < height:
            self._zeros = store.zero_table(max(height, ZERO_HEIGHT) if self.zeros_path is None else height,
                                           self.zeros_path, self.cache_dir)
        return self._zeros

    def tables(self, limit: float):
        return store.arith_tables(limit)

    def grid_cache(self):
        return store.cache_root(self.cache_dir) / "grids"


def load_oracles() -> dict:
    with resources.files("meanlab.data").joinpath("oracle_values.json").open() as fh:
        return json.load(fh)


def _timed(number: int, title: str, budget: float | None):
    def deco(fn):
        def run(ctx: Context) -> CriterionResult:
            res = CriterionResult(number, title, budget_s=budget)
            t0 = time.perf_counter()
            fn(ctx, res)
            res.runtime_s = time.perf_counter() - t0
            if budget is not None:
                res.add("runtime_s", res.runtime_s, f"< {budget:g}", res.runtime_s < budget)
            return res
        run.__name__ = fn.__name__
        run.number = number
        return run
    return deco


# ------------------------------------------------------------------ criteria

@_timed(1, "zero engine: first 100 zeros, certified table to 5000", 120.0)
def criterion_1(ctx: Context, res: CriterionResult) -> None:
    orc = load_oracles()
    zt = zr.locate_zeros(5000.0)
    first = zt.ordinates[:100]
    dev = float(np.max(np.abs(first - np.asarray(orc["first_zeros"]))))
    res.add("max |gamma - oracle| over first 100", dev, "<= 1e-6", dev <= 1e-6)
    res.add("certified", zt.certified, "True", zt.certified)
    res.add("count to 5000", len(zt), f"== {orc['N_5000']}", len(zt) == orc["N_5000"])


@_timed(2, "pair-correlation shape at T=1e4", 60.0)
def criterion_2(ctx: Context, res: CriterionResult) -> None:
    zt = ctx.zeros()
    T = T_MAIN
    us = np.round(np.arange(1, 11) * 0.1, 10)
    F = zr.pair_correlation_F(us, zt, T)
    Fm = zr.pair_correlation_F(-us, zt, T)
    target = us + T ** (-2 * us) * math.log(T)
    dev = float(np.max(np.abs(F - target)))
    corridor = E.golden("F_shape_corridor")
    res.add("max |F(u) - (u + T^-2u log T)|", dev, f"<= {corridor:g}", dev <= corridor)
    res.add("min F(u)", float(np.min(F)), ">= 0", np.min(F) >= 0)
    res.add("F(-u) == F(u)", bool(np.array_equal(F, Fm)), "bit-exact", np.array_equal(F, Fm))


@_timed(3, "unit integrals of F at T=1e4", None)
def criterion_3(ctx: Context, res: CriterionResult) -> None:
    zt = ctx.zeros()
    for b in range(4):
        v = zr.F_unit_integral(b, zt, T_MAIN)
        res.add(f"int_{b}^{b + 1} F", v, "in (0.2, 4)", 0.2 < v < 4)


@_timed(4, "key proposition O(1) contract", 600.0)
def criterion_4(ctx: Context, res: CriterionResult) -> None:
    zt = ctx.zeros()
    C = E.golden("keyprop_C")
    maxima = []
    for T in (1e3, 2e3):
        X = T * T
        r = E.check_key_prop(T, X, fejer_weight(X), 0.5, 64, zt, ctx.tables(X), seed=0)
        maxima.append(r.empirical)
        res.add(f"max |LHS - RHS| at T={T:g}", r.empirical, f"<= {C:g}", r.empirical <= C)
    res.add("growth max(2e3)/max(1e3)", maxima[1] / maxima[0], "<= 2", maxima[1] <= 2 * maxima[0])


@_timed(5, "moments theorem at T=1e4, X=T^1.5", 900.0)
def criterion_5(ctx: Context, res: CriterionResult) -> None:
    T = T_MAIN
    X = T**1.5
    tb = ctx.tables(X)
    r = E.moment_report(T, X, 2, "abs", V=fejer_weight(X), tables=tb, cache_dir=ctx.grid_cache())
    res.add("k=1 abs ratio", r.ratio, "in [0.5, 2]", 0.5 <= r.ratio <= 2)
    r3 = E.moment_report(T, X, 3, "re", V=fejer_weight(X), tables=tb, cache_dir=ctx.grid_cache())
    b = r3.diagnostics["budget"]
    res.add("|odd moment| (2k=3, re)", abs(r3.empirical), f"<= {b:.6g}", abs(r3.empirical) <= b)


@_timed(6, "log-derivative mean square at T=1e4", 1200.0)
def criterion_6(ctx: Context, res: CriterionResult) -> None:
    T = T_MAIN
    zt = ctx.zeros()
    r = E.logderiv_moment_report(T, T**0.8, zt, ctx.tables(T**0.8), cache_dir=ctx.grid_cache())
    res.add("F-term at X=T^0.8", r.components["F_term"], "== 0", r.components["F_term"] == 0)
    res.add("ratio at X=T^0.8", r.ratio, "in [0.6, 1.6]", 0.6 <= r.ratio <= 1.6)
    r2 = E.logderiv_moment_report(T, T**2, zt, ctx.tables(T**2), cache_dir=ctx.grid_cache())
    lo, hi = E.golden_range("corollary_corridor")
    cr = r2.diagnostics["corollary_ratio"]
    res.add("F-term present at X=T^2", r2.components["F_term"], "!= 0", r2.components["F_term"] != 0)
    res.add("empirical/(T log^2 T) at X=T^2", cr, f"in [{lo:g}, {hi:g}]", lo <= cr <= hi)


@_timed(7, "S correlations at T=1e4", 600.0)
def criterion_7(ctx: Context, res: CriterionResult) -> None:
    T = T_MAIN
    zt = ctx.zeros()
    tb = ctx.tables(1e6)
    C = E.golden("scorr_residual_C")
    for y1, y2 in ((0.0, 0.0), (0.3, 0.0)):
        r = E.s_correlation_report(T, y1, y2, zt, tb, beta=0.4, residual=(y1 == y2))
        res.add(f"ratio at (y1, y2)=({y1:g}, {y2:g})", r.ratio, "in [0.7, 1.4]", 0.7 <= r.ratio <= 1.4)
        if y1 == y2:
            rv = r.diagnostics["residual"]
            res.add("residual int (S - P_x - Z_x)^2 / T, beta=0.4", rv, f"<= {C:g}", rv <= C)


@_timed(8, "large deviations at T=1e4, X=T^2", 900.0)
def criterion_8(ctx: Context, res: CriterionResult) -> None:
    T = T_MAIN
    X = T * T
    l2 = math.log(math.log(T))
    W = math.sqrt(l2) * np.linspace(1.0, 4.0, 13)
    for part in ("re", "im"):
        r = E.tail_report(T, X, part, W, tables=ctx.tables(X), cache_dir=ctx.grid_cache())
        emp = np.asarray(r.diagnostics["empirical_tail"])
        bnd = np.asarray(r.diagnostics["bound"])
        worst = float(np.max(emp / (3 * bnd)))
        res.add(f"max tail/(3 bound), {part}", worst, "<= 1", worst <= 1)
        res.add(f"tail monotone in W, {part}", r.diagnostics["monotone"], "True", r.diagnostics["monotone"])


@_timed(9, "kernel identities", None)
def criterion_9(ctx: Context, res: CriterionResult) -> None:
    from fractions import Fraction
    tol = 1e-9
    ck = {n: c_k(n) for n in range(1, 9)}
    want = {n: (Fraction(math.factorial(n), 2**n * math.factorial(n // 2)) if n % 2 == 0 else Fraction(0))
            for n in range(1, 9)}
    res.add("c_k table, 2k = 1..8", ck == want, "exact", ck == want)
    fv = (multiplicative_f([1]), multiplicative_f([2]), multiplicative_f([4]), multiplicative_f([2, 2]))
    res.add("f(p), f(p^2), f(p^4), f(p^2 q^2)", [str(x) for x in fv], "0, 1/2, 3/8, 1/4",
            fv == (0, Fraction(1, 2), Fraction(3, 8), Fraction(1, 4)))
    res.add("k(1)", E.k_kernel(1.0), "1/4", abs(E.k_kernel(1.0) - 0.25) <= tol)
    u0 = 1 / (2 * math.pi)
    jump = abs(E.k_kernel(u0) - E.k_kernel(np.nextafter(u0, 1.0)))
    res.add("k continuity at 1/(2 pi)", jump, f"<= {tol:g}", jump <= tol)
    res.add("k(0)", E.k_kernel(0.0), "0", abs(E.k_kernel(0.0)) <= tol)
    res.add("f(0)", float(pe.goldston_f(0.0)), "1", abs(pe.goldston_f(0.0) - 1) <= tol)
    res.add("f(1)", float(pe.goldston_f(1.0)), "0", abs(pe.goldston_f(1.0)) <= tol)
    res.add("h(0)", float(pe.h_kernel(0.0)), "0", abs(pe.h_kernel(0.0)) <= tol)
    Xf = 1e6
    L = math.log(Xf)
    ends = [abs(E.fX_fourier(x, Xf)) for x in (0.0, L, -1.0)]
    res.add("fX_fourier at 0, log X, -1", max(ends), "0", max(ends) <= tol)
    mid = abs(E.fX_fourier(L / 2, Xf) - 1j * math.pi * L / 2)
    res.add("fX_fourier(log X / 2) - pi i log X / 2", mid, f"<= {tol:g}", mid <= tol)
    f0 = abs(E.fX(0.0, Xf) - 1j * L * L / 6)
    res.add("f_X(0) - i (log X)^2 / 6", f0, f"<= {tol:g}", f0 <= tol)


@_timed(10, "engineering: rotor contract, short-sum calibration, table round trip", None)
def criterion_10(ctx: Context, res: CriterionResult) -> None:
    import tempfile
    from pathlib import Path
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(10):
        T = float(10 ** rng.uniform(3, 4))
        X = float(10 ** rng.uniform(3, 5.5))
        spec = pe.weighted_vm(X, fejer_weight(X), ctx.tables(X))
        count = pe.grid_count(T, spec.logX) * int(rng.integers(1, 3))
        sp = pe.eval_grid(spec, T, count, spot_checks=0)
        idx = rng.integers(0, count + 1, 16)
        exact = pe.evaluate(spec, sp.t[idx])
        worst = max(worst, float(np.max(np.abs(sp.values[idx] - exact) / np.maximum(np.abs(exact), 1.0))))
    res.add("rotor vs direct, 10 configs x 16 points", worst, "<= 1e-8 relative", worst <= 1e-8)
    T = T_MAIN
    X = T / 10
    tb = ctx.tables(X)
    spec = pe.weighted_vm(X, sharp_weight(X), tb, primes_only=True)
    sp = pe.eval_grid(spec, T, pe.grid_count(T, spec.logX, 2), spot_checks=2)
    p = tb.primes_upto(X).astype(np.float64)
    ratio = pe.mean_power(sp, 2, "abs") / math.fsum(1 / p)
    res.add("short-sum mean square / sum 1/p at X=T/10", ratio, "in [0.9, 1.1]", 0.9 <= ratio <= 1.1)
    zt = ctx.zeros()
    with tempfile.TemporaryDirectory() as d:
        f = Path(d) / "rt.ztbl"
        zr.save_table(zt, f)
        back = zr.load_table(f)
    same = back.height == zt.height and back.ordinates.tobytes() == zt.ordinates.tobytes()
    res.add("zero table round trip", same, "bit-exact", same)
    elapsed = time.perf_counter() - ctx.started
    res.add("suite wall clock so far", elapsed, "< 5400 s", elapsed < 5400)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(ctx: Context | None = None, only=None, echo=print) -> list[CriterionResult]:
    ctx = ctx or Context()
    out = []
    for crit in CRITERIA:
        if only and crit.number not in only:
            continue
        r = crit(ctx)
        if echo:
            echo(r.line())
            for ln in r.detail_lines():
                echo(ln)
        out.append(r)
    return out
