import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanlab import polyeval as pe
from meanlab.errors import CoverageError, RangeError, ResolutionGuardError
from meanlab.experiments import load_golden
from meanlab.weights import fejer_weight, sharp_weight


def test_single_term_weighted_vm(tables):
    V = fejer_weight(1e3)
    for t in (0.0, 3.7, 1e4):
        v = pe.eval_weighted_vm(t, 2.0, V, tables)
        assert abs(v - V(math.log(2)) * cmath.exp(-(0.5 + 1j * t) * math.log(2))) < 1e-15


def test_weighted_vm_positive_at_zero(tables):
    v = pe.eval_weighted_vm(0.0, 1e4, fejer_weight(1e4), tables)
    assert v.imag == 0 and v.real > 0


@settings(max_examples=25, deadline=None)
@given(st.floats(-1e5, 1e5))
def test_conjugate_symmetry(t):
    from meanlab import store
    tb = store.arith_tables(10**4)
    V = fejer_weight(1e4)
    for spec in (pe.weighted_vm(1e4, V, tb), pe.logderiv(1e4, tb), pe.goldston(1e3, tb), pe.selberg(50.0, tb)):
        a, b = pe.evaluate(spec, t), pe.evaluate(spec, -t)
        assert abs(a - b.conjugate()) <= 1e-12 * max(1.0, abs(a))


def test_logderiv_examples(tables, oracle):
    t = 2.5
    v = pe.eval_logderiv(t, 3.0, tables)
    ref = math.log(2) * cmath.exp(-(0.5 + 1j * t) * math.log(2)) * (1 - math.log(2) / math.log(3))
    assert abs(v - ref) < 1e-15
    w = pe.eval_logderiv(1e3, 1e5, tables)
    assert abs(w - complex(*oracle["logderiv_t1e3_X1e5"])) < 1e-10


def test_logderiv_fejer_relation(tables):
    """Multiplying the weighted-vM coefficients back by log n gives the log-derivative ones."""
    X = 1e4
    a = pe.weighted_vm(X, fejer_weight(X), tables)
    b = pe.logderiv(X, tables)
    assert np.array_equal(a.ns, b.ns)
    assert np.allclose(a.coeffs * a.log_n, b.coeffs, rtol=1e-14, atol=0)


def test_range_error():
    # a private table: the shared one may have been grown by earlier tests
    from meanlab.arith import build_tables
    with pytest.raises(RangeError):
        pe.eval_logderiv(1.0, 2e4, build_tables(10**4))


def test_goldston_f():
    assert pe.goldston_f(0.0) == 1.0
    assert pe.goldston_f(1.0) == 0.0
    assert pe.goldston_f(1e-8) == pytest.approx(1.0, abs=1e-15)
    assert pe.goldston_f(1 - 1e-9) == pytest.approx(0.0, abs=1e-8)


def test_goldston_Px_zero(tables):
    assert pe.goldston_Px(0.0, 100.0, tables) == 0.0
    with pytest.raises(RangeError):
        pe.goldston_Px(1.0, 3.0, tables)


def test_h_values(oracle):
    assert pe.h_kernel(0.0) == 0.0
    for v, key in ((1.0, "h_inner_1"), (0.1, "h_inner_0p1"), (7.0, "h_inner_7")):
        assert pe.h_inner(v) == pytest.approx(oracle[key], rel=1e-12)


def test_h_inner_quadrature():
    from scipy.integrate import quad
    for v in (0.3, 2.0, 11.0):
        ref, _ = quad(lambda u: u / ((u * u + v * v) * math.sinh(u)), 0, 60, epsabs=1e-14, epsrel=1e-13, limit=400)
        assert pe.h_inner(v) == pytest.approx(ref, rel=1e-10)


def test_h_envelope():
    v = np.linspace(-200, 200, 400001)
    assert np.max((1 + v**2) * np.abs(pe.h_kernel(v))) <= pe.H_ENVELOPE


def test_h_fast_matches():
    v = np.concatenate([np.linspace(-60, 60, 20001), [1e-9, -1e-9, 49.999, 50.001, 300.0]])
    assert np.max(np.abs(pe.h_kernel_fast(v) - pe.h_kernel(v))) < 1e-10


def test_goldston_Zx(zeros_small):
    x = 30.0
    t = 500.0
    g = zeros_small.ordinates
    ref = (math.fsum(pe.h_kernel((t - g) * math.log(x))) + math.fsum(pe.h_kernel((t + g) * math.log(x)))) / math.pi
    assert pe.goldston_Zx(t, x, zeros_small) == pytest.approx(ref, abs=1e-9)
    with pytest.raises(CoverageError):
        pe.goldston_Zx(980.0, x, zeros_small)


def test_lambda_x_branches(tables):
    x = 10.0
    n = np.arange(2, 101)
    lam = tables.von_mangoldt[2:101]
    lx = pe.lambda_x(n, x, lam)
    assert np.array_equal(lx[n <= x], lam[n <= x])
    assert lx[n == 100][0] == 0.0
    assert lx[n == 49][0] == pytest.approx(math.log(7) * math.log(100 / 49) / math.log(10), rel=1e-14)
    assert lx[n == 97][0] == pytest.approx(math.log(97) * math.log(100 / 97) / math.log(10), rel=1e-14)
    # prime power at x^2 gets zero weight
    assert pe.lambda_x([49], 7.0, [math.log(7)])[0] == 0.0


def test_selberg_error_calibrated(zeros_big, tables):
    from meanlab.zeta_core import S_of_t
    x = 30.0
    ts = np.random.default_rng(0).uniform(1e3, 2e3, 400)
    d = np.abs(S_of_t(ts, zeros_big) - pe.selberg_S_approx(ts, x, tables))
    C = load_golden()["selberg_C"]["value"]
    assert np.mean(d) <= C * math.log(1.5e3) / math.log(x)


def test_grid_count_two_exact(tables):
    spec = pe.weighted_vm(1e3, fejer_weight(1e3), tables)
    sp = pe.eval_grid(spec, 1.0, 2, span=0.2)
    direct = pe.evaluate(spec, sp.t)
    assert np.max(np.abs(sp.values - direct)) <= 1e-13
    assert sp.count * sp.dt == pytest.approx(sp.span, rel=2.3e-16)


def test_grid_oracle_2_14(tables):
    spec = pe.weighted_vm(1e5, fejer_weight(1e5), tables)
    sp = pe.eval_grid(spec, 1e3, 2**14, spot_checks=0)
    idx = np.random.default_rng(1).integers(0, sp.count + 1, 16)
    direct = pe.evaluate(spec, sp.t[idx])
    assert np.max(np.abs(sp.values[idx] - direct) / np.abs(direct)) < 1e-8


def test_grid_doubling(tables):
    spec = pe.logderiv(1e4, tables)
    a = pe.eval_grid(spec, 500.0, 8192)
    b = pe.eval_grid(spec, 500.0, 16384)
    assert np.max(np.abs(a.values - b.values[::2])) < 1e-10


def test_grid_guard(tables):
    spec = pe.logderiv(1e4, tables)
    with pytest.raises(ResolutionGuardError):
        pe.eval_grid(spec, 1e3, 100)


def test_rotor_contract_random(tables):
    rng = np.random.default_rng(7)
    for _ in range(5):
        T = float(rng.uniform(100, 5e3))
        X = float(10 ** rng.uniform(2, 5))
        count = pe.grid_count(T, math.log(X)) * int(rng.integers(1, 3))
        spec = pe.weighted_vm(X, fejer_weight(X), tables)
        sp = pe.eval_grid(spec, T, count, spot_checks=0)
        idx = rng.integers(0, count + 1, 16)
        d = pe.evaluate(spec, sp.t[idx])
        assert np.max(np.abs(sp.values[idx] - d) / np.maximum(np.abs(d), 1e-300)) <= 1e-8


def test_grid_cache_roundtrip(tables, tmp_path):
    spec = pe.logderiv(1e3, tables)
    a = pe.eval_grid(spec, 200.0, 4096, cache_dir=tmp_path)
    assert list(tmp_path.glob("grid_*.npy"))
    b = pe.eval_grid(spec, 200.0, 4096, cache_dir=tmp_path)
    assert a.values.tobytes() == b.values.tobytes()


def test_csv_export(tables, tmp_path):
    sp = pe.eval_grid(pe.logderiv(100.0, tables), 10.0, 8, span=1.0)
    p = tmp_path / "g.csv"
    sp.to_csv(p)
    rows = p.read_text().splitlines()
    assert rows[0] == "t,re,im" and len(rows) == 10
    t, re, im = map(float, rows[3].split(","))
    assert t == sp.t[2] and complex(re, im) == sp.values[2]


@pytest.mark.parametrize("c,two_k", [(0.7, 2), (1.3, 4), (-2.0, 3)])
def test_mean_power_constant(c, two_k):
    spec = pe.from_coefficients([1], [c])
    sp = pe.eval_grid(spec, 10.0, 8)
    part = "re" if two_k % 2 else "abs"
    assert pe.mean_power(sp, two_k, part) == pytest.approx(c**two_k, rel=1e-14)


def test_mean_power_unit_phase():
    spec = pe.from_coefficients([2], [2**-0.5])
    sp = pe.eval_grid(spec, 1e3, pe.grid_count(1e3, math.log(2), 2))
    assert pe.mean_power(sp, 2, "abs") == pytest.approx(0.5, rel=1e-13)


def test_mean_power_pythagoras(tables):
    spec = pe.weighted_vm(1e4, fejer_weight(1e4), tables)
    sp = pe.eval_grid(spec, 1e3, pe.grid_count(1e3, spec.logX, 2))
    a = pe.mean_power(sp, 2, "abs")
    assert abs(a - pe.mean_power(sp, 2, "re") - pe.mean_power(sp, 2, "im")) <= 1e-10 * a
    v, err = pe.mean_power(sp, 2, "abs", with_error=True)
    assert v == a and err >= 0


def test_mean_power_guard(tables):
    spec = pe.logderiv(1e4, tables)
    sp = pe.eval_grid(spec, 1e3, pe.grid_count(1e3, spec.logX))
    with pytest.raises(ResolutionGuardError):
        pe.mean_power(sp, 4, "abs")


@pytest.mark.parametrize("ratio", [0.01, 0.1])
def test_montgomery_vaughan(ratio, tables):
    T = 1e4
    X = ratio * T
    spec = pe.weighted_vm(X, sharp_weight(X), tables, primes_only=True)
    sp = pe.eval_grid(spec, T, pe.grid_count(T, spec.logX, 2))
    diag = math.fsum(1.0 / p for p in tables.primes_upto(X))
    assert 0.9 <= pe.mean_power(sp, 2, "abs") / diag <= 1.1
