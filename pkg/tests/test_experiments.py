import json
import math
import warnings

import numpy as np
import pytest

from meanlab import experiments as E
from meanlab import store
from meanlab import zeros as zr
from meanlab.errors import DomainError, RangeError
from meanlab.weights import fejer_weight, sharp_weight


@pytest.fixture(scope="module")
def grids(cache_dir):
    return store.cache_root(cache_dir) / "grids"


def _additive(r):
    total = math.fsum(r.components.values())
    assert abs(total - r.theoretical) <= 1e-12 * max(1.0, abs(total))
    d = r.to_dict()
    assert d["theoretical"] == r.theoretical
    if r.theoretical:
        assert d["ratio"] == r.empirical / r.theoretical
    json.dumps(d)


def test_report_additivity(zeros_big, tables, grids):
    T = 1e3
    _additive(E.moment_report(T, T**1.5, 2, "abs", tables=tables, cache_dir=grids))
    _additive(E.s_correlation_report(T, 0.1, 0.0, zeros_big, tables, residual=False))
    _additive(E.logderiv_moment_report(T, T**1.5, zeros_big, store.arith_tables(T**1.5), cache_dir=grids))


def test_keyprop_zero_transform_control(zeros_big, tables):
    T = 1e3
    r = E.check_key_prop(T, T, fejer_weight(T), 1.0, 8, zeros_big, tables, vhat=lambda y: 0.0 * y)
    d = r.diagnostics
    assert np.all(np.asarray(d["rhs_re"]) == 0) and np.all(np.asarray(d["rhs_im"]) == 0)
    assert r.empirical == pytest.approx(np.max(np.hypot(d["lhs_re"], d["lhs_im"])), rel=1e-15)


def test_keyprop_sigma_one(zeros_big, tables):
    T = 1e3
    r = E.check_key_prop(T, T, fejer_weight(T), 1.0, 32, zeros_big, tables, seed=2)
    assert r.empirical < 0.5


def test_keyprop_doubling(zeros_big):
    maxima = []
    for T in (1e3, 2e3, 4e3):
        X = T * T
        maxima.append(E.check_key_prop(T, X, fejer_weight(X), 0.5, 32, zeros_big, store.arith_tables(X)).empirical)
    assert maxima[1] <= 2 * maxima[0] and maxima[2] <= 2 * maxima[1]


def test_keyprop_preconditions(zeros_big, tables):
    with pytest.raises(DomainError):
        E.check_key_prop(1e3, 1e3, fejer_weight(1e3), 0.4, 4, zeros_big, tables)
    with pytest.raises(RangeError):
        E.check_key_prop(1e3, 1e13, fejer_weight(1e13), 0.5, 4, zeros_big, tables)


def test_fX_values():
    X = 1e6
    L = math.log(X)
    assert E.fX(0.0, X) == pytest.approx(1j * L * L / 6, rel=1e-15)
    # series and closed form meet smoothly at |y log X| = 0.1
    y0 = 0.1 / L
    a, b = E.fX(y0 * (1 - 1e-9), X), E.fX(y0 * (1 + 1e-9), X)
    assert abs(a - b) < 1e-9 * abs(a)


def test_fX_oracle(oracle):
    for y, v in oracle["fX_1e6"].items():
        assert abs(E.fX(float(y), 1e6) - complex(*v)) <= 1e-12 * abs(complex(*v))


def test_fX_decay():
    for X in (1e3, 1e6, 1e12):
        y = np.linspace(1.0, 2000.0, 200001)
        assert np.max(np.abs(E.fX(y, X)) * y**2) <= 2 + 4 / math.log(X)


def test_fX_fourier_examples():
    X = 1e6
    L = math.log(X)
    assert E.fX_fourier(L, X) == 0
    assert E.fX_fourier(-1.0, X) == 0
    assert E.fX_fourier(L / 2, X) == pytest.approx(1j * math.pi * L / 2, rel=1e-15)


@pytest.mark.parametrize("x", [1.0, 4.0, 10.0])
def test_fX_fourier_truncated(x):
    X, Y = 1e6, 300.0
    num = E.fX_fourier_truncated(x, X, Y)
    assert abs(num - E.fX_fourier(x, X)) <= 4 / Y


def test_logderiv_conv_small(zeros_big, tables):
    r = E.check_logderiv_conv(1e3, 1e6, 16, zeros_big, tables)
    assert r.empirical <= E.golden("logderiv_conv_C")


def test_c_constant(tables, oracle):
    assert E.c_constant(0.0, 0.0, tables) == pytest.approx(oracle["c_00"], abs=1e-9)
    assert round(E.c_constant(0.0, 0.0, tables), 5) == 0.66589
    assert E.c_constant(0.4, 0.1, tables) == pytest.approx(E.c_constant(0.3, 0.0, tables), abs=1e-14)


def test_log_cos_integral():
    T = 1e4
    assert E.log_cos_integral(0.0, T) == math.log(math.log(T)) - math.log(math.log(2))
    from scipy.integrate import quad
    ref, _ = quad(lambda u: math.cos(0.7 * u) / u, math.log(2), math.log(T), epsabs=1e-13)
    assert E.log_cos_integral(0.7, T) == pytest.approx(ref, abs=1e-12)


def test_scorr_delta_zero_terms(zeros_big, tables):
    T = 1e3
    r = E.s_correlation_report(T, 0.0, 0.0, zeros_big, tables, residual=False)
    scale = T / (2 * math.pi**2)
    assert r.components["log_integral"] == pytest.approx(scale * (math.log(math.log(T)) - math.log(math.log(2))))
    assert r.components["c_term"] == pytest.approx(scale * E.c_constant(0, 0, tables))


@pytest.mark.parametrize("delta", [0.0, 0.3])
def test_F_integral_truncation(zeros_big, delta):
    T = 1e3
    a, _ = zr.F_cos_integral(zeros_big, T, delta, 64.0)
    b, _ = zr.F_cos_integral(zeros_big, T, delta, 128.0)
    assert abs(a - b) < 1e-2


def test_S_product_symmetry(zeros_small):
    a = E.S_product_integral(500.0, 0.2, 0.0, zeros_small)
    b = E.S_product_integral(500.0, 0.0, 0.2, zeros_small)
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.slow
def test_residual_shrinks_with_beta(zeros_big):
    T = 1e3
    tb = store.arith_tables(1e4)
    r = [E.decomposition_residual(T, T**b, zeros_big, tb) for b in (0.25, 0.45)]
    assert r[1] < r[0]


def test_residual_range_checks(zeros_big, tables):
    with pytest.raises(RangeError):
        E.s_correlation_report(1e3, 0.0, 0.0, zeros_big, tables, beta=0.6)
    with pytest.raises(RangeError):
        E.s_correlation_report(1e3, 8.0, 0.0, zeros_big, tables)


def test_k_kernel():
    assert E.k_kernel(1.0) == 0.25
    assert E.k_kernel(0.0) == 0.0
    u = 1e-4
    assert E.k_kernel(u) == pytest.approx((math.pi**4 * u / 6) ** 2, rel=1e-6)
    b = 1 / (2 * math.pi)
    assert E.k_kernel(b) == pytest.approx(math.pi**2, rel=1e-12)
    assert E.k_kernel(b * (1 + 1e-12)) == pytest.approx(math.pi**2, rel=1e-9)
    assert E.k_kernel(b * (1 - 1e-9)) == pytest.approx(math.pi**2, rel=1e-6)
    us = np.linspace(-2, 2, 4001)
    k = E.k_kernel(us)
    assert np.all(k >= 0) and np.array_equal(k, E.k_kernel(-us))
    # series branch meets the closed form at |u| = 1e-3
    assert E.k_kernel(1e-3 * (1 - 1e-12)) == pytest.approx(E.k_kernel(1e-3 * (1 + 1e-12)), rel=1e-8)


def test_a_schedule():
    log_T = math.log(1e4)
    l2, l3 = math.log(log_T), math.log(math.log(log_T))
    assert E.a_parameter(l2, log_T) == 0.5 * l3
    assert E.a_parameter(0.3, log_T) == 0.5 * l3
    assert E.a_parameter(0.5 * l2 * l3 + 10, log_T) == 1.0
    # the middle case only exists once log log log T > 2
    big = 1e5
    L2, L3 = math.log(big), math.log(math.log(big))
    W = 0.5 * (L2 + 0.5 * L2 * L3)
    assert E.a_parameter(W, big) == pytest.approx(L2 / (2 * W) * L3)
    assert E.a_parameter(0.5 * L2 * L3, big) == pytest.approx(1.0)


def test_tail_normalization_warning():
    with pytest.warns(UserWarning):
        norm, remark = E._tail_normalization(sharp_weight(1e6))
    assert remark and norm > 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert E._tail_normalization(fejer_weight(1e6)) == (1.0, False)


def test_tail_small(tables, grids):
    T = 1e3
    l2 = math.log(math.log(T))
    W = [math.sqrt(l2), 2.0, 3.0, 20.0]
    r = E.tail_report(T, 1e5, "re", W, tables=tables, cache_dir=grids)
    emp = r.diagnostics["empirical_tail"]
    assert emp[-1] == 0.0
    assert r.diagnostics["monotone"]
    assert 0 < emp[0] <= 1
    assert len(r.diagnostics["split"]) == len(W)
    with pytest.raises(RangeError):
        E.tail_report(T, 1e5, "re", [0.5], tables=tables, cache_dir=grids)


def test_ldm_prime_sum_sanity(zeros_big):
    T = 1e3
    tb = store.arith_tables(1e6)
    mt = E.logderiv_main_terms(T, 1e6, zeros_big, tb)
    p = tb.primes_upto(T).astype(float)
    upper = T * math.fsum(np.log(p) ** 2 / p)
    assert 0 < mt["prime_sum"] <= upper
    assert 0.7 <= upper / (T * math.log(T) ** 2 / 2) <= 1.3
    low = E.logderiv_main_terms(T, T**0.8, zeros_big, tb)
    assert low["F_term"] == 0.0


def test_moment_odd_zero_main(tables, grids):
    r = E.moment_report(1e3, 1e3**1.5, 3, "re", tables=tables, cache_dir=grids)
    assert r.components["main"] == 0
    assert r.ratio is None
    assert r.diagnostics["within_budget"]
    with pytest.raises(ValueError):
        E.moment_report(1e3, 1e4, 3, "abs", tables=tables)


def test_moment_re_im_symmetry(tables, grids):
    T = 1e4
    re = E.moment_report(T, T**1.5, 2, "re", tables=tables, cache_dir=grids)
    im = E.moment_report(T, T**1.5, 2, "im", tables=tables, cache_dir=grids)
    assert re.theoretical == im.theoretical
    assert abs(re.empirical - im.empirical) <= 0.3 * max(re.empirical, im.empirical)
