import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanlab.weights import (check_properties, fejer_weight, fourier_inversion_check, make_weight, sharp_weight,
                             transform_many, weight_transform)


def test_fejer_values():
    w = fejer_weight(1e6)
    L = math.log(1e6)
    assert w(0.0) == 1.0
    assert w(L) == 0.0
    assert w(1.5 * L) == 0.0
    assert w.vhat(0.0) == pytest.approx(L, rel=1e-15)
    assert w.m == 2


def test_fejer_transform_numeric(oracle):
    w = fejer_weight(1e6)
    assert weight_transform(w, 0.0) == pytest.approx(math.log(1e6), abs=1e-10)
    we = fejer_weight(math.exp(10))
    num = weight_transform(we, 1.0)
    assert num == pytest.approx(float(we.vhat(1.0)), abs=1e-10)
    assert num == pytest.approx(oracle["fejer_vhat_X_e10_y1"], abs=1e-10)


def test_transform_closed_form_agreement():
    rng = np.random.default_rng(0)
    for X in (1e3, 1e6):
        w = fejer_weight(X)
        ys = rng.uniform(-10, 10, 1000)
        num = transform_many(w, ys).real
        ref = w.vhat(ys)
        assert np.max(np.abs(num - ref) / np.maximum(np.abs(ref), 1e-3)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 40.0), st.sampled_from([1e3, 1e5, 1e8]))
def test_transform_even(y, X):
    w = fejer_weight(X)
    assert abs(weight_transform(w, y) - weight_transform(w, -y)) <= 1e-12 * max(1.0, abs(weight_transform(w, y)))


@settings(max_examples=40, deadline=None)
@given(st.floats(-50, 50), st.sampled_from(["fejer", "sharp"]))
def test_weight_even_and_supported(x, label):
    w = make_weight(label, 1e4)
    assert w(x) == w(-x)
    if abs(x) > w.logX:
        assert w(x) == 0.0


def test_fejer_passes_properties():
    rep = check_properties(fejer_weight(1e6))
    assert rep.cond_i and rep.cond_ii and rep.cond_iii
    assert rep.passed
    # (1/L) Vhat(y/L) = 4 sin^2(y/2)/y^2: bounded by 1 near 0, C <= 4 for |y| >= 2
    assert rep.C_iii_near <= 1 + 1e-12
    assert rep.C_iii_far <= 4


def test_sharp_fails_iii():
    rep = check_properties(sharp_weight(1e6))
    assert rep.cond_i
    assert not rep.cond_iii


def test_scaled_fejer_doubles_constants():
    w = fejer_weight(1e6)
    a = check_properties(w)
    b = check_properties(w.scaled(2.0))
    assert b.passed
    assert b.C_iii == pytest.approx(2 * a.C_iii, rel=1e-12)
    for k in a.C_ii:
        assert b.C_ii[k] == pytest.approx(2 * a.C_ii[k], rel=1e-12)


def test_property_samples_precondition():
    with pytest.raises(ValueError):
        check_properties(fejer_weight(1e6), samples=50)


def test_fourier_inversion():
    w = fejer_weight(1e6)
    L = math.log(1e6)
    assert abs(fourier_inversion_check(w, 2, 1.0)) <= 10 / L
    assert abs(fourier_inversion_check(w, 2, 1e3, quad_tol=1e-10)) < 2 / (math.pi * L * 1e3) * 1.5
    small = fejer_weight(100.0)
    far = fourier_inversion_check(small, 1009, 1e3, quad_tol=1e-10)
    assert small(math.log(1009)) == 0.0
    assert abs(far) < 1e-3
