import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanlab import arith
from meanlab.errors import CapacityError, RangeError
from meanlab.weights import fejer_weight


@pytest.fixture(scope="module")
def small():
    return arith.build_tables(10**4)


def test_limit_10_primes_and_lambda():
    tb = arith.build_tables(10)
    assert tb.primes.tolist() == [2, 3, 5, 7]
    lam = tb.von_mangoldt
    assert lam[8] == pytest.approx(math.log(2), abs=0) and lam[8] == math.log(2)
    assert lam[6] == 0.0
    assert round(lam[8], 4) == 0.6931


def test_prime_count_100(oracle):
    assert arith.build_tables(100).primes.size == oracle["prime_count_100"] == 25


def test_primes_match_trial_division(small):
    ref = [p for p in range(2, 10**4 + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    assert small.primes.tolist() == ref
    assert np.all(np.diff(small.primes) > 0)


def test_lambda_additivity(small):
    lam = small.von_mangoldt
    N = 10**4
    acc = np.zeros(N + 1)
    for d in range(2, N + 1):
        if lam[d]:
            acc[d::d] += lam[d]
    assert np.max(np.abs(acc[1:] - np.log(np.arange(1, N + 1)))) < 1e-11


def test_lambda_definition(small):
    lam = small.von_mangoldt
    for n in range(2, 2000):
        m, p = n, None
        for q in range(2, n + 1):
            if m % q == 0:
                p = q
                while m % q == 0:
                    m //= q
                break
        assert lam[n] == (math.log(p) if m == 1 else 0.0)


def test_psi_oracle_and_corridor(small, oracle):
    assert small.psi(1000) == pytest.approx(oracle["psi_1000"], abs=1e-9)
    for N in (100, 500, 1000, 5000, 10**4):
        assert abs(small.psi(N) - N) < 3 * math.sqrt(N) * math.log(N) ** 2


def test_capacity_error():
    with pytest.raises(CapacityError):
        arith.build_tables(10**13)


def test_prime_weight_sum_examples(small, oracle, tables):
    one = lambda x: np.ones_like(x)
    assert arith.prime_weight_sum(2, one, 2, small) == 0.5
    assert arith.prime_weight_sum(10, one, 2, small) == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7, abs=1e-15)
    assert arith.prime_weight_sum(1e3, fejer_weight(1e6), 2, tables) == pytest.approx(
        oracle["fejer_prime_sum_Y1e3_X1e6"], rel=1e-13)


def test_prime_weight_sum_range(small):
    with pytest.raises(RangeError):
        arith.prime_weight_sum(1e5, fejer_weight(1e6), 2, small)


def test_multiplicative_f_examples():
    assert arith.multiplicative_f([1]) == 0
    assert arith.multiplicative_f([2]) == Fraction(1, 2)
    assert arith.multiplicative_f([4]) == Fraction(3, 8)
    assert arith.multiplicative_f([2, 4]) == Fraction(3, 16)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=4))
def test_multiplicative_f_is_multiplicative(exps):
    prod = Fraction(1)
    for a in exps:
        prod *= arith.multiplicative_f([a])
    assert arith.multiplicative_f(exps) == prod


@pytest.mark.parametrize("exps,primes", [([2], [2]), ([2, 2], [2, 3]), ([4], [3]), ([1, 1], [2, 3]), ([2, 1], [5, 7])])
def test_multiplicative_f_time_average(exps, primes):
    """(1/T0) int_0^T0 prod cos(t log p_j)^a_j dt approaches f at T0 = 1e6."""
    T0 = 1e6
    t = np.linspace(0.0, T0, 4_000_001)
    prod = np.ones_like(t)
    for a, p in zip(exps, primes):
        prod *= np.cos(t * math.log(p)) ** a
    h = t[1] - t[0]
    avg = (np.sum(prod) - 0.5 * (prod[0] + prod[-1])) * h / T0
    assert abs(avg - float(arith.multiplicative_f(exps))) < 5e-3


def test_c_k_examples():
    assert arith.c_k(2) == Fraction(1, 2)
    assert arith.c_k(3) == 0
    assert arith.c_k(4) == Fraction(3, 4)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_c_k_gaussian_moment(n, oracle):
    # E[N(0, 1/2)^n] from quadrature, and (n-1)!!/2^(n/2)
    assert float(arith.c_k(n)) == pytest.approx(oracle["gaussian_moments_half"][str(n)], rel=1e-14)
    dfact = math.prod(range(n - 1, 0, -2))
    assert arith.c_k(n) == Fraction(dfact, 2 ** (n // 2))


def test_prime_power_constant(oracle, tables):
    v = arith.prime_power_constant(1e-12)
    assert v == pytest.approx(oracle["prime_power_constant"], abs=1e-12)
    assert round(v, 9) == 0.315718452
    assert abs(arith.prime_power_constant(1e-6) - v) < 1e-6
    # the p = 2 piece alone, and direct summation over tabulated primes
    assert math.fsum(1 / (m * 2.0**m) for m in range(2, 80)) == pytest.approx(math.log(2) - 0.5, abs=1e-15)
    p = tables.primes.astype(float)
    direct = math.fsum(-np.log1p(-1 / p) - 1 / p)
    assert abs(direct - v) < 1 / tables.limit


def test_prime_power_cosine_sum(oracle, tables):
    v0, b0 = arith.prime_power_cosine_sum(0.0, tables)
    assert v0 == pytest.approx(oracle["prime_power_sq_sum"], abs=1e-9) and b0 == 0
    v, b = arith.prime_power_cosine_sum(1e-9, tables)
    assert abs(v - v0) <= b + 1e-12
    v6, _ = arith.prime_power_cosine_sum(1e-9, tables, p_max=10**6)
    assert v6 == pytest.approx(oracle["prime_power_sq_sum_p_le_1e6"], abs=1e-12)
    v3, _ = arith.prime_power_cosine_sum(0.3, tables)
    assert v3 < v0
