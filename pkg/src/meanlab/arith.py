"""Sieve tables for the von Mangoldt function and the combinatorial constants
that show up in the moment and correlation main terms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import CapacityError, RangeError

#: Memory ceiling for table construction, in bytes. Override via
#: :func:`set_memory_budget`.
MEMORY_BUDGET = 3 * 2**30

EULER_GAMMA = 0.57721566490153286061


def set_memory_budget(nbytes: int) -> None:
    global MEMORY_BUDGET
    MEMORY_BUDGET = int(nbytes)


def _estimated_bytes(limit: int) -> int:
    # odd-only sieve bytes plus int64/float64 prime-power columns
    n_primes = 1.26 * limit / max(math.log(limit), 1.0) + 10
    return int(limit // 2 + 32 * n_primes)


def _sieve_primes(limit: int) -> np.ndarray:
    """Odd-only Eratosthenes. Returns the primes <= limit as int64."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    size = (limit - 1) // 2  # index i <-> 2i + 3
    odd = np.ones(size, dtype=bool)
    r = math.isqrt(limit)
    for i in range((r - 1) // 2):
        if odd[i]:
            p = 2 * i + 3
            start = (p * p - 3) // 2
            odd[start::p] = False
    primes = 2 * np.flatnonzero(odd).astype(np.int64) + 3
    return np.concatenate([np.array([2], dtype=np.int64), primes])


@dataclass(frozen=True)
class ArithTables:
    """Immutable von Mangoldt data up to ``limit``.

    The tables are stored sparsely: ``prime_powers`` lists every n <= limit
    with Lambda(n) != 0 in increasing order and ``log_p`` holds the matching
    Lambda(n) = log p. A dense Lambda array is built on demand by
    :attr:`von_mangoldt`.
    """

    limit: int
    primes: np.ndarray
    prime_powers: np.ndarray
    log_p: np.ndarray
    _dense: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def von_mangoldt(self) -> np.ndarray:
        """Dense Lambda(n) for 0 <= n <= limit (index n)."""
        if "lam" not in self._dense:
            if 8 * (self.limit + 1) > MEMORY_BUDGET:
                raise CapacityError(f"dense Lambda table for limit={self.limit} exceeds memory budget")
            lam = np.zeros(self.limit + 1)
            lam[self.prime_powers] = self.log_p
            lam.setflags(write=False)
            self._dense["lam"] = lam
        return self._dense["lam"]

    def check_covers(self, x: float) -> None:
        if x > self.limit:
            raise RangeError(f"bound {x:g} exceeds table limit {self.limit}")

    def upto(self, x: float) -> slice:
        """Slice of ``prime_powers`` holding n <= x."""
        self.check_covers(x)
        return slice(0, int(np.searchsorted(self.prime_powers, math.floor(x), side="right")))

    def primes_upto(self, x: float) -> np.ndarray:
        self.check_covers(x)
        return self.primes[: int(np.searchsorted(self.primes, math.floor(x), side="right"))]

    def psi(self, n: int) -> float:
        """Chebyshev psi(n) = sum_{m <= n} Lambda(m), compensated."""
        return math.fsum(self.log_p[self.upto(n)])


def build_tables(limit: int) -> ArithTables:
    """Sieve primes and prime powers up to ``limit``.

    Raises:
        CapacityError: if the estimated footprint exceeds ``MEMORY_BUDGET``.
    """
    limit = int(limit)
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if _estimated_bytes(limit) > MEMORY_BUDGET:
        raise CapacityError(f"limit={limit} exceeds the configured memory budget ({MEMORY_BUDGET} bytes)")
    primes = _sieve_primes(limit)
    ns = [primes]
    logs = [np.log(primes.astype(np.float64))]
    for p in primes[: int(np.searchsorted(primes, math.isqrt(limit), side="right"))]:
        p = int(p)
        powers = []
        q = p * p
        while q <= limit:
            powers.append(q)
            q *= p
        ns.append(np.array(powers, dtype=np.int64))
        logs.append(np.full(len(powers), math.log(p)))
    n_all = np.concatenate(ns)
    order = np.argsort(n_all, kind="stable")
    prime_powers = n_all[order]
    log_p = np.concatenate(logs)[order]
    for a in (primes, prime_powers, log_p):
        a.setflags(write=False)
    return ArithTables(limit=limit, primes=primes, prime_powers=prime_powers, log_p=log_p)


def prime_weight_sum(Y: float, V, power: int, tables: ArithTables) -> float:
    """S_V(Y) = sum_{p <= Y} V(log p)^power / p.

    ``V`` is a :class:`~meanlab.weights.WeightSpec` or any vectorised callable.
    """
    if Y < 2:
        raise ValueError("Y must be >= 2")
    if power not in (1, 2, 4):
        raise ValueError("power must be 1, 2 or 4")
    p = tables.primes_upto(Y).astype(np.float64)
    vals = np.asarray(V(np.log(p)), dtype=np.float64) ** power / p
    return math.fsum(vals)


def multiplicative_f(exponents: Iterable[int]) -> Fraction:
    """f(prod p_j^a_j) for f(p^a) = 2^-a * binom(a, a/2), zero for odd a.

    ``exponents`` lists the prime exponents a_j (one per distinct prime).
    """
    out = Fraction(1)
    for a in exponents:
        a = int(a)
        if a < 1:
            raise ValueError("exponents must be >= 1")
        if a % 2:
            return Fraction(0)
        out *= Fraction(math.comb(a, a // 2), 2**a)
    return out


def c_k(two_k: int) -> Fraction:
    """Gaussian moment constant c_k = (2k)!/(2^{2k} k!) for even 2k, else 0."""
    if two_k < 1:
        raise ValueError("two_k must be >= 1")
    if two_k % 2:
        return Fraction(0)
    k = two_k // 2
    return Fraction(math.factorial(two_k), 2**two_k * math.factorial(k))


@lru_cache(maxsize=None)
def _mobius_small(n: int) -> tuple:
    mu = [1] * (n + 1)
    mu[0] = 0
    is_comp = [False] * (n + 1)
    for p in range(2, n + 1):
        if not is_comp[p]:
            for m in range(p, n + 1, p):
                if m > p:
                    is_comp[m] = True
                mu[m] = -mu[m]
            for m in range(p * p, n + 1, p * p):
                mu[m] = 0
    return tuple(mu)


def _zeta_minus_one(n: int) -> float:
    """zeta(n) - 1 for integer n >= 2, to full double precision."""
    if n == 2:
        return math.pi**2 / 6 - 1
    if n >= 60:
        return 2.0**-n + 3.0**-n
    # direct sum to K, then Euler-Maclaurin tail for K^{1-n}/(n-1) terms
    K = 20
    head = math.fsum(k ** (-float(n)) for k in range(2, K))
    tail = K ** (1.0 - n) / (n - 1) + 0.5 * K ** (-float(n))
    fall = float(n)
    tail += (1 / 12) * fall * K ** (-n - 1.0)
    fall *= (n + 1) * (n + 2)
    tail -= (1 / 720) * fall * K ** (-n - 3.0)
    fall *= (n + 3) * (n + 4)
    tail += (1 / 30240) * fall * K ** (-n - 5.0)
    fall *= (n + 5) * (n + 6)
    tail -= (1 / 1209600) * fall * K ** (-n - 7.0)
    return head + tail


def prime_zeta(m: int) -> float:
    """Prime zeta P(m) = sum_p p^-m for integer m >= 2 (Moebius inversion of log zeta)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    kmax = max(1, math.ceil(56 / m))
    mu = _mobius_small(kmax)
    terms = [mu[k] / k * math.log1p(_zeta_minus_one(k * m)) for k in range(1, kmax + 1) if mu[k]]
    return math.fsum(terms)


def prime_power_constant(tolerance: float = 1e-12) -> float:
    """sum_{m >= 2} sum_p 1/(m p^m), i.e. gamma minus the Mertens constant.

    Sums sum_m P(m)/m through the prime zeta function; the tail beyond M is
    bounded by sum_{m > M} 2 * 2^-m / m < 2^{1-M} / M.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    M = 2
    while 2.0 ** (1 - M) / M >= tolerance:
        M += 1
    return math.fsum(prime_zeta(m) / m for m in range(2, M + 1))


def prime_power_cosine_sum(delta: float, tables: ArithTables, p_max: float | None = None) -> tuple[float, float]:
    """sum_p sum_{m >= 2} cos(m delta log p) / (m^2 p^m) and a bound on the truncation.

    Primes above ``p_max`` (default: the table limit) are dropped; their
    contribution is at most sum_{p > P} 1/(4 p (p - 1)) <= 1/(4 P log P) by
    the prime-counting estimate, and the returned bound reports that value.
    If ``delta == 0`` the exact prime-zeta series is used and the bound is 0.
    """
    if delta == 0.0:
        return math.fsum(prime_zeta(m) / m**2 for m in range(2, 60)), 0.0
    P = float(tables.limit if p_max is None else p_max)
    p = tables.primes_upto(P).astype(np.float64)
    logp = np.log(p)
    cols = []
    m = 2
    while True:
        pm = p ** (-float(m))
        if pm[0] < 1e-18:
            break
        keep = pm > 1e-18 * pm[0]
        cols.append(np.cos(m * delta * logp[keep]) * pm[keep] / m**2)
        m += 1
    total = math.fsum(np.concatenate(cols))
    return total, 1.0 / (4.0 * P * math.log(P))
