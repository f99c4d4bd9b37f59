"""Regenerate tests/data/oracle_values.json with mpmath and brute force.

Nothing here imports meanlab: every value is computed independently so the
tests compare two routes. Run from the repository root:

    python tests/oracles/gen_oracles.py
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
_ROOT = Path(__file__).resolve().parents[2]
# the test copy, plus the packaged copy read by ``meanlab verify-all``
OUTS = [_ROOT / "tests" / "data" / "oracle_values.json", _ROOT / "src" / "meanlab" / "data" / "oracle_values.json"]


def trial_division_primes(n):
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


def sieve(n):
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if flags[p]:
            flags[p * p::p] = bytearray(len(flags[p * p::p]))
    return [i for i in range(n + 1) if flags[i]]


def mangoldt(n, primes):
    for p in primes:
        if p > n:
            break
        if n % p == 0:
            while n % p == 0:
                n //= p
            return mp.log(p) if n == 1 else mp.mpf(0)
    return mp.mpf(0)


def main():
    out = {}

    # zeros and theta
    out["first_zeros"] = [float(mp.im(mp.zetazero(n))) for n in range(1, 101)]
    out["theta_100"] = float(mp.siegeltheta(100))
    out["theta_1000"] = float(mp.siegeltheta(1000))
    out["N_5000"] = int(mp.nzeros(5000))
    out["N_100"] = int(mp.nzeros(100))

    # zeta values
    z = mp.zeta(mp.mpf(1) / 2 + 1 / mp.log(10**6) + 1j * mp.mpf(10**4))
    out["zeta_sigma_1e6_t_1e4"] = [float(mp.re(z)), float(mp.im(z))]
    out["log_abs_zeta_half_1e4"] = float(mp.log(abs(mp.zeta(mp.mpf(1) / 2 + 1j * mp.mpf(10**4)))))
    out["Z_500"] = float(mp.siegelz(500))
    out["Z_100"] = float(mp.siegelz(100))

    # arithmetic
    out["prime_count_100"] = len(trial_division_primes(100))
    primes = sieve(10**6)
    L6 = mp.log(10**6)
    s = mp.fsum((1 - mp.log(p) / L6) ** 2 / p for p in primes if p <= 1000)
    out["fejer_prime_sum_Y1e3_X1e6"] = float(s)
    out["prime_power_constant"] = float(mp.euler - mp.mertens)
    # sum_p sum_{m>=2} 1/(m^2 p^m) = sum_m P(m)/m^2 with mpmath's prime zeta P
    sec = mp.nsum(lambda m: mp.primezeta(m) / m**2, [2, mp.inf])
    out["prime_power_sq_sum"] = float(sec)
    # the same over p <= 1e6 only, via sum_p (Li2(1/p) - 1/p)
    out["prime_power_sq_sum_p_le_1e6"] = float(mp.fsum(mp.polylog(2, mp.mpf(1) / p) - mp.mpf(1) / p for p in primes))
    out["c_00"] = float(mp.log(mp.log(2)) + mp.euler + (mp.euler - mp.mertens) + sec)

    # log-derivative polynomial at t=1e3, X=1e5
    X, t = 10**5, mp.mpf(1000)
    LX = mp.log(X)
    pr5 = [p for p in primes if p <= X]
    acc = mp.mpc(0)
    for p in pr5:
        lp = mp.log(p)
        q = p
        while q <= X:
            acc += lp * mp.power(q, -mp.mpf(1) / 2 - 1j * t) * (1 - mp.log(q) / LX)
            q *= p
    out["logderiv_t1e3_X1e5"] = [float(mp.re(acc)), float(mp.im(acc))]

    # h inner integral and kernel
    v = mp.mpf(1)
    inner = mp.quad(lambda u: u / ((u * u + v * v) * mp.sinh(u)), [0, 1, 5, 40, mp.inf])
    out["h_inner_1"] = float(inner)
    out["h_inner_0p1"] = float(mp.quad(lambda u: u / ((u * u + mp.mpf("0.01")) * mp.sinh(u)), [0, 0.1, 1, 5, 40, mp.inf]))
    out["h_inner_7"] = float(mp.quad(lambda u: u / ((u * u + 49) * mp.sinh(u)), [0, 1, 5, 40, mp.inf]))

    # Fejer transform at y = 1, X = e^10 from the defining integral
    L = mp.mpf(10)
    vh = 2 * mp.quad(lambda x: mp.cos(x) * (1 - x / L), [0, L])
    out["fejer_vhat_X_e10_y1"] = float(vh)

    # f_X kernel at a few points, X = 1e6
    LX = mp.log(10**6)

    def fx(y):
        y = mp.mpf(y)
        zz = 1j * y * LX
        return (mp.exp(zz) * (2 - zz) - 2 - zz) / (y**3 * LX)
    out["fX_1e6"] = {str(y): [float(mp.re(fx(y))), float(mp.im(fx(y)))] for y in ("0.01", "0.5", "3")}

    # theta finite-difference reference at t = 1e3
    out["half_log_1e3_over_2pi"] = float(mp.log(1000 / (2 * mp.pi)) / 2)

    # c_k by Gaussian moment of N(0, 1/2)
    out["gaussian_moments_half"] = {str(n): float(mp.quad(lambda x: x**n * mp.exp(-x * x) / mp.sqrt(mp.pi), [-mp.inf, mp.inf]))
                                    for n in (2, 4, 6, 8)}

    # Lambda sum oracle: psi(1000)
    pr = sieve(1000)
    out["psi_1000"] = float(mp.fsum(mangoldt(n, pr) for n in range(2, 1001)))

    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    for path in OUTS:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
