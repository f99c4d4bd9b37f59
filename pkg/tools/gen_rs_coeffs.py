"""Generate Taylor coefficients of the Riemann-Siegel correction terms C0..C6.

Writes src/meanlab/data/rs_coeffs.json. Each C_k is stored as a polynomial in
x = p - 1/2 (p the fractional part of sqrt(t / 2 pi)), lowest degree first.
Run once; the output is committed.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 220
DEG = 140


def series_cos(scale, power, shift, deg):
    # cos(scale * x^power + shift) as a power series in x
    c = [mp.mpf(0)] * (deg + 1)
    ca, sa = mp.cos(shift), mp.sin(shift)
    j = 0
    while power * j <= deg:
        term = scale**j / mp.factorial(j)
        # cos(u + s) = sum_j u^j/j! * cos(s + j pi/2)
        c[power * j] += term * (ca if j % 4 == 0 else -sa if j % 4 == 1 else -ca if j % 4 == 2 else sa)
        j += 1
    return c


def divide(num, den, deg):
    q = [mp.mpf(0)] * (deg + 1)
    for n in range(deg + 1):
        s = num[n] - mp.fsum(q[k] * den[n - k] for k in range(n))
        q[n] = s / den[0]
    return q


def derivative(c, times):
    for _ in range(times):
        c = [k * c[k] for k in range(1, len(c))] + [mp.mpf(0)]
    return c


def main():
    num = series_cos(2 * mp.pi, 2, -5 * mp.pi / 8, DEG)
    den = [-v for v in series_cos(2 * mp.pi, 1, 0, DEG)]
    psi = divide(num, den, DEG)
    pi = mp.pi
    d = {j: derivative(psi, j) for j in range(19)}
    combos = {
        "C0": [(1, 0)],
        "C1": [(-1 / (96 * pi**2), 3)],
        "C2": [(1 / (64 * pi**2), 2), (1 / (18432 * pi**4), 6)],
        "C3": [(-1 / (64 * pi**2), 1), (-1 / (3840 * pi**4), 5), (-1 / (5308416 * pi**6), 9)],
        "C4": [(1 / (128 * pi**2), 0), (19 / (24576 * pi**4), 4), (11 / (5898240 * pi**6), 8),
               (1 / (2038431744 * pi**8), 12)],
        # C5 and C6: rational weights identified from a least-squares fit of the exact
        # remainder (mpmath siegelz) over 13 values of p and a in [40, 110]
        "C5": [(-1 / (978447237120 * pi**10), 15), (-7 / (849346560 * pi**8), 11),
               (-901 / (82575360 * pi**6), 7), (-5 / (3072 * pi**4), 3)],
        "C6": [(1 / (563585608581120 * pi**12), 18), (17 / (652298158080 * pi**10), 14),
               (18889 / (237817036800 * pi**8), 10), (367 / (7864320 * pi**6), 6), (5 / (2048 * pi**4), 2)],
    }
    out = {}
    for name, terms in combos.items():
        poly = [mp.fsum(w * d[j][n] for w, j in terms) for n in range(DEG + 1)]
        # trim where the tail cannot matter for |x| <= 1/2
        last = max(n for n in range(DEG - 14) if abs(poly[n]) * mp.mpf(0.5) ** n > mp.mpf(10) ** -24)
        out[name] = [float(v) for v in poly[: last + 1]]
    path = Path(__file__).resolve().parents[1] / "src" / "meanlab" / "data" / "rs_coeffs.json"
    path.write_text(json.dumps(out, indent=1) + "\n")
    print({k: len(v) for k, v in out.items()}, out["C0"][0])


if __name__ == "__main__":
    main()
