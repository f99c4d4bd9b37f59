"""Write src/meanlab/data/golden.json from calibration runs.

Every run here uses parameters (heights, seeds, T values) that the acceptance
suite does not reuse, so the recorded constants are out of sample. The margin
rule is fixed in advance and applied uniformly:

* an upper-bound constant is twice the calibrated value;
* a two-sided corridor is [value / 2, 2 * value];
* a fitted exponent constant is the largest value consistent with every
  calibration point.

Usage: python tools/calibrate_golden.py [--zeros PATH] [--cache-dir DIR]
"""

from __future__ import annotations

import argparse
import json
import math
import time
from datetime import date
from pathlib import Path

import numpy as np

from meanlab import experiments as E
from meanlab import store
from meanlab import zeros as zr
from meanlab.weights import fejer_weight
from meanlab.zeta_core import S_of_t
from meanlab import polyeval as pe

OUT = Path(__file__).resolve().parents[1] / "src" / "meanlab" / "data" / "golden.json"
UPPER = 2.0


def entry(value, rule, **calibration):
    return {"value": value, "rule": rule, "calibration": E._clean(calibration)}


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeros")
    ap.add_argument("--cache-dir")
    ap.add_argument("--only", help="comma-separated keys to recompute; others are kept")
    args = ap.parse_args(argv)
    only = set(args.only.split(",")) if args.only else None
    gold = json.loads(OUT.read_text()) if OUT.exists() else {}
    zt = store.zero_table(10100, args.zeros, args.cache_dir)
    grids = store.cache_root(args.cache_dir) / "grids"

    def want(key):
        return only is None or key in only

    def log(msg):
        print(f"[{time.strftime('%H:%M:%S')}] {msg}", flush=True)

    if want("keyprop_C"):
        maxima = {}
        for T in (1500.0, 3000.0):
            X = T * T
            r = E.check_key_prop(T, X, fejer_weight(X), 0.5, 64, zt, store.arith_tables(X), seed=1234)
            maxima[T] = r.empirical
        v = max(maxima.values())
        gold["keyprop_C"] = entry(UPPER * v, "2 x max calibration difference", T=list(maxima), seed=1234,
                                  samples=64, X="T^2", sigma=0.5, max_diff=list(maxima.values()))
        log(f"keyprop_C {gold['keyprop_C']['value']}")

    if want("logderiv_conv_C"):
        T = 1500.0
        X = T * T
        r = E.check_logderiv_conv(T, X, 64, zt, store.arith_tables(X), seed=1234)
        gold["logderiv_conv_C"] = entry(UPPER * r.empirical, "2 x max calibration difference", T=T, X="T^2",
                                        samples=64, seed=1234, max_diff=r.empirical, mean_diff=r.diagnostics["mean_diff"])
        log(f"logderiv_conv_C {gold['logderiv_conv_C']['value']}")

    if want("corollary_corridor"):
        T = 5000.0
        X = T * T
        r = E.logderiv_moment_report(T, X, zt, store.arith_tables(X), cache_dir=grids)
        c = r.diagnostics["corollary_ratio"]
        gold["corollary_corridor"] = entry([c / UPPER, c * UPPER], "[v/2, 2v]", T=T, X="T^2", corollary_ratio=c,
                                           ratio=r.ratio)
        log(f"corollary_corridor {gold['corollary_corridor']['value']}")

    if want("scorr_residual_C"):
        T = 5000.0
        r = E.s_correlation_report(T, 0.0, 0.0, zt, store.arith_tables(1e6), beta=0.4)
        v = r.diagnostics["residual"]
        gold["scorr_residual_C"] = entry(UPPER * v, "2 x calibration residual", T=T, beta=0.4, residual=v)
        log(f"scorr_residual_C {gold['scorr_residual_C']['value']}")

    if want("moment_budget_C"):
        T = 5000.0
        X = T**1.5
        tb = store.arith_tables(X)
        need = {}
        for two_k, part in ((2, "abs"), (2, "re"), (3, "re"), (3, "im"), (4, "abs"), (4, "re")):
            r = E.moment_report(T, X, two_k, part, V=fejer_weight(X), tables=tb, cache_dir=grids, C_budget=1.0)
            k = two_k / 2
            dev = abs(r.empirical - r.theoretical)
            need[f"{two_k}{part}"] = (dev / (T * math.log(math.log(T)) ** (k - 0.5))) ** (1 / (4 * k)) / k
        gold["moment_budget_C"] = entry(max(need.values()), "smallest C covering every calibration moment",
                                        T=T, X="T^1.5", required_C=need)
        log(f"moment_budget_C {gold['moment_budget_C']['value']}")

    if want("tail_C_fit"):
        T = 5000.0
        X = T * T
        log_T = math.log(T)
        l2 = math.log(log_T)
        W = math.sqrt(l2) * np.linspace(1.0, 4.0, 13)
        caps = []
        for part in ("re", "im"):
            r = E.tail_report(T, X, part, W, tables=store.arith_tables(X), cache_dir=grids, C_fit=1.0)
            emp = np.asarray(r.diagnostics["empirical_tail"])
            gauss = np.exp(-0.9 * W**2 / l2)
            for w, e, g in zip(W, emp, gauss):
                if e > g:
                    caps.append(-math.log(e - g) / (w * math.log(w)))
        # with no point above the Gaussian term, keep the exponential term at most equal to it at the top W
        C = min(caps) if caps else float(0.9 * W[-1] / (l2 * math.log(W[-1])))
        gold["tail_C_fit"] = entry(C, "largest C with empirical <= bound at every calibration point",
                                   T=T, X="T^2", W=W, constraints=caps)
        log(f"tail_C_fit {C}")

    if want("F_shape_corridor"):
        T = 5000.0
        us = np.round(np.arange(1, 11) * 0.1, 10)
        F = zr.pair_correlation_F(us, zt, T)
        dev = float(np.max(np.abs(F - (us + T ** (-2 * us) * math.log(T)))))
        gold["F_shape_corridor"] = entry(UPPER * dev, "2 x calibration max deviation", T=T, max_dev=dev)
        log(f"F_shape_corridor {gold['F_shape_corridor']['value']}")

    if want("selberg_C"):
        x = 30.0
        ts = np.random.default_rng(4321).uniform(1500.0, 3000.0, 400)
        tb = store.arith_tables(x * x)
        d = np.abs(S_of_t(ts, zt) - pe.selberg_S_approx(ts, x, tb))
        v = float(np.mean(d)) / (math.log(2250.0) / math.log(x))
        gold["selberg_C"] = entry(UPPER * v, "2 x calibration mean |S - approx| / (log T / log x)",
                                  t_range=[1500, 3000], x=x, samples=400, mean_abs=float(np.mean(d)))
        log(f"selberg_C {gold['selberg_C']['value']}")

    gold["_meta"] = {"date": date.today().isoformat(), "zeros_height": zt.height}
    OUT.write_text(json.dumps(E._clean(gold), indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
