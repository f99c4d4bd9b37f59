"""``meanlab`` command line: build and cache tables, run the drivers, write JSON
reports and CSV curves.

Exit status is 0 on success, 1 when a precondition or a validation corridor
fails, and 2 on an internal numeric failure (certification, resolution
guard, quadrature).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import acceptance
from . import experiments as E
from . import polyeval as pe
from . import store
from . import zeros as zr
from .errors import NumericError, PreconditionError
from .weights import check_properties, fourier_inversion_check, make_weight

COMMANDS = ("zeros", "check-weights", "keyprop", "logderiv-conv", "moments", "logderiv-moment",
            "scorr", "pair-correlation", "tails", "verify-all")


class ValidationFailure(Exception):
    """A report was produced but a stated corridor did not hold."""


@dataclass
class RunConfig:
    command: str
    T: float | None = None
    X_exp: float | None = None
    k: float | None = None
    part: str | None = None
    theta: float | None = None
    sigma: float | None = None
    samples: int | None = None
    y1: float | None = None
    y2: float | None = None
    beta: float | None = None
    height: float | None = None
    W: list | None = None
    u: list | None = None
    weight: str = "fejer"
    residual: bool = True
    only: list | None = None
    zeros: str | None = None
    cache_dir: str | None = None
    out_dir: str | None = None
    out: str | None = None
    csv: str | None = None
    seed: int = 0
    threads: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def X(self) -> float:
        return self.T ** self.X_exp

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and v != {}}


# ------------------------------------------------------------------ parsing

def _floats(s: str) -> list:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip()]


class _Parser(argparse.ArgumentParser):
    # a bad command line is a precondition failure (exit 1); 2 is kept for numeric failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="meanlab", description="Weighted Dirichlet polynomials, log zeta and pair correlation.")
    ap.add_argument("--version", action="version", version=f"meanlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zeros", help="zero table file (.ztbl); default: cached table built on demand")
    common.add_argument("--cache-dir", help="cache directory (default $MEANLAB_CACHE or ~/.cache/meanlab)")
    common.add_argument("--out-dir", help="directory for the report JSON (default: print to stdout)")
    common.add_argument("--out", help="report path (zeros: table path)")
    common.add_argument("--csv", help="write the command's curve as CSV here")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, help="cap on worker threads")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeros", parents=[common], help="locate and certify zeros up to a height")
    p.add_argument("--height", type=float, required=True)

    p = sub.add_parser("check-weights", parents=[common], help="certify the weight conditions")
    p.add_argument("--T", type=float, default=1e4)
    p.add_argument("--X-exp", type=float, default=1.5)
    p.add_argument("--weight", default="fejer")

    p = sub.add_parser("keyprop", parents=[common], help="weighted sum vs smoothed log zeta")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--X-exp", type=float, default=2.0)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--weight", default="fejer")

    p = sub.add_parser("logderiv-conv", parents=[common], help="log-derivative sum vs S convolution")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--X-exp", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=64)

    p = sub.add_parser("moments", parents=[common], help="2k-th moments of the weighted sum")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--X-exp", type=float, required=True)
    p.add_argument("--k", type=float, required=True, help="k, so the power is 2k (k = 1.5 gives the cube)")
    p.add_argument("--part", choices=("re", "im", "abs"), default="abs")
    p.add_argument("--theta", type=float, default=0.25)
    p.add_argument("--weight", default="fejer")

    p = sub.add_parser("logderiv-moment", parents=[common], help="mean square of the log-derivative sum")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--X-exp", type=float, required=True)

    p = sub.add_parser("scorr", parents=[common], help="shifted S correlations")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--y1", type=float, default=0.0)
    p.add_argument("--y2", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.4)
    p.add_argument("--no-residual", dest="residual", action="store_false")

    p = sub.add_parser("pair-correlation", parents=[common], help="F(u, T) on a u grid")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--u", type=_floats, help="comma-separated u values (default 0..3 step 0.05)")

    p = sub.add_parser("tails", parents=[common], help="large values of the weighted sum")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--X-exp", type=float, default=2.0)
    p.add_argument("--part", choices=("re", "im"), default="re")
    p.add_argument("--W", type=_floats, help="comma-separated W values (default sqrt(log log T) x 1..4)")
    p.add_argument("--weight", default="fejer")

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", type=_ints, help="comma-separated criterion numbers")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in fields}
    return RunConfig(**kw)


# ------------------------------------------------------------------ commands

def _zeros_for(cfg: RunConfig, height: float) -> zr.ZeroTable:
    return store.zero_table(height, cfg.zeros, cfg.cache_dir)


def _grid_cache(cfg: RunConfig) -> Path:
    return store.cache_root(cfg.cache_dir) / "grids"


def cmd_zeros(cfg: RunConfig) -> dict:
    import time
    t0 = time.perf_counter()
    zt = zr.locate_zeros(cfg.height)
    path = Path(cfg.out) if cfg.out else store.cache_root(cfg.cache_dir) / f"zeros_h{int(math.ceil(cfg.height))}.ztbl"
    zr.save_table(zt, path)
    cfg.out = None  # the table, not a report, went to --out
    return {"schema": E.SCHEMA, "name": "zeros", "params": {"height": cfg.height}, "count": len(zt),
            "certified": zt.certified, "meta": zt.meta, "path": str(path),
            "first": zt.ordinates[:5].tolist(), "runtime_s": time.perf_counter() - t0}


def cmd_check_weights(cfg: RunConfig) -> dict:
    w = make_weight(cfg.weight, cfg.X)
    rep = check_properties(w)
    inv = {str(p): fourier_inversion_check(w, p, 1.0) for p in (2, 3, 5, 7)}
    return {"schema": E.SCHEMA, "name": "check-weights", "params": {"T": cfg.T, "X": cfg.X, "weight": cfg.weight},
            "properties": E._clean(rep.as_dict()), "fourier_inversion_truncation_1": inv,
            "inversion_bound_10_over_logX": 10 / w.logX}


def cmd_keyprop(cfg: RunConfig):
    X = cfg.X
    zt = _zeros_for(cfg, 2 * cfg.T + 2) if cfg.sigma == 0.5 else None
    return E.check_key_prop(cfg.T, X, make_weight(cfg.weight, X), cfg.sigma, cfg.samples, zt,
                            store.arith_tables(X), seed=cfg.seed)


def cmd_logderiv_conv(cfg: RunConfig):
    X = cfg.X
    zt = _zeros_for(cfg, 2 * cfg.T + math.log(cfg.T))
    return E.check_logderiv_conv(cfg.T, X, cfg.samples, zt, store.arith_tables(X), seed=cfg.seed)


def cmd_moments(cfg: RunConfig):
    X = cfg.X
    two_k = 2 * cfg.k
    if abs(two_k - round(two_k)) > 1e-12:
        raise PreconditionError("2k must be an integer")
    two_k = int(round(two_k))
    V = make_weight(cfg.weight, X)
    tb = store.arith_tables(X)
    rep = E.moment_report(cfg.T, X, two_k, cfg.part, cfg.theta, V=V, tables=tb, cache_dir=_grid_cache(cfg))
    if cfg.csv:
        spec = pe.weighted_vm(X, V, tb)
        pe.eval_grid(spec, cfg.T, rep.params["count"], cache_dir=_grid_cache(cfg)).to_csv(cfg.csv)
        rep.artifacts.append(cfg.csv)
    return rep


def cmd_logderiv_moment(cfg: RunConfig):
    X = cfg.X
    zt = _zeros_for(cfg, 2 * cfg.T) if X >= cfg.T else None
    return E.logderiv_moment_report(cfg.T, X, zt, store.arith_tables(X), cache_dir=_grid_cache(cfg))


def cmd_scorr(cfg: RunConfig):
    T = cfg.T
    zt = _zeros_for(cfg, T + math.log(T) + max(1.0, pe.ZX_MARGIN))
    tb = store.arith_tables(max(T ** cfg.beta, 1e6) + 1)
    return E.s_correlation_report(T, cfg.y1, cfg.y2, zt, tb, cfg.beta, residual=cfg.residual)


def cmd_pair_correlation(cfg: RunConfig) -> dict:
    import time
    t0 = time.perf_counter()
    zt = _zeros_for(cfg, cfg.T)
    u = np.asarray(cfg.u if cfg.u else np.round(np.arange(0, 61) * 0.05, 10))
    F = zr.pair_correlation_F(u, zt, cfg.T)
    target = np.where(np.abs(u) <= 1, np.abs(u) + cfg.T ** (-2 * np.abs(u)) * math.log(cfg.T), np.nan)
    artifacts = []
    if cfg.csv:
        with open(cfg.csv, "w") as fh:
            fh.write("u,F\n")
            for a, b in zip(u, F):
                fh.write(f"{float(a)!r},{float(b)!r}\n")
        artifacts.append(cfg.csv)
    return E._clean({"schema": E.SCHEMA, "name": "pair-correlation", "params": {"T": cfg.T, "zeros_used": int(zt.count(cfg.T))},
                     "u": u, "F": F, "shape_target": target, "artifacts": artifacts,
                     "runtime_s": time.perf_counter() - t0})


def cmd_tails(cfg: RunConfig):
    X = cfg.X
    l2 = math.log(math.log(cfg.T))
    W = cfg.W if cfg.W else list(math.sqrt(l2) * np.linspace(1.0, 4.0, 13))
    rep = E.tail_report(cfg.T, X, cfg.part, W, V=make_weight(cfg.weight, X), tables=store.arith_tables(X),
                        cache_dir=_grid_cache(cfg), csv_path=cfg.csv)
    emp = np.asarray(rep.diagnostics["empirical_tail"])
    bnd = np.asarray(rep.diagnostics["bound"])
    if np.any(emp > rep.components["safety_factor"] * bnd):
        raise ValidationFailure(rep)
    return rep


def cmd_verify_all(cfg: RunConfig) -> dict:
    ctx = acceptance.Context(cache_dir=cfg.cache_dir, zeros_path=cfg.zeros)
    results = acceptance.run_all(ctx, only=cfg.only, echo=lambda s: print(s, file=sys.stderr))
    doc = {"schema": E.SCHEMA, "name": "verify-all", "criteria": [r.to_dict() for r in results],
           "passed": all(r.passed for r in results)}
    if not doc["passed"]:
        raise ValidationFailure(doc)
    return doc


HANDLERS = {"zeros": cmd_zeros, "check-weights": cmd_check_weights, "keyprop": cmd_keyprop,
            "logderiv-conv": cmd_logderiv_conv, "moments": cmd_moments, "logderiv-moment": cmd_logderiv_moment,
            "scorr": cmd_scorr, "pair-correlation": cmd_pair_correlation, "tails": cmd_tails,
            "verify-all": cmd_verify_all}


def _document(result, cfg: RunConfig) -> dict:
    doc = result.to_dict() if isinstance(result, E.ExperimentReport) else dict(result)
    doc["config"] = E._clean(cfg.as_dict())
    return doc


def _emit(doc: dict, cfg: RunConfig) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text)
    elif cfg.out_dir:
        d = Path(cfg.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{cfg.command}.json").write_text(text)
    else:
        sys.stdout.write(text)


def _set_threads(n: int | None) -> None:
    if not n:
        return
    import numba
    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def dispatch(cfg: RunConfig) -> int:
    if cfg.command not in HANDLERS:
        print(f"meanlab: unknown command {cfg.command!r}", file=sys.stderr)
        return 1
    try:
        _set_threads(cfg.threads)
        result = HANDLERS[cfg.command](cfg)
    except ValidationFailure as vf:
        payload = vf.args[0]
        _emit(_document(payload, cfg), cfg)
        print(f"meanlab {cfg.command}: validation corridor failed", file=sys.stderr)
        return 1
    except NumericError as e:
        print(f"meanlab {cfg.command}: numeric failure: {e}", file=sys.stderr)
        return 2
    except (PreconditionError, ValueError, FileNotFoundError) as e:
        print(f"meanlab {cfg.command}: {e}", file=sys.stderr)
        return 1
    _emit(_document(result, cfg), cfg)
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return dispatch(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
