"""Compactly supported even weights V and their Fourier transforms.

The transform convention is ``Vhat(y) = integral of exp(i x y) V(x) dx``; the
Fejer triangle max(0, 1 - |x|/log X) is the reference member of the class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import quadrature as quad


@dataclass(frozen=True)
class WeightSpec:
    """A bounded even weight supported on [-logX, logX].

    ``V`` is vectorised; calling the WeightSpec itself applies ``V`` and enforces the
    support, so ``w(x)`` is zero outside the interval whatever ``V`` does there.
    ``knots`` lists points where V fails to be smooth (quadrature splits there).
    """

    logX: float
    V: Callable[[np.ndarray], np.ndarray]
    Vhat_closed: Optional[Callable] = None
    m: int = 2
    label: str = "custom"
    knots: tuple = field(default=())

    def __post_init__(self):
        if not self.logX > 0:
            raise ValueError("logX must be positive")
        if self.m < 1:
            raise ValueError("decay exponent m must be >= 1")
        if not self.knots:
            object.__setattr__(self, "knots", (-self.logX, 0.0, self.logX))

    @property
    def X(self) -> float:
        return math.exp(self.logX)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.where(np.abs(x) <= self.logX, np.asarray(self.V(x), dtype=np.float64), 0.0)
        return out if out.ndim else float(out)

    def vhat(self, y):
        """Closed-form transform if available, else the numeric one (real y only)."""
        if self.Vhat_closed is not None:
            return self.Vhat_closed(y)
        ys = np.atleast_1d(np.asarray(y, dtype=np.float64))
        out = np.array([weight_transform(self, float(v)) for v in ys])
        return out if np.ndim(y) else float(out[0])

    def scaled(self, c: float) -> "WeightSpec":
        V, Vh = self.V, self.Vhat_closed
        return WeightSpec(
            logX=self.logX,
            V=lambda x: c * np.asarray(V(x)),
            Vhat_closed=None if Vh is None else (lambda z: c * Vh(z)),
            m=self.m,
            label=f"{c:g}*{self.label}",
            knots=self.knots,
        )


def fejer_weight(X: float) -> WeightSpec:
    """Triangle weight 1 - |x|/log X with transform sin^2(zL/2) / ((z/2)^2 L)."""
    if X < 3:
        raise ValueError("X must be >= 3")
    L = math.log(X)

    def V(x):
        return np.maximum(0.0, 1.0 - np.abs(x) / L)

    def Vhat(z):
        z = np.asarray(z)
        zl = z * L
        small = np.abs(zl) < 1e-4
        safe = np.where(small, 1.0, z)
        main = np.sin(safe * L / 2) ** 2 / ((safe / 2) ** 2 * L)
        series = L * (1 - zl**2 / 12 + zl**4 / 360)
        out = np.where(small, series, main)
        return out if out.ndim else out[()]

    return WeightSpec(logX=L, V=V, Vhat_closed=Vhat, m=2, label="fejer", knots=(-L, 0.0, L))


def sharp_weight(X: float) -> WeightSpec:
    """Indicator of [-log X, log X]; its transform 2 sin(zL)/z only decays like 1/|z|."""
    if X < 3:
        raise ValueError("X must be >= 3")
    L = math.log(X)

    def V(x):
        return np.where(np.abs(x) <= L, 1.0, 0.0)

    def Vhat(z):
        z = np.asarray(z)
        small = np.abs(z * L) < 1e-5
        safe = np.where(small, 1.0, z)
        out = np.where(small, 2 * L * (1 - (z * L) ** 2 / 6), 2 * np.sin(safe * L) / safe)
        return out if out.ndim else out[()]

    return WeightSpec(logX=L, V=V, Vhat_closed=Vhat, m=2, label="sharp", knots=(-L, L))


WEIGHTS = {"fejer": fejer_weight, "sharp": sharp_weight}


def make_weight(label: str, X: float) -> WeightSpec:
    try:
        return WEIGHTS[label](X)
    except KeyError:
        raise ValueError(f"unknown weight {label!r}; choose from {sorted(WEIGHTS)}") from None


def _half_knots(w: WeightSpec) -> np.ndarray:
    k = sorted({abs(float(v)) for v in w.knots} | {0.0, w.logX})
    return np.array([v for v in k if v <= w.logX])


def weight_transform(w: WeightSpec, y: float, quad_tol: float = 1e-12) -> float:
    """Numeric Vhat(y) by adaptive quadrature of 2 * int_0^L V(x) cos(xy) dx.

    Evenness of V is used to fold the integral, so the result is real by
    construction. Raises QuadratureError if ``quad_tol`` cannot be met.
    """
    if quad_tol <= 0:
        raise ValueError("quad_tol must be positive")
    y = abs(float(y))
    kn = _half_knots(w)
    # pre-split so that no starting panel holds more than ~one oscillation
    n_osc = int(math.ceil(y * w.logX / math.pi))
    if n_osc > 1:
        kn = np.union1d(kn, np.linspace(0.0, w.logX, n_osc + 1))
    val, _ = quad.adaptive(lambda x: 2.0 * w(x) * np.cos(x * y), 0.0, w.logX, tol=quad_tol, knots=kn)
    return float(val)


def transform_many(w: WeightSpec, ys, nodes: int = 24) -> np.ndarray:
    """Vhat at many (possibly complex) arguments with one composite rule.

    Panels are sized so |Re y| * width <= 4, which keeps a 24-point rule at
    machine precision for smooth pieces of V.
    """
    ys = np.asarray(ys, dtype=np.complex128).ravel()
    kn = _half_knots(w)
    ymax = float(np.max(np.abs(ys.real))) if ys.size else 0.0
    edges = [kn[0]]
    for a, b in zip(kn[:-1], kn[1:]):
        n = max(1, int(math.ceil((b - a) * ymax / 4.0)))
        edges.extend(np.linspace(a, b, n + 1)[1:])
    x, wt = quad.composite_nodes(np.array(edges), nodes)
    vx = w(x) * wt
    out = np.empty(ys.size, dtype=np.complex128)
    step = max(1, int(2e7 // max(x.size, 1)))
    for i in range(0, ys.size, step):
        out[i:i + step] = 2.0 * (np.cos(np.outer(ys[i:i + step], x)) @ vx)
    return out


@dataclass
class PropertyReport:
    label: str
    logX: float
    m: int
    # (i)
    even_error: float
    support_leak: float
    sup_abs: float
    cond_i: bool
    # (ii): fitted C per vertical line Re z, and the growth ratios used to judge it
    C_ii: dict
    growth_ii: dict
    cond_ii: bool
    # (iii): C for the 1/(1+y^2) envelope, plus the split far/near constants
    C_iii: float
    C_iii_far: float
    C_iii_near: float
    growth_iii: float
    cond_iii: bool

    @property
    def passed(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


GROWTH_LIMIT = 2.0


def _growth(values: np.ndarray, abscissa: np.ndarray, split: float) -> float:
    top = values[abscissa >= split]
    low = values[abscissa < split]
    return float(np.max(top) / max(np.max(low), 1e-300))


def check_properties(w: WeightSpec, samples: int = 200) -> PropertyReport:
    """Numerically certify the three weight-class conditions.

    (ii) and (iii) are asymptotic statements with implicit constants, so each
    is judged by fitting the smallest admissible constant on a sample grid and
    requiring it not to grow: the maximum over the top decade of the grid must
    stay within ``GROWTH_LIMIT`` times the maximum below it. All transforms are
    computed numerically here, independent of ``Vhat_closed``.
    """
    if samples < 100:
        raise ValueError("samples must be >= 100")
    L = w.logX
    xs = np.linspace(-1.5 * L, 1.5 * L, 2 * samples + 1)
    vx = w.V(xs)
    even_error = float(np.max(np.abs(vx - w.V(-xs))))
    # leak is measured on the raw V, the WeightSpec wrapper masks it anyway
    support_leak = float(np.max(np.abs(np.where(np.abs(xs) > L * (1 + 1e-12), vx, 0.0))))
    sup_abs = float(np.max(np.abs(vx)))
    cond_i = even_error <= 1e-12 * max(sup_abs, 1.0) and support_leak == 0.0 and np.isfinite(sup_abs)

    # (ii) on vertical lines Re z = a; Vhat(z/i) = Vhat(b - i a) for z = a + i b
    bs = np.geomspace(10.0, 1e3, samples)
    C_ii, growth_ii = {}, {}
    for a in (0.0, 1.0 / L, 0.5):
        vals = np.abs(transform_many(w, bs - 1j * a)) * bs**w.m / math.exp(a * L)
        C_ii[f"{a:.6g}"] = float(np.max(vals))
        growth_ii[f"{a:.6g}"] = _growth(vals, bs, 1e2)
    # a weight that fails (ii) has constants that grow along the line
    cond_ii = all(g <= GROWTH_LIMIT for g in growth_ii.values())

    # (iii) on real y >= 0 (the quantity is even in y)
    ys = np.concatenate([np.linspace(0.0, 2.0, samples, endpoint=False), np.geomspace(2.0, 1e3, samples)])
    g = np.abs(transform_many(w, ys / L)).real / L
    env = g * (1 + ys**2)
    far = ys >= 2.0
    C_iii = float(np.max(env))
    C_far = float(np.max(g[far] * ys[far] ** 2))
    C_near = float(np.max(g[~far]))
    growth_iii = _growth(env[far], ys[far], 1e2)
    cond_iii = growth_iii <= GROWTH_LIMIT

    return PropertyReport(
        label=w.label, logX=L, m=w.m,
        even_error=even_error, support_leak=support_leak, sup_abs=sup_abs, cond_i=bool(cond_i),
        C_ii=C_ii, growth_ii=growth_ii, cond_ii=bool(cond_ii),
        C_iii=C_iii, C_iii_far=C_far, C_iii_near=C_near, growth_iii=growth_iii, cond_iii=bool(cond_iii),
    )


def fourier_inversion_check(w: WeightSpec, p: int, truncation: float = 1.0, quad_tol: float = 1e-11) -> float:
    """(1/2pi) int_{-T}^{T} cos(y log p) Vhat(y) dy - V(log p) for T = ``truncation``.

    Uses the closed-form transform when the weight has one. At truncation 1
    the difference is of order 1/log X; for large truncations it tends to 0
    at the rate of the transform's tail (about 2/(pi * L * truncation) for Fejer).
    """
    if p < 2:
        raise ValueError("p must be a prime")
    if truncation <= 0:
        raise ValueError("truncation must be positive")
    lp = math.log(p)

    def f(y):
        return np.real(w.vhat(y)) * np.cos(y * lp)

    # knots at the zeros of the Fejer-type kernel keep panels short
    step = math.pi / max(w.logX, lp, 1.0)
    kn = np.arange(step, truncation, step) if truncation / step < 2e5 else None
    val, _ = quad.adaptive(f, 0.0, truncation, tol=quad_tol, knots=kn)
    return float(val / math.pi - w(lp))
