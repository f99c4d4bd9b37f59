"""Critical-line zeros: location, completeness certificates, persistence and
the pair-correlation form factor F(u, T).

Zeros are bracketed between Gram points, missing sign changes inside Gram
blocks are recovered by subdivision, and completeness up to a good Gram point
g_n is certified by Brent's form of Turing's method: K consecutive Gram blocks
after g_n obeying Rosser's rule, with K >= 0.0061 log^2 g + 0.08 log g, give
N(g_n) <= n + 1, while n + 1 located sign changes give the matching lower bound.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numba as nb
import numpy as np
from scipy.special import lambertw, sici

from . import quadrature as quad
from ._vecmath import _FM, vcos, vsin, vsincos
from .errors import (CertificationError, ChecksumError, CorruptFileError, CoverageError,
                     DomainError, UnsupportedVersionError)
from .zeta_core import _EM_B, _RS, EM_BELOW, _em_zeta1, _rs_Z1, _theta1, _theta_arr

T_START = 10.0
MAX_HALVINGS = 20
ROOT_XTOL = 1e-10


@dataclass(frozen=True)
class ZeroTable:
    """Ascending ordinates of the zeros 1/2 + i gamma with 0 < gamma <= height."""

    height: float
    ordinates: np.ndarray
    certified: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        o = np.ascontiguousarray(self.ordinates, dtype=np.float64)
        if o.size and (np.any(np.diff(o) <= 0) or o[0] <= 14.0 or o[-1] > self.height):
            raise ValueError("ordinates must be strictly increasing and lie in (14, height]")
        o.setflags(write=False)
        object.__setattr__(self, "ordinates", o)

    def __len__(self) -> int:
        return int(self.ordinates.size)

    def count(self, t) -> np.ndarray:
        """N(t), the number of tabulated ordinates <= t."""
        return np.searchsorted(self.ordinates, np.asarray(t, dtype=float), side="right")

    def upto(self, t: float) -> np.ndarray:
        return self.ordinates[: int(self.count(t))]

    def require(self, t: float) -> None:
        if not self.certified:
            raise CoverageError("zero table is not certified complete")
        if t > self.height:
            raise CoverageError(f"zero table reaches {self.height:g}, need {t:g}")


# --------------------------------------------------------------------- Z and roots

@nb.njit(cache=True)
def _zbest(t, rs, bern):
    if t >= EM_BELOW:
        return _rs_Z1(t, rs)
    v, _ = _em_zeta1(0.5, t, bern)
    th = _theta1(t)
    return (complex(math.cos(th), math.sin(th)) * v).real


@nb.njit(cache=True)
def _zbest_arr(ts, rs, bern):
    out = np.empty(ts.size)
    for i in range(ts.size):
        out[i] = _zbest(ts[i], rs, bern)
    return out


@nb.njit(cache=True)
def _refine(lo, hi, flo, fhi, rs, bern, xtol):
    """Illinois regula falsi on brackets with flo * fhi < 0; every fourth step bisects."""
    out = np.empty(lo.size)
    for i in range(lo.size):
        a, b, fa, fb = lo[i], hi[i], flo[i], fhi[i]
        last = 0
        for it in range(400):
            if b - a <= xtol:
                break
            c = 0.5 * (a + b)
            if it % 4 != 3:
                r = (a * fb - b * fa) / (fb - fa)
                if a < r < b:
                    c = r
            fc = _zbest(c, rs, bern)
            if fc == 0.0:
                a = b = c
                break
            if (fc < 0) == (fa < 0):
                a, fa = c, fc
                if last == -1:
                    fb *= 0.5
                last = -1
            else:
                b, fb = c, fc
                if last == 1:
                    fa *= 0.5
                last = 1
        out[i] = 0.5 * (a + b)
    return out


def Z_best(t):
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = _zbest_arr(arr.ravel(), _RS, _EM_B).reshape(arr.shape)
    return out if np.ndim(t) else float(out[0])


def gram_points(n_lo: int, n_hi: int) -> np.ndarray:
    """g_n for n_lo <= n <= n_hi, solving theta(g) = n pi by Newton."""
    n = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    if n_lo < 0:
        raise DomainError("Gram points are only tabulated from n = 0")
    g = 2 * math.pi * math.e * np.exp(np.real(lambertw((n + 0.125) / math.e)))
    g = np.maximum(g, 15.0)
    for _ in range(60):
        step = (_theta_arr(g) - n * math.pi) / (0.5 * np.log(g / (2 * math.pi)))
        g = g - step
        if np.max(np.abs(step)) < 1e-13 * np.max(g):
            break
    return g


def gram_index_at(t: float) -> int:
    """Largest n with g_n <= t."""
    return int(math.floor(_theta1(max(t, 17.9)) / math.pi))


# --------------------------------------------------------------------- Gram-block scanning

@dataclass
class _Block:
    t0: float
    t1: float
    n0: int  # Gram index at the left end (-1 for the segment starting at t = 10)
    expected: int
    roots: np.ndarray


def _sign_changes(ts: np.ndarray, zs: np.ndarray):
    s = np.signbit(zs)
    idx = np.flatnonzero(s[1:] != s[:-1])
    return idx


def _scan_block(ts: np.ndarray, zs: np.ndarray, expected: int):
    """Find at least ``expected`` sign changes on [ts[0], ts[-1]] by refinement.

    ``ts`` holds the Gram points of the block (plus the end); each pass halves
    every sub-interval. Returns bracket arrays (lo, hi, flo, fhi).
    """
    for _ in range(MAX_HALVINGS + 1):
        idx = _sign_changes(ts, zs)
        if idx.size >= expected:
            return ts[idx], ts[idx + 1], zs[idx], zs[idx + 1]
        mids = 0.5 * (ts[1:] + ts[:-1])
        zm = _zbest_arr(mids, _RS, _EM_B)
        t2 = np.empty(ts.size + mids.size)
        z2 = np.empty_like(t2)
        t2[0::2], t2[1::2] = ts, mids
        z2[0::2], z2[1::2] = zs, zm
        ts, zs = t2, z2
    idx = _sign_changes(ts, zs)
    return ts[idx], ts[idx + 1], zs[idx], zs[idx + 1]


def _blocks_from(gpts: np.ndarray, zg: np.ndarray, n_first: int) -> list[tuple[int, int]]:
    """Split a run of Gram points into Gram blocks (pairs of positions into ``gpts``).

    ``gpts[0]`` must be good. A point i is good when (-1)^(n_first+i) Z > 0.
    """
    n = n_first + np.arange(gpts.size)
    good = np.where(n % 2 == 0, zg > 0, zg < 0)
    pos = np.flatnonzero(good)
    return [(int(a), int(b)) for a, b in zip(pos[:-1], pos[1:])]


def brent_K(g: float) -> int:
    lg = math.log(g)
    return int(math.ceil(0.0061 * lg * lg + 0.08 * lg))


def _scan_range(t_lo: float, n_lo: int, n_hi: int):
    """Scan from t_lo (a good point with Gram index n_lo, possibly the pseudo-point 10)
    through Gram point g_{n_hi}. Returns (points, values, index offset, blocks)."""
    g = gram_points(max(n_lo + 1, 0), n_hi)
    pts = np.concatenate([[t_lo], g])
    zg = _zbest_arr(pts, _RS, _EM_B)
    blocks = []
    for a, b in _blocks_from(pts, zg, n_lo):
        lo, hi, flo, fhi = _scan_block(pts[a:b + 1].copy(), zg[a:b + 1].copy(), b - a)
        blocks.append(_Block(pts[a], pts[b], n_lo + a, b - a, np.column_stack([lo, hi, flo, fhi])))
    return pts, zg, blocks


def _certify_after(blocks: list[_Block], H: float):
    """Good Gram point g_n >= H followed by K Rosser blocks; returns (n, g_n, K, g_p) or None."""
    for i, blk in enumerate(blocks):
        if blk.t0 < H or blk.n0 < 0:
            continue
        # the block ending at g_p decides K
        run = 0
        for j in range(i, len(blocks)):
            if len(blocks[j].roots) < blocks[j].expected:
                break
            run += 1
            if run >= brent_K(blocks[j].t1):
                return blk.n0, blk.t0, run, blocks[j].t1
        return None
    return None


def _collect(blocks: list[_Block], t_max: float) -> np.ndarray:
    br = [b.roots for b in blocks if b.t0 < t_max and len(b.roots)]
    if not br:
        return np.zeros(0)
    arr = np.concatenate(br)
    roots = _refine(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy(), _RS, _EM_B, ROOT_XTOL)
    return np.sort(roots)


def _failed(blocks: list[_Block]) -> list[tuple]:
    return [(b.t0, b.t1, b.expected, len(b.roots)) for b in blocks if len(b.roots) < b.expected]


def locate_zeros(height: float) -> ZeroTable:
    """All zeros 0 < gamma <= height, certified complete, or CertificationError."""
    if not 50.0 <= height <= 1e6:
        raise DomainError("height must lie in [50, 1e6]")
    if _zbest(T_START, _RS, _EM_B) >= 0:
        raise CertificationError("unexpected sign of Z at the starting point", [])
    n_hi = gram_index_at(height) + 8
    while True:
        pts, zg, blocks = _scan_range(T_START, -1, n_hi)
        cert = _certify_after(blocks, height)
        if cert is not None:
            break
        if n_hi > gram_index_at(height) + 400:
            raise CertificationError("no run of Rosser blocks found past the target height", _failed(blocks))
        n_hi += 16
    n, g_n, K, g_p = cert
    roots = _collect(blocks, g_n)
    in_range = roots[roots <= g_n]
    if in_range.size != n + 1:
        bad = _failed([b for b in blocks if b.t0 < g_n])
        raise CertificationError(f"found {in_range.size} zeros up to g_{n}={g_n:.6f}, Turing bound gives {n + 1}", bad)
    ordinates = in_range[in_range <= height]
    meta = {"g_n": float(g_n), "n": int(n), "K": int(K), "g_p": float(g_p), "root_xtol": ROOT_XTOL, "method": "gram-rosser-brent"}
    return ZeroTable(height=float(height), ordinates=ordinates, certified=True, meta=meta)


def verify_table(ordinates: np.ndarray, height: float) -> dict:
    """Re-certify a table loaded from disk.

    Z alternates in sign across midpoints between consecutive ordinates, which
    gives at least ``len(ordinates)`` zeros on (10, height]; the gap up to the
    next good Gram point and the Rosser blocks after it are rescanned, and
    Brent's bound closes the count. Raises CertificationError on failure.
    """
    o = np.asarray(ordinates, dtype=float)
    if o.size == 0:
        raise CertificationError("empty table", [])
    probes = np.concatenate([[T_START], 0.5 * (o[1:] + o[:-1]), [height]])
    zp = _zbest_arr(probes, _RS, _EM_B)
    alternating = np.all(np.signbit(zp[1:]) != np.signbit(zp[:-1])) and zp[0] < 0
    if not alternating or o[-1] >= height:
        raise CertificationError("Z does not alternate between tabulated ordinates", [])
    # start the tail scan at the last good Gram point below the top ordinate
    n0 = gram_index_at(o[-1])
    while n0 >= 0:
        g0 = gram_points(n0, n0)[0]
        z0 = _zbest(g0, _RS, _EM_B)
        if (z0 > 0) == (n0 % 2 == 0):
            break
        n0 -= 1
    if n0 < 0:
        raise CertificationError("no good Gram point below the table top", [])
    n_hi = gram_index_at(height) + 8
    while True:
        pts, zg, blocks = _scan_range(g0, n0, n_hi)
        cert = _certify_after(blocks, height)
        if cert is not None:
            break
        if n_hi > gram_index_at(height) + 400:
            raise CertificationError("no run of Rosser blocks past the table height", _failed(blocks))
        n_hi += 16
    n, g_n, K, g_p = cert
    extra = _collect(blocks, g_n)
    extra = extra[(extra > height) & (extra <= g_n)]
    total = o.size + extra.size
    if total != n + 1:
        raise CertificationError(f"table holds {o.size} zeros and {extra.size} lie in (height, g_n]; expected {n + 1}",
                                 _failed(blocks))
    return {"g_n": float(g_n), "n": int(n), "K": int(K), "g_p": float(g_p)}


# --------------------------------------------------------------------- persistence

MAGIC = b"ZTBL"
VERSION = 1
_HEADER = struct.Struct("<4sIQd")


@nb.njit(cache=True)
def _crc64_update(crc, data, table):
    for b in data:
        crc = table[(crc ^ np.uint64(b)) & np.uint64(0xFF)] ^ (crc >> np.uint64(8))
    return crc


def _crc64_table() -> np.ndarray:
    poly = 0xC96C5795D7870F42  # reflected ECMA-182
    tab = np.zeros(256, dtype=np.uint64)
    for i in range(256):
        c = i
        for _ in range(8):
            c = (c >> 1) ^ poly if c & 1 else c >> 1
        tab[i] = c
    return tab


_CRC_TABLE = _crc64_table()


def crc64(data: bytes) -> int:
    """CRC-64/XZ (reflected ECMA-182 polynomial, all-ones init and final xor)."""
    arr = np.frombuffer(data, dtype=np.uint8)
    crc = _crc64_update(np.uint64(0xFFFFFFFFFFFFFFFF), arr, _CRC_TABLE)
    return int(crc) ^ 0xFFFFFFFFFFFFFFFF


def save_table(zeros: ZeroTable, path) -> None:
    body = _HEADER.pack(MAGIC, VERSION, len(zeros), float(zeros.height)) + zeros.ordinates.astype("<f8").tobytes()
    Path(path).write_bytes(body + struct.pack("<Q", crc64(body)))


def load_table(path, verify: bool = True) -> ZeroTable:
    """Read a table; with ``verify`` the completeness certificate is re-established."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size + 8:
        raise CorruptFileError(f"{path}: file too short")
    magic, version, count, height = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptFileError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 8 * count + 8
    if len(raw) != expected:
        raise CorruptFileError(f"{path}: length {len(raw)} does not match count {count}")
    (stored,) = struct.unpack_from("<Q", raw, len(raw) - 8)
    if crc64(raw[:-8]) != stored:
        raise ChecksumError(f"{path}: checksum mismatch")
    ords = np.frombuffer(raw, dtype="<f8", count=count, offset=_HEADER.size).astype(np.float64)
    try:
        zt = ZeroTable(height=height, ordinates=ords, certified=False, meta={"source": str(path)})
    except ValueError as exc:
        raise CorruptFileError(f"{path}: {exc}") from None
    if not verify:
        return zt
    meta = verify_table(ords, height)
    meta["source"] = str(path)
    return ZeroTable(height=height, ordinates=ords, certified=True, meta=meta)


# --------------------------------------------------------------------- pair correlation

def band_width(n_zeros: int, eps: float = 1e-8) -> float:
    """Delta with w(Delta) * pairs < eps, so pairs farther apart than Delta are negligible."""
    pairs = max(n_zeros * (n_zeros - 1) / 2, 1.0)
    return math.sqrt(max(4.0 * pairs / eps - 4.0, 0.0))


@nb.njit(cache=True, fastmath=_FM)
def _pair_cos_sum(g, omegas, band):
    """sum_{i<j, g_j - g_i <= band} w(d) cos(omega d) for each omega; row-wise compensated."""
    m = omegas.size
    tot = np.zeros(m)
    comp = np.zeros(m)
    row = np.empty(m)
    n = g.size
    for i in range(n):
        row[:] = 0.0
        for j in range(i + 1, n):
            d = g[j] - g[i]
            if d > band:
                break
            w = 4.0 / (4.0 + d * d)
            for k in range(m):
                row[k] += w * vcos(omegas[k] * d)
        for k in range(m):
            y = row[k] - comp[k]
            s = tot[k] + y
            comp[k] = (s - tot[k]) - y
            tot[k] = s
    return tot


def _F_check(zeros: ZeroTable, T: float) -> np.ndarray:
    if T < 100:
        raise DomainError("T must be >= 100")
    zeros.require(T)
    return zeros.upto(T)


def pair_correlation_F(u, zeros: ZeroTable, T: float, band: float | None = None):
    """F(u, T) = 2 pi/(T log T) sum_{0<g,g'<=T} T^{iu(g-g')} w(g-g').

    The ordered double sum is folded onto pairs i < j, so the imaginary part
    is zero by symmetry and F(-u) = F(u) exactly. ``band`` defaults to the
    width at which the neglected pairs are provably below 1e-8 in total.
    """
    g = _F_check(zeros, T)
    L = math.log(T)
    us = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
    if band is None:
        band = band_width(g.size)
    off = _pair_cos_sum(g, us * L, float(band))
    F = 2 * math.pi / (T * L) * (g.size + 2.0 * off)
    return F if np.ndim(u) else float(F[0])


def pair_correlation_F_dense(u: float, zeros: ZeroTable, T: float) -> complex:
    """Reference O(n^2) ordered-pair sum with complex exponentials (small tables only)."""
    g = _F_check(zeros, T)
    if g.size > 4000:
        raise DomainError("dense reference limited to 4000 zeros")
    L = math.log(T)
    d = g[:, None] - g[None, :]
    s = np.sum(np.exp(1j * u * L * d) * 4.0 / (4.0 + d * d))
    return complex(2 * math.pi / (T * L) * s)


def pair_correlation_F_fourier(u: float, zeros: ZeroTable, T: float, cutoff: float = 20.0) -> float:
    """Independent route through w(x) = int exp(-2|xi|) exp(i xi x) d xi:

    F = 2pi/(T log T) * int exp(-2|xi|) |sum_gamma exp(i (xi + u log T) gamma)|^2 d xi.
    Cost grows like (zeros) * (ordinate span); meant for small tables.
    """
    g = _F_check(zeros, T)
    L = math.log(T)
    c = g - g.mean()
    span = max(float(np.max(np.abs(c))), 1.0)
    h = 2.0 / span
    edges = np.concatenate([np.arange(-cutoff, 0.0, h), np.arange(0.0, cutoff + h / 2, h)])
    edges = np.unique(np.concatenate([edges, [-cutoff, 0.0, cutoff]]))
    x, wt = quad.composite_nodes(edges, 16)
    total = 0.0
    step = max(1, int(4e6 // g.size))
    for i in range(0, x.size, step):
        xi = x[i:i + step]
        s = np.exp(1j * np.outer(xi + u * L, c)).sum(axis=1)
        total += float(np.sum(wt[i:i + step] * np.exp(-2 * np.abs(xi)) * np.abs(s) ** 2))
    return 2 * math.pi / (T * L) * total


@nb.njit(cache=True, fastmath=_FM)
def _pair_unit_integral(g, L, b):
    # sum_{i<j} w(d) * int_b^{b+1} cos(u L d) du, closed form per pair
    tot = 0.0
    comp = 0.0
    n = g.size
    for i in range(n):
        row = 0.0
        for j in range(i + 1, n):
            d = g[j] - g[i]
            c = L * d
            w = 4.0 / (4.0 + d * d)
            if c < 1e-6:
                row += w * (1.0 - ((b + 1) ** 3 - b ** 3) * c * c / 6.0)
            else:
                row += w * (vsin((b + 1) * c) - vsin(b * c)) / c
        y = row - comp
        s = tot + y
        comp = (s - tot) - y
        tot = s
    return tot


def F_unit_integral(b: float, zeros: ZeroTable, T: float, nodes: int = 64, method: str = "quadrature") -> float:
    """int_b^{b+1} F(u, T) du.

    ``method="quadrature"`` applies a ``nodes``-point Gauss-Legendre rule to
    sampled F; ``method="exact"`` integrates each pair term in closed form.
    """
    if b < 0:
        raise DomainError("b must be >= 0")
    if method == "quadrature":
        x, w = quad.gauss_legendre(nodes)
        us = b + 0.5 * (x + 1.0)
        return float(0.5 * np.dot(w, pair_correlation_F(us, zeros, T)))
    if method == "exact":
        g = _F_check(zeros, T)
        L = math.log(T)
        return 2 * math.pi / (T * L) * (g.size + 2.0 * _pair_unit_integral(g, L, float(b)))
    raise ValueError("method must be 'quadrature' or 'exact'")


@nb.njit(cache=True, fastmath=_FM)
def _pair_poly_kernel(g, L, a, U):
    """sum_{i<j} w(d) int_1^U cos(u c) (1 - a u)^2 du with c = L d and U = 1/a."""
    tot = 0.0
    comp = 0.0
    n = g.size
    gl_x = np.array([-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                     0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363])
    gl_w = np.array([0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                     0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763])
    for i in range(n):
        row = 0.0
        for j in range(i + 1, n):
            d = g[j] - g[i]
            c = L * d
            w = 4.0 / (4.0 + d * d)
            if c * (U - 1.0) < 2.0:
                s = 0.0
                for k in range(8):
                    u = 1.0 + 0.5 * (U - 1.0) * (gl_x[k] + 1.0)
                    s += gl_w[k] * vcos(c * u) * (1.0 - a * u) ** 2
                val = 0.5 * (U - 1.0) * s
            else:
                g1 = (1.0 - a) ** 2
                dg1 = -2.0 * a * (1.0 - a)
                sn, cs = vsincos(c)
                e_u = -2.0 * a * a * vsin(c * U) / c ** 3
                e_1 = sn * g1 / c + cs * dg1 / c ** 2 - 2.0 * a * a * sn / c ** 3
                val = e_u - e_1
            row += w * val
        y = row - comp
        s2 = tot + y
        comp = (s2 - tot) - y
        tot = s2
    return tot


def F_poly_integral(zeros: ZeroTable, t: float, logX: float) -> float:
    """int_1^{log X/log t} F(u, t) (1 - u log t / log X)^2 du, exactly per pair (0 if X <= t)."""
    g = _F_check(zeros, t)
    L = math.log(t)
    U = logX / L
    if U <= 1.0:
        return 0.0
    a = 1.0 / U
    diag = (1.0 - a) ** 3 / (3.0 * a)
    off = _pair_poly_kernel(g, L, a, U)
    return 2 * math.pi / (t * L) * (g.size * diag + 2.0 * off)


def _J(omega: np.ndarray, U: float) -> np.ndarray:
    """int_1^U cos(omega u)/u^2 du for omega >= 0 (U may be inf)."""
    om = np.abs(omega)
    si1, _ = sici(om)
    if math.isinf(U):
        return np.cos(om) - om * (math.pi / 2 - si1)
    siU, _ = sici(om * U)
    return np.cos(om) - np.cos(om * U) / U - om * (siU - si1)


OMEGA_ASYMP = 60.0
_ASYMP_TERMS = 14


@nb.njit(inline="always", fastmath=_FM)
def _cos_u2_antideriv(om, u):
    # integration by parts of cos(om u)/u^2; truncation error ~ 14!/(om u)^15 for om u >= 60
    sn, cs = vsincos(om * u)
    acc = 0.0
    coef = 1.0 / om
    m = 2.0
    up = 1.0 / (u * u)
    for k in range(_ASYMP_TERMS):
        if k % 2 == 0:
            acc += coef * sn * up
            coef *= m / om
        else:
            acc -= coef * cs * up
            coef *= -m / om
        up /= u
        m += 1.0
    return acc


@nb.njit(cache=True, fastmath=_FM)
def _pair_cos_u2(g, L, b, U, om_min):
    """Pair sum of w(d) * (J(c+b) + J(c-b))/2 with J(om) = int_1^U cos(om u)/u^2 du.

    Pairs with |c - b| < om_min are skipped and their gaps returned for the
    caller to handle with exact Si/Ci; the rest use the asymptotic antiderivative.
    """
    n = g.size
    tot = 0.0
    comp = 0.0
    tail = 0.0
    n_small = 0
    for i in range(n):
        for j in range(i + 1, n):
            d = g[j] - g[i]
            if L * d - b >= om_min:
                break
            n_small += 1
    small = np.empty(n_small)
    k = 0
    for i in range(n):
        row = 0.0
        for j in range(i + 1, n):
            d = g[j] - g[i]
            c = L * d
            if c - b < om_min:
                small[k] = d
                k += 1
                continue
            w = 4.0 / (4.0 + d * d)
            jp = _cos_u2_antideriv(c + b, U) - _cos_u2_antideriv(c + b, 1.0)
            jm = _cos_u2_antideriv(c - b, U) - _cos_u2_antideriv(c - b, 1.0)
            row += w * 0.5 * (jp + jm)
            tail += w * (1.0 / (c + b) + 1.0 / (c - b))
        y = row - comp
        s2 = tot + y
        comp = (s2 - tot) - y
        tot = s2
    return tot, tail, small


def F_cos_integral(zeros: ZeroTable, T: float, delta: float, U_max: float = 64.0):
    """int_1^inf F(u, T) cos(u delta log T)/u^2 du, cutting only the pair terms at U_max.

    The diagonal part of F does not depend on u, so it is integrated to
    infinity in closed form. Each pair term is integrated exactly up to
    ``U_max``. Returns (value, tail_bound), where tail_bound bounds the
    discarded pair integrals over (U_max, inf) by
    sum of w(d) * (1/|c+b| + 1/|c-b|) / U_max^2.
    """
    g = _F_check(zeros, T)
    L = math.log(T)
    b = abs(delta) * L
    diag = g.size * float(_J(np.array([b]), math.inf)[0])
    off, tail, small = _pair_cos_u2(g, L, b, float(U_max), OMEGA_ASYMP)
    if small.size:
        w = 4.0 / (4.0 + small * small)
        c = L * small
        off += math.fsum(w * 0.5 * (_J(c + b, U_max) + _J(c - b, U_max)))
        tail += float(np.sum(w * (1.0 / np.maximum(c + b, 1e-12) + 1.0 / np.maximum(np.abs(c - b), 1e-12))))
    val = 2 * math.pi / (T * L) * (diag + 2.0 * off)
    return val, 2 * math.pi / (T * L) * tail / U_max**2
