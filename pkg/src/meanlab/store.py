"""Shared zero and arithmetic tables.

Zero tables are persisted as ``.ztbl`` files under the cache directory
(``MEANLAB_CACHE`` unless given explicitly); arithmetic tables are cheap to
sieve and are only shared within the process.
"""

from __future__ import annotations

import math
import os
import re
from pathlib import Path

from . import zeros as zr
from .arith import ArithTables, build_tables
from .errors import CoverageError, PreconditionError

_ZNAME = re.compile(r"^zeros_h(\d+)\.ztbl$")
_TABLES: dict[str, ArithTables] = {}


def cache_root(cache_dir=None) -> Path:
    if cache_dir is None:
        cache_dir = os.environ.get("MEANLAB_CACHE") or Path.home() / ".cache" / "meanlab"
    p = Path(cache_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def zero_table(height: float, path=None, cache_dir=None) -> zr.ZeroTable:
    """A certified table reaching ``height``.

    With ``path`` the file must exist and cover ``height``. Otherwise the
    smallest cached table that covers it is used, and a new one is located
    and cached when none does.
    """
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise PreconditionError(f"zero table {p} does not exist")
        zt = zr.load_table(p)
        if zt.height < height:
            raise CoverageError(f"zero table {p} reaches {zt.height:g}, need {height:g}")
        return zt
    root = cache_root(cache_dir)
    best = None
    for f in root.iterdir():
        m = _ZNAME.match(f.name)
        if m and int(m.group(1)) >= height and (best is None or int(m.group(1)) < best[0]):
            best = (int(m.group(1)), f)
    if best is not None:
        return zr.load_table(best[1])
    h = int(math.ceil(height))
    zt = zr.locate_zeros(h)
    tmp = root / f".zeros_h{h}.ztbl.{os.getpid()}"
    zr.save_table(zt, tmp)
    os.replace(tmp, root / f"zeros_h{h}.ztbl")
    return zt


def arith_tables(limit: float) -> ArithTables:
    """Tables covering ``limit``; a larger table already built is reused."""
    limit = int(math.ceil(limit))
    have = _TABLES.get("t")
    if have is None or have.limit < limit:
        have = build_tables(max(limit, 1000))
        _TABLES["t"] = have
    return have
