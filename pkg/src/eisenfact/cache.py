"""Optional on-disk store of exact generator expansions.

One text file per generator holds its deepest known expansion::

    eisenfact-series 1
    id F(1,0)
    offset 0
    step 1/2
    prec 50
    weight 6
    <k> <24 space-separated rationals>      (one line per nonzero term)

Term k sits at exponent offset + k*step.  Reading a file back reproduces
the series exactly; a cache only ever changes timings.
"""

from __future__ import annotations

import os
import re
import tempfile
import threading
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .coeffring import RingElem
from .qseries import EXACT, QSeries

FORMAT_VERSION = 1
_MAGIC = "eisenfact-series"


def _filename(gid) -> str:
    safe = re.sub(r"[^A-Za-z0-9]+", "_", str(gid)).strip("_")
    return f"{safe}.v{FORMAT_VERSION}.series"


def dump_series(gid, s: QSeries) -> str:
    lines = [
        f"{_MAGIC} {FORMAT_VERSION}",
        f"id {gid}",
        f"offset {s.offset}",
        f"step {s.step}",
        f"prec {s.prec}",
        f"weight {'-' if s.weight is None else s.weight}",
    ]
    for k in s.data.nonzero_indices():
        c = s.data.element(k)
        lines.append(f"{k} " + " ".join(str(v) for v in c.coeffs))
    return "\n".join(lines) + "\n"


def load_series(text: str, gid=None) -> QSeries:
    rows = text.splitlines()
    head = rows[0].split()
    if len(head) != 2 or head[0] != _MAGIC or int(head[1]) != FORMAT_VERSION:
        raise ValueError("not a series file of this format version")
    meta = dict(r.split(" ", 1) for r in rows[1:6])
    if gid is not None and meta["id"] != str(gid):
        raise ValueError(f"file holds {meta['id']}, expected {gid}")
    offset, step, prec = Fraction(meta["offset"]), Fraction(meta["step"]), Fraction(meta["prec"])
    weight = None if meta["weight"] == "-" else Fraction(meta["weight"])
    terms = {}
    for r in rows[6:]:
        if r.strip():
            parts = r.split()
            terms[int(parts[0])] = RingElem(Fraction(x) for x in parts[1:])
    n = 0
    while offset + n * step < prec:
        n += 1
    zero = RingElem()
    return QSeries.from_elems([terms.get(k, zero) for k in range(n)], offset, step, prec, weight, EXACT)


class DiskCache:
    """Directory of serialized exact expansions keyed by generator id."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def path(self, gid) -> Path:
        return self.dir / _filename(gid)

    def load(self, gid, order) -> Optional[QSeries]:
        p = self.path(gid)
        try:
            s = load_series(p.read_text(encoding="utf-8"), gid)
        except (OSError, ValueError, KeyError, IndexError):
            return None
        if s.prec < Fraction(order):
            return None
        return s

    def store(self, gid, s: QSeries) -> None:
        if s.domain is not EXACT:
            return
        with self._lock:
            old = self.load(gid, s.prec)
            if old is not None:
                return
            fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dump_series(gid, s))
            os.replace(tmp, self.path(gid))
