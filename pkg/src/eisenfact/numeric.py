"""Floating-point evaluation of q-series and the numeric checks.

Fricke transformation laws and zero locations cannot be read off a
q-expansion, so they are checked in binary64 at sample points of the upper
half-plane.  Partial sums carry a geometric tail estimate, and generator
depths are raised until that estimate is negligible.
"""

from __future__ import annotations

import cmath
import math
import random
import threading
import time
from fractions import Fraction
from typing import Optional

from .coeffring import complex_embed
from .exprlang import (
    Fricke,
    IdentityEntry,
    NonConvergent,
    eval_constant,
    eval_numeric,
    to_source,
)
from .generators import GeneratorId, Registry
from .qseries import QSeries
from .report import Report

TAIL_TOL = 1e-12
IM_FLOOR = 0.05
TRANSFORM_TOL = 1e-9
ZERO_TOL = 1e-8
GUARD_STEP = 0.01
GUARD_FACTOR = 1e3
MAX_ORDER = 4096
REFERENCE_POINT = 2j


class InsufficientDepth(ValueError):
    pass


def eval_series(s: QSeries, tau: complex, cvals=None) -> tuple[complex, float]:
    """Partial sum of ``s`` at tau and a geometric estimate of the omitted tail."""
    tau = complex(tau)
    if tau.imag < IM_FLOOR:
        raise NonConvergent(f"Im(tau) = {tau.imag:.3g} is below {IM_FLOOR}")
    if cvals is None:
        cvals = s.complex_coefficients()
    two_pi_i = 2j * math.pi
    x = cmath.exp(two_pi_i * float(s.step) * tau)
    qpow = cmath.exp(two_pi_i * float(s.offset) * tau)
    total = 0j
    for c in cvals:
        if c:
            total += c * qpow
        qpow *= x
    n = len(cvals)
    if n == 0:
        return total, 0.0
    aq = math.exp(-2 * math.pi * tau.imag)
    if aq == 0.0:
        return total, 0.0
    lastq = max(1, n // 4)
    scale = max((abs(c) for c in cvals[-lastq:]), default=0.0)
    if scale == 0.0:
        scale = max(abs(c) for c in cvals)
    ratio = aq ** float(s.step)
    tail = scale * aq ** float(s.prec) / (1 - ratio)
    return total, tail


class _Coefficients:
    """Deepest complex coefficient table per generator, shared across checks."""

    def __init__(self):
        self._tables: dict[tuple[int, GeneratorId], tuple[QSeries, list]] = {}
        self._lock = threading.Lock()

    def get(self, reg: Registry, gid: GeneratorId, order: Fraction):
        key = (id(reg), gid)
        hit = self._tables.get(key)
        if hit is not None and hit[0].prec >= order:
            return hit
        s = reg.generate(gid, order)
        entry = (s, s.complex_coefficients())
        with self._lock:
            cur = self._tables.get(key)
            if cur is None or cur[0].prec < s.prec:
                self._tables[key] = entry
        return entry


_COEFFS = _Coefficients()


def _initial_order(im: float) -> Fraction:
    # |q|^T below 1e-15, with slack for polynomially growing coefficients
    t = 34.5 / (2 * math.pi * im)
    return Fraction(max(8, math.ceil(1.3 * t + 10)))


def evaluate_generator(gid: GeneratorId, tau: complex, reg: Registry, order=None) -> complex:
    """Value of a generator at tau, deepening its expansion until the tail is negligible."""
    if order is not None:
        s, cvals = _COEFFS.get(reg, gid, Fraction(order))
        return eval_series(s, tau, cvals)[0]
    T = _initial_order(tau.imag)
    while True:
        s, cvals = _COEFFS.get(reg, gid, T)
        value, tail = eval_series(s, tau, cvals)
        if tail <= TAIL_TOL * max(1.0, abs(value)):
            return value
        if T >= MAX_ORDER:
            raise InsufficientDepth(f"{gid} at {tau}: tail {tail:.2e} after depth {T}")
        T = min(2 * T, Fraction(MAX_ORDER))


def sample_points(seed: int, count: int = 16, fricke: Optional[int] = None) -> list[complex]:
    """Seeded points with Re in [-1, 1] and Im in [0.5, 2], avoiding Fricke fixed points."""
    rng = random.Random(seed)
    pts: list[complex] = []
    while len(pts) < count:
        tau = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        if fricke is not None:
            image = -1 / (fricke * tau)
            if abs(image - tau) < 1e-3 or image.imag < IM_FLOOR:
                continue
        pts.append(tau)
    return pts


def _fricke_level(node) -> Optional[int]:
    from .exprlang import GenRef

    if isinstance(node, GenRef):
        return node.transform.N if isinstance(node.transform, Fricke) else None
    for name in ("arg", "left", "right", "base"):
        child = getattr(node, name, None)
        if child is not None:
            lev = _fricke_level(child)
            if lev is not None:
                return lev
    return None


def _rel_err(a: complex, b: complex) -> float:
    den = max(abs(a), abs(b))
    if den == 0.0:
        return 0.0
    return abs(a - b) / den


def check_transform(entry: IdentityEntry, reg: Registry, seed: int = 0, samples: int = 16,
                    points=None, tol: Optional[float] = None) -> Report:
    """lhs(tau) against multiplier(tau) * rhs(tau) at seeded sample points."""
    start = time.perf_counter()
    tol = tol if tol is not None else (entry.tol if entry.tol is not None else TRANSFORM_TOL)
    if points is None:
        points = sample_points(seed, samples, _fricke_level(entry.lhs))
    worst, worst_tau = 0.0, None
    try:
        for tau in points:
            lhs = eval_numeric(entry.lhs, tau, registry=reg)
            rhs = eval_numeric(entry.multiplier, tau, registry=reg) * eval_numeric(entry.rhs, tau, registry=reg)
            err = _rel_err(lhs, rhs)
            if err > worst or worst_tau is None:
                worst, worst_tau = err, tau
    except (NonConvergent, InsufficientDepth, ZeroDivisionError, OverflowError, ValueError) as exc:
        return Report(entry.id, "error", "numeric", message=str(exc),
                      ms=(time.perf_counter() - start) * 1000)
    ok = worst <= tol
    rep = Report(entry.id, "pass" if ok else "fail", "numeric",
                 ms=(time.perf_counter() - start) * 1000,
                 message=f"max relative error {worst:.2e} over {len(points)} points")
    rep.details = {"max_rel_error": worst, "points": len(points)}
    if not ok:
        rep.witness_value = f"tau={worst_tau.real:.6g}{worst_tau.imag:+.6g}i rel err {worst:.3e}"
    return rep


def check_zero(entry: IdentityEntry, reg: Registry, tol: Optional[float] = None) -> Report:
    """|expr(point)| against tol * |expr(2i)|, plus a guard just off the zero."""
    start = time.perf_counter()
    tol = tol if tol is not None else (entry.tol if entry.tol is not None else ZERO_TOL)
    try:
        point = complex_embed(eval_constant(entry.point))
        ref = abs(eval_numeric(entry.expr, REFERENCE_POINT, registry=reg))
        value = abs(eval_numeric(entry.expr, point, registry=reg))
        guard = abs(eval_numeric(entry.expr, point + GUARD_STEP, registry=reg))
        alt = None
        if entry.alt_point is not None:
            alt = abs(eval_numeric(entry.expr, complex_embed(eval_constant(entry.alt_point)), registry=reg))
    except (NonConvergent, InsufficientDepth, ZeroDivisionError, OverflowError, ValueError) as exc:
        return Report(entry.id, "error", "numeric", message=str(exc),
                      ms=(time.perf_counter() - start) * 1000)
    if ref == 0.0:
        return Report(entry.id, "error", "numeric", message="expression vanishes at the reference point 2i",
                      ms=(time.perf_counter() - start) * 1000)
    rel = value / ref
    guard_rel = guard / ref
    ok = rel <= tol and guard_rel > tol * GUARD_FACTOR
    msg = f"relative residual {rel:.2e}, guard {guard_rel:.2e}"
    if alt is not None:
        msg += f", alternative point residual {alt / ref:.2e}"
    rep = Report(entry.id, "pass" if ok else "fail", "numeric",
                 ms=(time.perf_counter() - start) * 1000, message=msg)
    rep.details = {"residual": rel, "guard": guard_rel, "alt_residual": None if alt is None else alt / ref}
    if not ok:
        rep.witness_value = f"point {to_source(entry.point)}: residual {rel:.3e}, guard {guard_rel:.3e}"
    return rep
