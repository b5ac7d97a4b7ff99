"""Exact arithmetic in the number field Q(z, c) with z = exp(2*pi*i/24) and c = 4**(1/3).

Elements are stored as 24 rationals over the basis ``z**a * c**b`` with
``0 <= a < 8`` and ``0 <= b < 3``; the coordinate of ``z**a * c**b`` sits at
index ``3*a + b``.  Reduction uses ``z**8 = z**4 - 1`` (the 24th cyclotomic
polynomial) and ``c**3 = 4``.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

X_DEG = 8
Y_DEG = 3
DIM = X_DEG * Y_DEG

Rational = Union[int, Fraction]


class UnknownConstant(ValueError):
    pass


@lru_cache(maxsize=None)
def zeta_power(e: int) -> tuple[int, ...]:
    """Coordinates of z**e in the power basis 1, z, ..., z**7."""
    e %= 24
    vec = [0] * X_DEG
    if e < X_DEG:
        vec[e] = 1
        return tuple(vec)
    prev = zeta_power(e - 1)
    # multiply by z, then fold z**8 = z**4 - 1
    top = prev[X_DEG - 1]
    vec = [0] + list(prev[:-1])
    vec[4] += top
    vec[0] -= top
    return tuple(vec)


@lru_cache(maxsize=None)
def reduce_monomial(i: int, j: int) -> tuple[tuple[int, int], ...]:
    """Express z**i * c**j as ((basis_index, integer_coefficient), ...)."""
    scale = 4 ** (j // Y_DEG)
    b = j % Y_DEG
    return tuple(
        (3 * a + b, scale * v) for a, v in enumerate(zeta_power(i)) if v
    )


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class RingElem:
    """Immutable element of Q(z24, cbrt 4)."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Rational] = ()):
        c = [_frac(x) for x in coeffs]
        if len(c) > DIM:
            raise ValueError("at most 24 coordinates")
        c.extend([Fraction(0)] * (DIM - len(c)))
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    @classmethod
    def from_rational(cls, x: Rational) -> RingElem:
        return cls([x])

    @classmethod
    def monomial(cls, a: int, b: int = 0, scale: Rational = 1) -> RingElem:
        coords = [Fraction(0)] * DIM
        for idx, v in reduce_monomial(a, b):
            coords[idx] += v * _frac(scale)
        return cls(coords)

    @classmethod
    def coerce(cls, x) -> RingElem:
        if isinstance(x, RingElem):
            return x
        return cls.from_rational(x)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RingElem.from_rational(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> RingElem:
        try:
            other = RingElem.coerce(other)
        except TypeError:
            return NotImplemented
        return RingElem(x + y for x, y in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> RingElem:
        return RingElem(-x for x in self.coeffs)

    def __sub__(self, other) -> RingElem:
        try:
            other = RingElem.coerce(other)
        except TypeError:
            return NotImplemented
        return RingElem(x - y for x, y in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other) -> RingElem:
        return RingElem.coerce(other) - self

    def __mul__(self, other) -> RingElem:
        if isinstance(other, (int, Fraction)):
            return RingElem(x * other for x in self.coeffs)
        if not isinstance(other, RingElem):
            return NotImplemented
        out = [Fraction(0)] * DIM
        lhs = [(k, v) for k, v in enumerate(self.coeffs) if v]
        rhs = [(k, v) for k, v in enumerate(other.coeffs) if v]
        for k1, v1 in lhs:
            a1, b1 = divmod(k1, 3)
            for k2, v2 in rhs:
                a2, b2 = divmod(k2, 3)
                prod = v1 * v2
                for idx, m in reduce_monomial(a1 + a2, b1 + b2):
                    out[idx] += m * prod
        return RingElem(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RingElem:
        if k < 0:
            return self.inv() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other) -> RingElem:
        return self * RingElem.coerce(other).inv()

    def __rtruediv__(self, other) -> RingElem:
        return RingElem.coerce(other) * self.inv()

    def inv(self) -> RingElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(z24, cbrt 4)")
        if self.is_rational():
            return RingElem.from_rational(1 / self.coeffs[0])
        # columns: self * basis_k; solve M x = e_0
        cols = [(self * _BASIS[k]).coeffs for k in range(DIM)]
        rows = [[cols[c][r] for c in range(DIM)] + [Fraction(int(r == 0))] for r in range(DIM)]
        return RingElem(_solve(rows))

    # -- conversions ------------------------------------------------------

    def conj(self) -> RingElem:
        """Complex conjugation (z -> z**-1, c fixed)."""
        out = ZERO
        for k, v in enumerate(self.coeffs):
            if v:
                a, b = divmod(k, 3)
                out = out + RingElem.monomial(-a, b, v)
        return out

    def to_complex(self) -> complex:
        return complex_embed(self)

    def common_denominator(self) -> int:
        return math.lcm(*(x.denominator for x in self.coeffs))

    def __repr__(self) -> str:
        return f"RingElem({self})"

    def __str__(self) -> str:
        return format_elem(self)


def _solve(rows: list[list[Fraction]]) -> list[Fraction]:
    n = len(rows)
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        prow = [x / p for x in rows[col]]
        rows[col] = prow
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
    return [rows[r][n] for r in range(n)]


ZERO = RingElem()
ONE = RingElem([1])
_BASIS = [RingElem([0] * k + [1]) for k in range(DIM)]

ZETA24 = RingElem.monomial(1)
CBRT4 = RingElem.monomial(0, 1)
I = RingElem.monomial(6)
RHO = RingElem.monomial(8)
SQRT2 = RingElem.monomial(3) + RingElem.monomial(-3)
SQRT3 = RingElem.monomial(2) + RingElem.monomial(-2)

# principal square roots of the squarefree parts that occur
_SQRT_BASE = {
    1: ONE,
    -1: I,
    2: SQRT2,
    -2: I * SQRT2,
    3: SQRT3,
    -3: I * SQRT3,
    6: SQRT2 * SQRT3,
    -6: I * SQRT2 * SQRT3,
}


def zeta(k: int) -> RingElem:
    """Primitive k-th root of unity exp(2*pi*i/k); k must divide 24."""
    if k <= 0 or 24 % k:
        raise UnknownConstant(f"zeta({k}) is not in Q(z24, cbrt 4)")
    return RingElem.monomial(24 // k)


def sqrt_of(d: int) -> RingElem:
    """Principal square root of the integer d."""
    if d == 0:
        return ZERO
    sign = -1 if d < 0 else 1
    m = abs(d)
    square = 1
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            square *= p
        p += 1
    base = _SQRT_BASE.get(sign * m)
    if base is None:
        raise UnknownConstant(f"sqrt({d}) is not in Q(z24, cbrt 4)")
    return base * square


def cbrt_of(n: int) -> RingElem:
    if n != 4:
        raise UnknownConstant(f"cbrt({n}) is not supported; only cbrt(4)")
    return CBRT4


_CONST_RE = re.compile(r"^\s*(zeta|sqrt|cbrt)\s*\(\s*([+-]?\d+)\s*\)\s*$")


def symbol_constant(name: str) -> RingElem:
    """Resolve a symbolic constant name such as ``i``, ``rho``, ``sqrt(-3)``."""
    key = name.strip()
    if key == "i":
        return I
    if key == "rho":
        return RHO
    m = _CONST_RE.match(key)
    if not m:
        raise UnknownConstant(f"unknown constant {name!r}")
    fn, arg = m.group(1), int(m.group(2))
    return {"zeta": zeta, "sqrt": sqrt_of, "cbrt": cbrt_of}[fn](arg)


_BASIS_COMPLEX = [
    cmath.exp(2j * math.pi * (k // 3) / 24) * (4.0 ** (1.0 / 3.0)) ** (k % 3)
    for k in range(DIM)
]


def basis_complex(k: int) -> complex:
    return _BASIS_COMPLEX[k]


def complex_embed(a: RingElem) -> complex:
    """Image under z -> exp(2*pi*i/24), c -> real cube root of 4."""
    return sum(
        (float(v) * _BASIS_COMPLEX[k] for k, v in enumerate(a.coeffs) if v),
        0j,
    )


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_elem(a: RingElem) -> str:
    """Readable exact form.

    Elements of Q(i) print as ``a+bi``; everything else as a sum of
    ``coef*z24^a*cbrt4^b`` terms.
    """
    c = a.coeffs
    nz = [k for k, v in enumerate(c) if v]
    if not nz:
        return "0"
    if set(nz) <= {0, 18}:
        re_, im = c[0], c[18]
        if not im:
            return _fmt_q(re_)
        ims = "i" if im == 1 else "-i" if im == -1 else f"{_fmt_q(im)}i"
        if not re_:
            return ims
        sep = "" if ims.startswith("-") else "+"
        return f"{_fmt_q(re_)}{sep}{ims}"
    parts = []
    for k in nz:
        a_, b_ = divmod(k, 3)
        mono = "*".join(
            s for s in (
                "" if a_ == 0 else "z24" if a_ == 1 else f"z24^{a_}",
                "" if b_ == 0 else "cbrt4" if b_ == 1 else f"cbrt4^{b_}",
            ) if s
        )
        coef = c[k]
        if not mono:
            parts.append(_fmt_q(coef))
        elif coef == 1:
            parts.append(mono)
        elif coef == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{_fmt_q(coef)}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def format_coords(a: RingElem) -> str:
    """Basis-coordinate dump, e.g. ``[0:1/6, 12:-2]`` (index = 3*a + b)."""
    return "[" + ", ".join(f"{k}:{_fmt_q(v)}" for k, v in enumerate(a.coeffs) if v) + "]"
