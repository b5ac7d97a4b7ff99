"""Truncated q-expansions with exponents on a lattice offset + k*step.

A :class:`QSeries` knows every coefficient with exponent strictly below
``prec``.  Exponents live on ``offset + k*step`` (``k = 0, 1, ...``); the
lattice denominator ``lcm(den(offset), den(step))`` always divides 24 so that
every root of unity needed by an argument shift lies in the coefficient field.

Coefficients are held by a backend array: :class:`ExactArray` over
Q(z24, cbrt 4), or :class:`ModArray` over F_p for a prime p where that field
has a degree-one place (used by the multi-modular verifier).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional, Union

from .coeffring import (
    DIM,
    RingElem,
    reduce_monomial,
    zeta_power,
    basis_complex,
)

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = None


class LatticeOverflow(ValueError):
    pass


class NotAUnitSquare(ValueError):
    pass


class UnknownCoefficient(ValueError):
    pass


class OffLattice(ValueError):
    pass


class InsufficientPrecision(ValueError):
    pass


class NonUnitDivisor(ZeroDivisionError):
    pass


def _bigmul(x: int, y: int) -> int:
    if _mpz is not None and x.bit_length() > 20000 and y.bit_length() > 20000:
        return int(_mpz(x) * _mpz(y))
    return x * y


def _pack_signed(slots: list[int], wb: int) -> int:
    zero = bytes(wb)
    pos = b"".join(v.to_bytes(wb, "little") if v > 0 else zero for v in slots)
    out = int.from_bytes(pos, "little")
    if any(v < 0 for v in slots):
        neg = b"".join((-v).to_bytes(wb, "little") if v < 0 else zero for v in slots)
        out -= int.from_bytes(neg, "little")
    return out


def _unpack_signed(value: int, wb: int, m: int) -> list[int]:
    w = 8 * wb
    half = 1 << (w - 1)
    bias = int.from_bytes(half.to_bytes(wb, "little") * m, "little")
    low = (value + bias) & ((1 << (w * m)) - 1)
    raw = low.to_bytes(wb * m, "little")
    return [int.from_bytes(raw[i:i + wb], "little") - half for i in range(0, wb * m, wb)]


# ---------------------------------------------------------------------------
# exact backend


class ExactArray:
    """Coefficients as integer numerator columns over a common denominator.

    ``comps[k]`` is the column of numerators for basis element k (3*a + b for
    z24**a * cbrt4**b); absent keys are zero columns.
    """

    __slots__ = ("n", "den", "comps")

    def __init__(self, n: int, den: int, comps: dict[int, list[int]]):
        self.n = n
        self.den = den
        self.comps = comps

    @property
    def domain(self) -> "ExactDomain":
        return EXACT

    def normalized(self) -> ExactArray:
        comps = {k: c for k, c in self.comps.items() if any(c)}
        if not comps:
            return ExactArray(self.n, 1, {})
        g = self.den
        for c in comps.values():
            if g == 1:
                break
            g = math.gcd(g, *c)
        if g > 1:
            comps = {k: [v // g for v in c] for k, c in comps.items()}
        return ExactArray(self.n, self.den // g, comps)

    def take(self, start: int, stop: int) -> ExactArray:
        n = max(0, stop - start)
        comps = {}
        for k, c in self.comps.items():
            lo, hi = max(start, 0), min(stop, self.n)
            col = [0] * max(0, lo - start) + c[lo:hi] if hi > lo else []
            col.extend([0] * (n - len(col)))
            comps[k] = col
        return ExactArray(n, self.den, comps).normalized()

    def respace(self, shift: int, stride: int, n_out: int) -> ExactArray:
        if n_out <= shift:
            return ExactArray(max(n_out, 0), 1, {})
        count = min(self.n, (n_out - 1 - shift) // stride + 1)
        comps = {}
        for k, c in self.comps.items():
            col = [0] * n_out
            col[shift:shift + stride * count:stride] = c[:count]
            comps[k] = col
        return ExactArray(n_out, self.den, comps).normalized()

    def subsample(self, start: int, stride: int, n_out: int) -> ExactArray:
        comps = {k: c[start:start + stride * n_out:stride] for k, c in self.comps.items()}
        return ExactArray(n_out, self.den, comps).normalized()

    def add(self, other: ExactArray) -> ExactArray:
        den = math.lcm(self.den, other.den)
        fa, fb = den // self.den, den // other.den
        comps = {}
        for k in set(self.comps) | set(other.comps):
            ca, cb = self.comps.get(k), other.comps.get(k)
            if ca is None:
                comps[k] = [fb * v for v in cb]
            elif cb is None:
                comps[k] = [fa * v for v in ca]
            else:
                comps[k] = [fa * x + fb * y for x, y in zip(ca, cb)]
        return ExactArray(self.n, den, comps).normalized()

    def neg(self) -> ExactArray:
        return ExactArray(self.n, self.den, {k: [-v for v in c] for k, c in self.comps.items()})

    def scale(self, c: RingElem) -> ExactArray:
        c = RingElem.coerce(c)
        cden = c.common_denominator()
        cnum = [(k, int(v * cden)) for k, v in enumerate(c.coeffs) if v]
        comps: dict[int, list[int]] = {}
        for k1, col in self.comps.items():
            a1, b1 = divmod(k1, 3)
            for k2, v2 in cnum:
                a2, b2 = divmod(k2, 3)
                for idx, m in reduce_monomial(a1 + a2, b1 + b2):
                    f = m * v2
                    acc = comps.get(idx)
                    if acc is None:
                        comps[idx] = [f * v for v in col]
                    else:
                        comps[idx] = [x + f * v for x, v in zip(acc, col)]
        return ExactArray(self.n, self.den * cden, comps).normalized()

    def convolve(self, other: ExactArray, n: int) -> ExactArray:
        """Truncated Cauchy product (first n terms) by Kronecker substitution."""
        if n <= 0:
            return ExactArray(0, 1, {})
        a = self if self.n <= n else self.take(0, n)
        b = other if other.n <= n else other.take(0, n)
        if not a.comps or not b.comps or a.n == 0 or b.n == 0:
            return ExactArray(n, 1, {})
        ax = max(k // 3 for k in a.comps)
        ay = max(k % 3 for k in a.comps)
        bx = max(k // 3 for k in b.comps)
        by = max(k % 3 for k in b.comps)
        ny = ay + by + 1
        s = (ax + bx + 1) * ny
        maxa = max(max(map(abs, c)) for c in a.comps.values())
        maxb = max(max(map(abs, c)) for c in b.comps.values())
        bits = maxa.bit_length() + maxb.bit_length() + (24 * min(a.n, b.n)).bit_length() + 2
        wb = (bits + 7) // 8

        def pack(arr: ExactArray) -> int:
            slots = [0] * (arr.n * s)
            for k, c in arr.comps.items():
                x, y = divmod(k, 3)
                slots[x * ny + y::s] = c
            return _pack_signed(slots, wb)

        prod = _bigmul(pack(a), pack(b))
        digits = _unpack_signed(prod, wb, n * s)
        comps: dict[int, list[int]] = {}
        for off in range(s):
            col = digits[off::s]
            if not any(col):
                continue
            x, y = divmod(off, ny)
            for idx, m in reduce_monomial(x, y):
                acc = comps.get(idx)
                if acc is None:
                    comps[idx] = col if m == 1 else [m * v for v in col]
                else:
                    comps[idx] = [u + m * v for u, v in zip(acc, col)]
        return ExactArray(n, a.den * b.den, comps).normalized()

    def twist(self, start: int, inc: int) -> ExactArray:
        """Multiply term k by z24**(start + inc*k)."""
        comps: dict[int, list[int]] = {}
        for key, col in self.comps.items():
            a, b = divmod(key, 3)
            for k, v in enumerate(col):
                if not v:
                    continue
                for x, m in enumerate(zeta_power(a + start + inc * k)):
                    if m:
                        idx = 3 * x + b
                        acc = comps.get(idx)
                        if acc is None:
                            acc = comps[idx] = [0] * self.n
                        acc[k] += m * v
        return ExactArray(self.n, self.den, comps).normalized()

    def nonzero_indices(self) -> list[int]:
        idx: set[int] = set()
        for c in self.comps.values():
            idx.update(k for k, v in enumerate(c) if v)
        return sorted(idx)

    def element(self, k: int) -> RingElem:
        coords = [0] * DIM
        for key, c in self.comps.items():
            coords[key] = Fraction(c[k], self.den)
        return RingElem(coords)

    def complex_values(self) -> list[complex]:
        out = [0j] * self.n
        for key, c in self.comps.items():
            bc = basis_complex(key)
            for k, v in enumerate(c):
                if v:
                    out[k] += (v / self.den) * bc
        return out


class ExactDomain:
    key = "exact"

    def zeros(self, n: int) -> ExactArray:
        return ExactArray(n, 1, {})

    def from_rationals(self, values) -> ExactArray:
        vals = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in vals)) if vals else 1
        return ExactArray(len(vals), den, {0: [int(v * den) for v in vals]}).normalized()

    def from_elems(self, elems) -> ExactArray:
        elems = [RingElem.coerce(e) for e in elems]
        den = math.lcm(1, *(e.common_denominator() for e in elems))
        comps = {}
        for k in range(DIM):
            col = [int(e.coeffs[k] * den) for e in elems]
            if any(col):
                comps[k] = col
        return ExactArray(len(elems), den, comps)

    def constant(self, c, n: int = 1) -> ExactArray:
        return self.from_elems([c] + [0] * (n - 1))

    def scalar(self, c) -> RingElem:
        return RingElem.coerce(c)

    def is_one(self, x) -> bool:
        return x == 1

    def inv(self, x: RingElem) -> RingElem:
        return x.inv()

    def format(self, x) -> str:
        return str(x)

    def __repr__(self) -> str:
        return "ExactDomain()"


EXACT = ExactDomain()


# ---------------------------------------------------------------------------
# modular backend


class ModArray:
    __slots__ = ("vals", "domain")

    def __init__(self, vals: list[int], domain: "ModDomain"):
        self.vals = vals
        self.domain = domain

    @property
    def n(self) -> int:
        return len(self.vals)

    def _new(self, vals) -> ModArray:
        return ModArray(vals, self.domain)

    def take(self, start: int, stop: int) -> ModArray:
        n = max(0, stop - start)
        lo, hi = max(start, 0), min(stop, self.n)
        col = [0] * max(0, lo - start) + (self.vals[lo:hi] if hi > lo else [])
        col.extend([0] * (n - len(col)))
        return self._new(col)

    def respace(self, shift: int, stride: int, n_out: int) -> ModArray:
        if n_out <= shift:
            return self._new([0] * max(n_out, 0))
        count = min(self.n, (n_out - 1 - shift) // stride + 1)
        col = [0] * n_out
        col[shift:shift + stride * count:stride] = self.vals[:count]
        return self._new(col)

    def subsample(self, start: int, stride: int, n_out: int) -> ModArray:
        return self._new(self.vals[start:start + stride * n_out:stride])

    def add(self, other: ModArray) -> ModArray:
        p = self.domain.p
        return self._new([(x + y) % p for x, y in zip(self.vals, other.vals)])

    def neg(self) -> ModArray:
        p = self.domain.p
        return self._new([(-x) % p for x in self.vals])

    def scale(self, c) -> ModArray:
        p = self.domain.p
        c = self.domain.scalar(c)
        return self._new([x * c % p for x in self.vals])

    def convolve(self, other: ModArray, n: int) -> ModArray:
        p = self.domain.p
        if n <= 0:
            return self._new([])
        a, b = self.vals[:n], other.vals[:n]
        if not a or not b:
            return self._new([0] * n)
        bits = 2 * p.bit_length() + min(len(a), len(b)).bit_length() + 1
        wb = (bits + 7) // 8
        pa = int.from_bytes(b"".join(v.to_bytes(wb, "little") for v in a), "little")
        pb = int.from_bytes(b"".join(v.to_bytes(wb, "little") for v in b), "little")
        prod = _bigmul(pa, pb) & ((1 << (8 * wb * n)) - 1)
        raw = prod.to_bytes(wb * n, "little")
        return self._new([int.from_bytes(raw[i:i + wb], "little") % p for i in range(0, wb * n, wb)])

    def twist(self, start: int, inc: int) -> ModArray:
        p = self.domain.p
        zp = self.domain.zpow
        return self._new([v * zp[(start + inc * k) % 24] % p for k, v in enumerate(self.vals)])

    def nonzero_indices(self) -> list[int]:
        return [k for k, v in enumerate(self.vals) if v]

    def element(self, k: int) -> int:
        return self.vals[k]

    def complex_values(self):
        raise TypeError("modular coefficients have no complex embedding")


class ModDomain:
    """Reduction of Q(z24, cbrt 4) at a prime p with p = 1 mod 24 and 4 a cube mod p."""

    def __init__(self, p: int, z: int, y: int):
        if (p - 1) % 24:
            raise ValueError("p must be 1 mod 24")
        if pow(z, 12, p) == 1 or pow(z, 8, p) == 1 or pow(z, 24, p) != 1:
            raise ValueError("z must have multiplicative order 24")
        if pow(y, 3, p) != 4 % p:
            raise ValueError("y must be a cube root of 4")
        self.p = p
        self.z = z
        self.y = y
        self.zpow = [pow(z, e, p) for e in range(24)]
        self.key = ("mod", p)
        self._basis = [self.zpow[k // 3] * pow(y, k % 3, p) % p for k in range(DIM)]

    def scalar(self, c) -> int:
        p = self.p
        if isinstance(c, int):
            return c % p
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, p) % p
        c = RingElem.coerce(c)
        acc = 0
        for k, v in enumerate(c.coeffs):
            if v:
                acc += v.numerator * pow(v.denominator, -1, p) * self._basis[k]
        return acc % p

    def zeros(self, n: int) -> ModArray:
        return ModArray([0] * n, self)

    def from_rationals(self, values) -> ModArray:
        return ModArray([self.scalar(Fraction(v)) for v in values], self)

    def from_elems(self, elems) -> ModArray:
        return ModArray([self.scalar(e) for e in elems], self)

    def constant(self, c, n: int = 1) -> ModArray:
        return ModArray([self.scalar(c)] + [0] * (n - 1), self)

    def is_one(self, x) -> bool:
        return x % self.p == 1

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def format(self, x) -> str:
        return f"{x} mod {self.p}"

    def __repr__(self) -> str:
        return f"ModDomain({self.p})"


# ---------------------------------------------------------------------------


def frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    return Fraction(
        math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


def _count(offset: Fraction, step: Fraction, prec: Fraction) -> int:
    if prec <= offset:
        return 0
    return math.ceil((prec - offset) / step)


def _check_lattice(*values: Fraction) -> None:
    d = math.lcm(*(Fraction(v).denominator for v in values))
    if 24 % d:
        raise LatticeOverflow(f"lattice denominator {d} does not divide 24")


Scalar = Union[int, Fraction, RingElem]
Weight = Optional[Fraction]


class QSeries:
    """Truncated series sum_k c_k q^(offset + k*step), known below ``prec``."""

    __slots__ = ("offset", "step", "prec", "data", "weight", "_cvals")

    def __init__(self, offset, step, prec, data, weight=None):
        self.offset = Fraction(offset)
        self.step = Fraction(step)
        self.prec = Fraction(prec)
        if self.step <= 0:
            raise ValueError("step must be positive")
        _check_lattice(self.offset, self.step)
        if data.n != _count(self.offset, self.step, self.prec):
            raise ValueError(f"expected {_count(self.offset, self.step, self.prec)} terms, got {data.n}")
        self.data = data
        self.weight = None if weight is None else Fraction(weight)
        self._cvals = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rationals(cls, values, offset=0, step=1, prec=None, weight=None, domain=EXACT) -> QSeries:
        values = list(values)
        offset, step = Fraction(offset), Fraction(step)
        if prec is None:
            prec = offset + len(values) * step
        n = _count(offset, step, Fraction(prec))
        values = (values + [0] * n)[:n]
        return cls(offset, step, prec, domain.from_rationals(values), weight)._canon()

    @classmethod
    def from_elems(cls, values, offset=0, step=1, prec=None, weight=None, domain=EXACT) -> QSeries:
        values = list(values)
        offset, step = Fraction(offset), Fraction(step)
        if prec is None:
            prec = offset + len(values) * step
        n = _count(offset, step, Fraction(prec))
        values = (values + [0] * n)[:n]
        return cls(offset, step, prec, domain.from_elems(values), weight)._canon()

    @classmethod
    def constant(cls, c, prec, weight=None, domain=EXACT) -> QSeries:
        prec = Fraction(prec)
        n = _count(Fraction(0), Fraction(1), prec)
        return cls(0, 1, prec, domain.constant(c, n) if n else domain.zeros(0), weight)._canon()

    @property
    def domain(self):
        return self.data.domain

    def _canon(self) -> QSeries:
        """Drop leading zeros and coarsen the step to the gcd of the support."""
        nz = self.data.nonzero_indices()
        if not nz:
            n = self.data.n
            return QSeries(self.offset + n * self.step, self.step, self.prec, self.domain.zeros(0), self.weight)
        first = nz[0]
        g = 0
        for k in nz[1:]:
            g = math.gcd(g, k - first)
            if g == 1:
                break
        g = g or 1
        if first == 0 and g == 1:
            return self
        offset = self.offset + first * self.step
        step = self.step * g
        n = _count(offset, step, self.prec)
        return QSeries(offset, step, self.prec, self.data.subsample(first, g, n), self.weight)

    # -- lattice bookkeeping ----------------------------------------------

    @property
    def denom(self) -> int:
        """Lattice denominator d: all exponents are multiples of 1/d."""
        return math.lcm(self.offset.denominator, self.step.denominator)

    @property
    def low(self) -> int:
        return int(self.offset * self.denom)

    @property
    def known_below(self) -> int:
        """T such that exponents n/d with n < T are known."""
        return math.ceil(self.prec * self.denom)

    @property
    def n(self) -> int:
        return self.data.n

    def exponents(self) -> Iterator[Fraction]:
        for k in range(self.n):
            yield self.offset + k * self.step

    def terms(self) -> Iterator[tuple[Fraction, object]]:
        for k in range(self.n):
            yield self.offset + k * self.step, self.data.element(k)

    def lattice_coeffs(self) -> list:
        """Coefficients on the full 1/d lattice from ``low`` to ``known_below``."""
        d = self.denom
        return [self.coefficient(Fraction(m, d)) for m in range(self.low, self.known_below)]

    def _respace(self, offset: Fraction, step: Fraction, prec: Fraction):
        shift = (self.offset - offset) / step
        stride = self.step / step
        assert shift.denominator == 1 and stride.denominator == 1 and shift >= 0
        return self.data.respace(int(shift), int(stride), _count(offset, step, prec))

    def truncate(self, prec) -> QSeries:
        prec = min(Fraction(prec), self.prec)
        n = _count(self.offset, self.step, prec)
        return QSeries(self.offset, self.step, prec, self.data.take(0, n), self.weight)._canon()

    def _with_prec(self, prec) -> QSeries:
        """Zero-pad or cut to ``prec`` (used where precision is proved externally)."""
        prec = Fraction(prec)
        n = _count(self.offset, self.step, prec)
        return QSeries(self.offset, self.step, prec, self.data.take(0, n), self.weight)

    def with_weight(self, weight) -> QSeries:
        return QSeries(self.offset, self.step, self.prec, self.data, weight)

    # -- coefficient access -----------------------------------------------

    def coefficient(self, exponent):
        e = Fraction(exponent)
        if (e * self.denom).denominator != 1:
            raise OffLattice(f"exponent {e} is not on the 1/{self.denom} lattice")
        if e >= self.prec:
            raise UnknownCoefficient(f"exponent {e} is beyond the known bound {self.prec}")
        k = (e - self.offset) / self.step
        if k < 0 or k.denominator != 1:
            return self.domain.scalar(0)
        return self.data.element(int(k))

    def __getitem__(self, exponent):
        return self.coefficient(exponent)

    def leading(self) -> tuple[Fraction, object]:
        nz = self.data.nonzero_indices()
        if not nz:
            raise NonUnitDivisor("series has no known nonzero coefficient")
        k = nz[0]
        return self.offset + k * self.step, self.data.element(k)

    def is_zero_to(self, depth):
        """Return ``(True, None)`` or ``(False, (exponent, value))`` for exponents < depth."""
        depth = Fraction(depth)
        if depth > self.prec:
            raise InsufficientPrecision(f"depth {depth} exceeds known bound {self.prec}")
        for k in self.data.nonzero_indices():
            e = self.offset + k * self.step
            if e >= depth:
                break
            return False, (e, self.data.element(k))
        return True, None

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(other, self.prec, self.weight, self.domain)

    def __add__(self, other) -> QSeries:
        if not isinstance(other, QSeries):
            if isinstance(other, (int, Fraction, RingElem)):
                other = self._coerce(other)
            else:
                return NotImplemented
        g = frac_gcd(frac_gcd(self.step, other.step), self.offset - other.offset)
        off = min(self.offset, other.offset)
        prec = min(self.prec, other.prec)
        _check_lattice(off, g)
        data = self._respace(off, g, prec).add(other._respace(off, g, prec))
        w = self.weight if self.weight == other.weight else None
        return QSeries(off, g, prec, data, w)._canon()

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries(self.offset, self.step, self.prec, self.data.neg(), self.weight)

    def __sub__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction, RingElem)):
            other = self._coerce(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> QSeries:
        return (-self) + other

    def scale(self, c) -> QSeries:
        return QSeries(self.offset, self.step, self.prec, self.data.scale(c), self.weight)._canon()

    def __mul__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction, RingElem)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        g = frac_gcd(self.step, other.step)
        off = self.offset + other.offset
        prec = min(self.prec + other.offset, other.prec + self.offset)
        n = _count(off, g, prec)
        rel = prec - off
        da = self._respace(self.offset, g, self.offset + rel)
        db = other._respace(other.offset, g, other.offset + rel)
        w = None if self.weight is None or other.weight is None else self.weight + other.weight
        return QSeries(off, g, prec, da.convolve(db, n), w)._canon()

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QSeries:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            w = None if self.weight is None else Fraction(0)
            return QSeries.constant(1, self.prec - self.offset, w, self.domain)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> QSeries:
        """1/self for a series with a nonzero leading coefficient."""
        s = self._canon()
        if s.n == 0:
            raise NonUnitDivisor("cannot invert a series with no known nonzero coefficient")
        v = s.offset
        rel = s.prec - v
        unit = QSeries(0, s.step, rel, s.data)
        dom = s.domain
        c0 = dom.inv(unit.data.element(0))
        b = QSeries(0, s.step, min(s.step, rel), dom.constant(c0, 1))
        p = b.prec
        while p < rel:
            p = min(2 * p, rel)
            u = unit.truncate(p)
            b = b._with_prec(p)
            b = b + b * (1 - u * b)
        w = None if s.weight is None else -s.weight
        out = QSeries(-v, s.step, rel - v, b._with_prec(rel).data, w)
        return out._canon()

    def __truediv__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction, RingElem)):
            return self.scale(self.domain.inv(self.domain.scalar(other)))
        return self * other.inverse()

    def __rtruediv__(self, other) -> QSeries:
        return self.inverse() * other

    def sqrt_unit(self) -> QSeries:
        """Square root with constant term 1 (Newton iteration on 1/sqrt)."""
        s = self._canon()
        dom = s.domain
        if s.n == 0 or s.offset != 0 or not dom.is_one(s.data.element(0)):
            raise NotAUnitSquare("sqrt_unit needs a series 1 + O(q^e) with e > 0")
        rel = s.prec
        r = QSeries(0, s.step, min(s.step, rel), dom.constant(1, 1))
        p = r.prec
        half = Fraction(1, 2) if dom is EXACT else dom.inv(2)
        while p < rel:
            p = min(2 * p, rel)
            a = s.truncate(p)
            r = r._with_prec(p)
            r = r + (r * (1 - a * r * r)).scale(half)
        out = (s * r._with_prec(rel)).truncate(rel)
        w = None if s.weight is None else s.weight / 2
        return out.with_weight(w)

    # -- argument substitutions -------------------------------------------

    def substitute(self, scale, shift=0) -> QSeries:
        """Series of f(scale*tau + shift); requires scale > 0.

        q^e maps to exp(2*pi*i*e*shift) * q^(e*scale).
        """
        scale, shift = Fraction(scale), Fraction(shift)
        if scale <= 0:
            raise ValueError("scale must be positive")
        offset, step, prec = self.offset * scale, self.step * scale, self.prec * scale
        _check_lattice(offset, step)
        data = self.data
        if shift and self.n:
            start = self.offset * shift * 24
            inc = self.step * shift * 24
            if start.denominator != 1 or inc.denominator != 1:
                raise LatticeOverflow("argument shift needs a root of unity outside the field")
            data = data.twist(int(start) % 24, int(inc) % 24)
        return QSeries(offset, step, prec, data, self.weight)._canon()

    def dilate(self, k: int) -> QSeries:
        """tau -> k*tau."""
        if k <= 0:
            raise ValueError("dilation factor must be positive")
        return self.substitute(k, 0)

    def shift_scale(self, shift, k: int) -> QSeries:
        """tau -> (tau + shift)/k."""
        if k <= 0:
            raise ValueError("scale divisor must be positive")
        return self.substitute(Fraction(1, k), Fraction(shift) / k)

    def translate(self, t=1) -> QSeries:
        return self.substitute(1, t)

    # -- evaluation / comparison ------------------------------------------

    def complex_coefficients(self):
        if self._cvals is None:
            self._cvals = self.data.complex_values()
        return self._cvals

    def equal_to(self, other: QSeries) -> bool:
        prec = min(self.prec, other.prec)
        return (self - other).is_zero_to(prec)[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self.equal_to(other)

    __hash__ = None

    def __repr__(self) -> str:
        shown = []
        for e, c in list(self.terms())[:6]:
            if c:
                shown.append(f"({self.domain.format(c)})*q^{e}")
        return f"QSeries({' + '.join(shown) or '0'} + O(q^{self.prec}))"
