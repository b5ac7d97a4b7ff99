"""q-expansions of the named Eisenstein series, eta products and the F/G/f/g families.

Every constructor takes a target precision ``order`` (an exponent bound) and a
coefficient domain, and returns a series known strictly below ``order``.
Results are memoized per (domain, generator) in a :class:`Registry`.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .coeffring import CBRT4, I, RHO, RingElem, sqrt_of
from .qseries import EXACT, QSeries


class UnknownGenerator(KeyError):
    pass


class UnsupportedDiscriminant(ValueError):
    pass


class NotAFamily(ValueError):
    pass


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for D in {-3, -4, -8} and n >= 1."""
    if D == -3:
        return (0, 1, -1)[n % 3]
    if D == -4:
        return (0, 1, 0, -1)[n % 4]
    if D == -8:
        return (0, 1, 0, 1, 0, -1, 0, -1)[n % 8]
    raise UnsupportedDiscriminant(f"discriminant {D} is not supported")


# ---------------------------------------------------------------------------
# ids

FAMILY_PERIODS = {
    ("F", 1): 2, ("F", 2): 2, ("F", 3): 2, ("F", 4): 2,
    ("G", 1): 3, ("G", 2): 4, ("G", 3): 3, ("G", 4): 2,
    ("f", 1): 2, ("f", 2): 2, ("f", 3): 2, ("f", 4): 2,
    ("g", 1): 3, ("g", 2): 4, ("g", 4): 2,
    ("Fp", 3): 2, ("Gp", 3): 2,
}

F = Fraction
BASE_WEIGHTS = {
    "E2": F(2), "E4": F(4), "E6": F(6), "eta": F(1, 2), "theta": F(1, 2),
    "E1m3": F(1), "E1m4": F(1), "E1m8": F(1), "E3m31": F(3), "E31m3": F(3),
    "E22": F(2), "E32": F(2), "E42": F(2), "E24": F(4), "E34": F(4), "E44": F(4),
    "E42p": F(2), "eta2": F(1), "eta3": F(1), "eta4": F(1, 2), "Q3": F(3),
    "thetaprod": F(1, 2),
}
FAMILY_WEIGHTS = {
    ("F", 1): F(6), ("G", 1): F(4), ("F", 2): F(4), ("G", 2): F(2),
    ("F", 3): F(3), ("G", 3): F(2), ("Fp", 3): F(4), ("Gp", 3): F(4),
    ("F", 4): F(2), ("G", 4): F(2), ("f", 1): F(2), ("g", 1): F(2),
    ("f", 2): F(1), ("g", 2): F(1), ("f", 3): F(1), ("f", 4): F(1, 2), ("g", 4): F(1),
}


@dataclass(frozen=True)
class GeneratorId:
    name: str
    level: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.j is not None:
            key = (self.name, self.level)
            if key not in FAMILY_PERIODS:
                raise UnknownGenerator(f"no family {self.name} at level {self.level}")
            object.__setattr__(self, "j", self.j % FAMILY_PERIODS[key])
        elif self.name not in BASE_WEIGHTS:
            raise UnknownGenerator(self.name)

    @property
    def is_family(self) -> bool:
        return self.j is not None

    @property
    def period(self) -> int:
        if not self.is_family:
            raise NotAFamily(f"{self} is not a family member")
        return FAMILY_PERIODS[(self.name, self.level)]

    @property
    def weight(self) -> Fraction:
        if self.is_family:
            return FAMILY_WEIGHTS[(self.name, self.level)]
        return BASE_WEIGHTS[self.name]

    def __str__(self) -> str:
        if not self.is_family:
            return self.name
        if self.name in ("Fp", "Gp"):
            return f"{self.name}3({self.j})"
        return f"{self.name}({self.level},{self.j})"


_FAMILY_RE = re.compile(r"^(F|G|f|g)\((\d+),(-?\d+)\)$|^(Fp|Gp)3\((-?\d+)\)$")


def parse_id(text: str) -> GeneratorId:
    """Parse a generator name from the public naming contract (``E4``, ``F(1,0)``, ``Fp3(1)``)."""
    s = text.replace(" ", "")
    m = _FAMILY_RE.match(s)
    if m:
        if m.group(1):
            return GeneratorId(m.group(1), int(m.group(2)), int(m.group(3)))
        return GeneratorId(m.group(4), 3, int(m.group(5)))
    return GeneratorId(s)


def translate_index(gid: GeneratorId) -> GeneratorId:
    """The family member obtained from tau -> tau + 1."""
    if not gid.is_family:
        raise NotAFamily(f"{gid} has no translation index")
    return GeneratorId(gid.name, gid.level, gid.j + 1)


# Imaginary radicals in F(N, j) = A - (-1)^j * r_N * B.  They sit on the
# negative-imaginary branch (r_1 = -sqrt(-1728), ...): with that choice the
# power identities f(N,j)^k = F(N,j) hold for the same index j.
F_RADICAL = {
    1: -sqrt_of(-1728),
    2: -sqrt_of(-256),
    3: -sqrt_of(-3) * 6,
    4: -sqrt_of(-64),
}


# ---------------------------------------------------------------------------
# raw coefficient sequences


def divisor_power_sums(k: int, n_max: int) -> list[int]:
    """sigma_k(n) for 0 <= n < n_max (index 0 unused, set to 0)."""
    out = [0] * max(n_max, 1)
    for d in range(1, n_max):
        dk = d ** k
        for m in range(d, n_max, d):
            out[m] += dk
    return out


def _character_sums(n_max: int, weight: Callable[[int, int], int]) -> list[int]:
    out = [0] * max(n_max, 1)
    for d in range(1, n_max):
        for m in range(d, n_max, d):
            out[m] += weight(d, m // d)
    return out


def _terms(order: Fraction) -> int:
    """Number of integer exponents 0 <= n < order."""
    return max(0, math.ceil(order))


def _eisenstein(const: Fraction, scale: int, k: int, order: Fraction, weight, domain) -> QSeries:
    n = _terms(order)
    sig = divisor_power_sums(k, n)
    vals = [const] + [scale * sig[m] for m in range(1, n)]
    return QSeries.from_rationals(vals[:n], prec=order, weight=weight, domain=domain)


def _character_series(const: Fraction, fn, order: Fraction, weight, domain) -> QSeries:
    n = _terms(order)
    sums = _character_sums(n, fn)
    vals = [const] + sums[1:n]
    return QSeries.from_rationals(vals[:n], prec=order, weight=weight, domain=domain)


def eta_series(order: Fraction, domain=EXACT) -> QSeries:
    """q^(1/24) * sum_m (-1)^m q^(m(3m-1)/2)."""
    order = Fraction(order)
    n = _terms(order - Fraction(1, 24))
    vals = [0] * n
    m = 0
    while True:
        hit = False
        for mm in (m, -m) if m else (0,):
            e = mm * (3 * mm - 1) // 2
            if e < n:
                vals[e] += -1 if mm % 2 else 1
                hit = True
        if not hit:
            break
        m += 1
    return QSeries.from_rationals(vals, offset=Fraction(1, 24), prec=order, weight=Fraction(1, 2), domain=domain)


def theta_series(order: Fraction, domain=EXACT) -> QSeries:
    """sum over all integers n of q^(n^2)."""
    n = _terms(order)
    vals = [0] * n
    m = 0
    while m * m < n:
        vals[m * m] += 1 if m == 0 else 2
        m += 1
    return QSeries.from_rationals(vals, prec=order, weight=Fraction(1, 2), domain=domain)


def theta_product_series(order: Fraction, domain=EXACT) -> QSeries:
    """prod_{n>=1} (1 - q^(2n)) (1 + q^(2n-1))^2, expanded factor by factor."""
    n = _terms(order)
    poly = [0] * n
    if n:
        poly[0] = 1
    k = 1
    while k < n:
        # multiply by (1 + sign*q^k) in place
        sign = 1 if k % 2 else -1
        reps = 2 if k % 2 else 1
        for _ in range(reps):
            for e in range(n - 1, k - 1, -1):
                poly[e] += sign * poly[e - k]
        k += 1
    return QSeries.from_rationals(poly, prec=order, weight=Fraction(1, 2), domain=domain)


# ---------------------------------------------------------------------------
# registry


class Registry:
    """Memoizing generator table for one coefficient domain.

    Lookups return truncations of the deepest cached expansion; insertion is
    serialized by a lock so concurrent readers are safe.
    """

    def __init__(self, domain=EXACT, disk_cache=None):
        self.domain = domain
        self.disk_cache = disk_cache
        self._cache: dict[GeneratorId, QSeries] = {}
        self._lock = threading.Lock()

    def generate(self, gid, order) -> QSeries:
        if isinstance(gid, str):
            gid = parse_id(gid)
        order = Fraction(order)
        if order <= 0:
            raise ValueError("order must be positive")
        hit = self._cache.get(gid)
        if hit is not None and hit.prec >= order:
            return hit.truncate(order)
        series = None
        if self.disk_cache is not None and self.domain is EXACT:
            series = self.disk_cache.load(gid, order)
        if series is None:
            series = self._build(gid, order)
            if self.disk_cache is not None and self.domain is EXACT:
                self.disk_cache.store(gid, series)
        with self._lock:
            cur = self._cache.get(gid)
            if cur is None or cur.prec < series.prec:
                self._cache[gid] = series
        return series.truncate(order)

    def _build(self, gid: GeneratorId, order: Fraction) -> QSeries:
        target = order
        attempt = order
        for _ in range(8):
            s = self._construct(gid, attempt)
            if s.prec >= target:
                return s.truncate(target).with_weight(gid.weight)
            attempt += (target - s.prec) + 1
        raise RuntimeError(f"could not reach precision {target} for {gid}")

    def __call__(self, gid, order) -> QSeries:
        return self.generate(gid, order)

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()

    # -- constructors -----------------------------------------------------

    def _construct(self, gid: GeneratorId, T: Fraction) -> QSeries:
        g = self.generate
        dom = self.domain
        name = gid.name
        c = dom.scalar  # map a RingElem constant into the domain

        if name == "E2":
            return _eisenstein(F(1), -24, 1, T, F(2), dom)
        if name == "E4":
            return _eisenstein(F(1), 240, 3, T, F(4), dom)
        if name == "E6":
            return _eisenstein(F(1), -504, 5, T, F(6), dom)
        if name == "eta":
            return eta_series(T, dom)
        if name == "theta":
            return theta_series(T, dom)
        if name == "thetaprod":
            return theta_product_series(T, dom)
        if name == "E1m3":
            return _character_series(F(1, 6), lambda d, e: kronecker(-3, d), T, F(1), dom)
        if name == "E1m4":
            return _character_series(F(1, 4), lambda d, e: kronecker(-4, d), T, F(1), dom)
        if name == "E1m8":
            return _character_series(F(1, 2), lambda d, e: kronecker(-8, d), T, F(1), dom)
        if name == "E3m31":
            return _character_series(F(-1, 9), lambda d, e: d * d * kronecker(-3, d), T, F(3), dom)
        if name == "E31m3":
            return _character_series(F(0), lambda d, e: d * d * kronecker(-3, e), T, F(3), dom)
        m = re.fullmatch(r"E([234])([24])", name)
        if m:
            N, k = int(m.group(1)), int(m.group(2))
            base = g("E2" if k == 2 else "E4", T)
            Nk = N ** (k // 2)
            return (base.dilate(N) * Nk - base) * F(1, Nk - 1)
        if name == "E42p":
            e2 = g("E2", T)
            return e2.dilate(4) * 4 - e2.dilate(2) * 4 + e2
        if name == "eta2":
            eta = g("eta", T)
            return eta * eta.dilate(2)
        if name == "eta3":
            eta = g("eta", T)
            return eta * eta.dilate(3)
        if name == "eta4":
            eta = g("eta", T + 1)
            return eta * eta.dilate(4) / eta.dilate(2)
        if name == "Q3":
            return (g("E3m31", T) + g("E31m3", T) * 3) * (-9)

        j = gid.j
        sgn = -1 if j % 2 else 1
        lev = gid.level
        if name == "F" and lev == 1:
            return g("E6", T) - g("eta", T) ** 12 * c(F_RADICAL[1] * sgn)
        if name == "G" and lev == 1:
            return g("E4", T) - g("eta", T) ** 8 * c(RHO ** j * 12)
        if name == "F" and lev == 2:
            return g("E24", T) - g("eta2", T) ** 4 * c(F_RADICAL[2] * sgn)
        if name == "G" and lev == 2:
            return g("E22", T) - g("eta2", T) ** 2 * c(I ** j * 4)
        if name == "F" and lev == 3:
            return g("Q3", T) - g("eta3", T) ** 3 * c(F_RADICAL[3] * sgn)
        if name == "G" and lev == 3:
            return g("E32", T) - g("eta3", T) ** 2 * c(CBRT4 * RHO ** j * 3)
        if name == "Fp":
            return g("E34", T) - g("eta3", T) ** 3 * g("E1m3", T) * c(F_RADICAL[3] * (6 * sgn))
        if name == "Gp":
            return g("E32", T) ** 2 - g("eta3", T) ** 3 * g("E1m3", T) * c(sqrt_of(3) * (36 * sgn))
        if name == "F" and lev == 4:
            return g("E42p", T) - g("eta4", T) ** 4 * c(F_RADICAL[4] * sgn)
        if name == "G" and lev == 4:
            return g("E42", T) - g("eta4", T) ** 4 * (8 * sgn)

        if name == "f" and lev == 1:
            e2 = g("E2", 2 * T)
            s3 = sqrt_of(-3) * sgn
            return (e2 * 2
                    - e2.shift_scale(0, 2) * c((3 + s3) / 6)
                    - e2.shift_scale(1, 2) * c((3 - s3) / 6))
        if name == "g" and lev == 1:
            e2 = g("E2", 3 * T)
            acc = e2 * F(3, 2)
            for m in range(3):
                if (m - j) % 3:
                    acc = acc - e2.shift_scale(m, 3) * F(1, 4)
            return acc
        if name == "f" and lev == 2:
            e = g("E1m4", 2 * T)
            diff = e.shift_scale(0, 2) - e.shift_scale(1, 2)
            return e * 4 + diff * c(I * (2 * sgn))
        if name == "g" and lev == 2:
            e = g("E1m8", 4 * T)
            acc = None
            for i in range(4):
                term = e.shift_scale(i, 4) * (-1 if i == j else 1)
                acc = term if acc is None else acc + term
            return acc
        if name == "f" and lev == 3:
            e = g("E1m3", 2 * T)
            diff = e.shift_scale(0, 2) - e.shift_scale(1, 2)
            return e.dilate(2) * 6 + diff * c(sqrt_of(-3) * sgn)
        if name == "f" and lev == 4:
            # theta(tau/2 + (-1)^j/4)
            return g("theta", 2 * T).shift_scale(F(sgn, 2), 2)
        if name == "g" and lev == 4:
            th2 = g("theta", 2 * T) ** 2
            return th2.dilate(2) * 2 - th2.shift_scale(j, 2)
        raise UnknownGenerator(str(gid))


_REGISTRIES: dict[object, Registry] = {}
_REG_LOCK = threading.Lock()


def registry_for(domain=EXACT) -> Registry:
    with _REG_LOCK:
        reg = _REGISTRIES.get(domain.key)
        if reg is None or reg.domain is not domain:
            reg = _REGISTRIES[domain.key] = Registry(domain)
        return reg


def generate(gid, order, domain=EXACT) -> QSeries:
    """Series of ``gid`` known strictly below ``order``."""
    return registry_for(domain).generate(gid, order)
