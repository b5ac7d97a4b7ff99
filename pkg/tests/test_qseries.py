from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisenfact.coeffring import I, RingElem, sqrt_of
from eisenfact.generators import generate
from eisenfact.qseries import (
    InsufficientPrecision,
    LatticeOverflow,
    NotAUnitSquare,
    OffLattice,
    QSeries,
    UnknownCoefficient,
)

F = Fraction


def series(vals, prec=None, offset=0, step=1):
    return QSeries.from_rationals(vals, offset=offset, step=step, prec=prec)


def coeffs(s, upto):
    return [s.coefficient(F(k)) for k in range(upto)]


def poly_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] += x * y
    return out


def test_add_sub():
    assert (series([1, 1]) + series([1, -1])).equal_to(series([2, 0]))
    a = series([1, 1], offset=F(1, 2), step=F(1, 2), prec=3)
    b = series([1, 1], offset=F(1, 3), step=F(1, 3), prec=3)
    assert (a + b).denom == 6


def test_scalar_mul():
    s = QSeries.from_rationals([1], offset=F(1, 2), prec=2).scale(sqrt_of(-3))
    assert s.coefficient(F(1, 2)) == sqrt_of(-3)


def test_mul_examples():
    a = series([1, 1, 0], prec=3)
    b = series([1, -1, 0], prec=3)
    p = a * b
    assert p.prec == 3 and coeffs(p, 3) == [1, 0, -1]
    x = QSeries.from_rationals([1], offset=F(1, 24), prec=2)
    y = QSeries.from_rationals([1], offset=F(23, 24), prec=2)
    assert (x * y).coefficient(1) == 1


def test_mul_theta_quarter_shifts():
    # theta(tau/2 -+ 1/4) by direct summation of (-+i)^(n^2) q^(n^2/2)
    def direct(sign):
        vals = {}
        for n in range(-4, 5):
            e = F(n * n, 2)
            vals[e] = vals.get(e, 0) + (sign * I) ** (n * n)
        return QSeries.from_elems([vals.get(F(k, 2), RingElem()) for k in range(6)], step=F(1, 2), prec=3)

    prod = direct(-1) * direct(1)
    assert [prod.coefficient(k) for k in range(3)] == [1, 4, 4]


def test_pow_eta24_is_delta():
    d = generate("eta", 6) ** 24
    assert d.offset == 1
    assert [d.coefficient(k) for k in range(1, 6)] == [1, -24, 252, -1472, 4830]
    assert (series([1, 1], prec=3) ** 2).equal_to(series([1, 2, 1]))
    assert (series([3, 1]) ** 0).coefficient(0) == 1


def test_sqrt_unit():
    assert series([1, 2, 1], prec=5).sqrt_unit().equal_to(series([1, 1], prec=5))
    e32 = generate("E32", 30)
    assert e32.sqrt_unit().equal_to(generate("E1m3", 30) * 6)
    with pytest.raises(NotAUnitSquare):
        series([2, 1]).sqrt_unit()


def test_dilate():
    e2 = generate("E2", 10).dilate(2)
    assert [e2.coefficient(k) for k in range(0, 10, 2)] == [1, -24, -72, -96, -168]
    assert e2.coefficient(1) == 0
    half = QSeries.from_rationals([1], offset=F(1, 2), prec=3)
    assert half.dilate(2).coefficient(1) == 1
    s = generate("E4", 5)
    assert s.dilate(1) == s


def test_shift_scale():
    s = generate("E2", 6).shift_scale(1, 2)
    assert [s.coefficient(F(k, 2)) for k in range(5)] == [1, 24, -72, 96, -168]
    th = generate("theta", 12).shift_scale(F(-1, 2), 2)
    assert th.coefficient(F(1, 2)) == I * -2
    assert th.coefficient(2) == 2
    assert th.coefficient(F(9, 2)) == I * -2
    with pytest.raises(LatticeOverflow):
        generate("E2", 6).shift_scale(1, 5)


def test_coefficient_errors():
    e4 = generate("E4", 5)
    assert e4.coefficient(1) == 240
    assert generate("eta", 3).coefficient(F(1, 24)) == 1
    with pytest.raises(OffLattice):
        e4.coefficient(F(1, 2))
    with pytest.raises(UnknownCoefficient):
        e4.coefficient(7)


def test_is_zero_to():
    T = 11
    ok = generate("E4", T) ** 3 - generate("E6", T) ** 2 - generate("eta", T) ** 24 * 1728
    assert ok.is_zero_to(10) == (True, None)
    bad = generate("E4", T) ** 3 - generate("E6", T) ** 2 - generate("eta", T) ** 24 * 1729
    flag, (e, v) = bad.is_zero_to(10)
    assert not flag and e == 1 and v == -1
    assert QSeries.constant(0, 5).is_zero_to(5)[0]
    with pytest.raises(InsufficientPrecision):
        ok.is_zero_to(12)


def test_inverse_laurent():
    eta8 = generate("eta", 10) ** 8
    inv = eta8.inverse()
    assert inv.offset == F(-1, 3)
    prod = eta8 * inv
    assert prod.equal_to(QSeries.constant(1, prod.prec))


def test_substitution_laws():
    s = generate("E1m4", 20)
    assert s.dilate(2).dilate(3) == s.dilate(6)
    assert s.shift_scale(0, 1) == s


ints = st.integers(-20, 20)


@settings(max_examples=40, deadline=None)
@given(st.lists(ints, min_size=1, max_size=12), st.lists(ints, min_size=1, max_size=12),
       st.integers(1, 12))
def test_mul_matches_polynomial_oracle(a, b, T):
    # a product of series known below T is known at least below T
    sa, sb = series(a, prec=T), series(b, prec=T)
    p = sa * sb
    assert p.prec >= T
    want = poly_mul(a[:T], b[:T], T)
    assert [p.coefficient(k) for k in range(T)] == want


@settings(max_examples=30, deadline=None)
@given(st.lists(ints, min_size=1, max_size=8), st.lists(ints, min_size=1, max_size=8),
       st.lists(ints, min_size=1, max_size=8))
def test_mul_commutative_associative(a, b, c):
    sa, sb, sc = series(a, prec=8), series(b, prec=8), series(c, prec=8)
    assert (sa * sb).equal_to(sb * sa)
    assert ((sa * sb) * sc).equal_to(sa * (sb * sc))


@settings(max_examples=30, deadline=None)
@given(st.lists(ints, min_size=1, max_size=10))
def test_sqrt_unit_squares_back(tail):
    s = series([1] + tail, prec=10)
    r = s.sqrt_unit()
    assert (r * r).equal_to(s)
