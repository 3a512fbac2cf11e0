import pytest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from abssep.polycore import (IntPolynomial, ParseError, RatPolynomial,
                             canonicalize, is_canonical, orbit, parse_poly,
                             rational_gcd_degree, reciprocal, render_poly,
                             squarefree_part)

coeff = st.integers(min_value=-30, max_value=30)
polys = st.lists(coeff, min_size=2, max_size=7).filter(
    lambda c: c and c[-1] != 0).map(IntPolynomial)


def test_basic_attributes():
    p = IntPolynomial([-6, 8, -10, 12])
    assert p.degree == 3
    assert p.height == 12
    assert p.coeffs == (-6, 8, -10, 12)
    assert p(1) == 4
    assert p(Fraction(1, 2)) == Fraction(-3)


def test_trailing_zeros_stripped():
    assert IntPolynomial([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPolynomial([0]).is_zero()


def test_arithmetic():
    p = IntPolynomial([1, 1])          # X + 1
    q = IntPolynomial([-1, 1])         # X - 1
    assert (p * q).coeffs == (-1, 0, 1)
    assert (p + q).coeffs == (0, 2)
    assert (p - q).coeffs == (2,)
    assert (p * 3).coeffs == (3, 3)
    assert (-p).coeffs == (-1, -1)


def test_derivative_content_primitive():
    p = IntPolynomial([4, 0, 6])
    assert p.derivative().coeffs == (0, 12)
    assert p.content() == 2
    assert p.primitive_part().coeffs == (2, 0, 3)


def test_parse_render_roundtrip():
    s = "12X^3-10X^2+8X-6"
    p = parse_poly(s)
    assert p.coeffs == (-6, 8, -10, 12)
    assert render_poly(p) == s
    assert parse_poly("-6,8,-10,12") == p


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_poly("")
    with pytest.raises(ParseError):
        parse_poly("3Y^2+1")


@given(polys)
@settings(max_examples=200, deadline=None)
def test_parse_render_roundtrip_random(p):
    assert parse_poly(render_poly(p)) == p


def test_orbit_size_and_membership():
    p = IntPolynomial([-6, 8, -10, 12])
    orb = orbit(p)
    assert p in orb
    assert len(orb) == 4
    # orbit members all share the multiset of absolute coefficients
    for q in orb:
        assert sorted(abs(c) for c in q.coeffs) == \
            sorted(abs(c) for c in p.coeffs)


@given(polys)
@settings(max_examples=200, deadline=None)
def test_exactly_one_canonical_representative(p):
    if p.is_zero():
        return
    orb = orbit(p.primitive_part())
    canon = [q for q in orb if is_canonical(q)]
    assert len(set(canon)) == 1
    assert canonicalize(p) == canon[0]


@given(polys)
@settings(max_examples=100, deadline=None)
def test_canonicalize_idempotent(p):
    if p.is_zero():
        return
    c = canonicalize(p)
    assert canonicalize(c) == c
    assert c.content() == 1
    assert c.coeffs[-1] > 0


def test_canonicalize_sign_and_reflection():
    p = IntPolynomial([3, -2, -3, 10])
    assert canonicalize(-p) == canonicalize(p)
    assert canonicalize(p.reflected()) == canonicalize(p)


def test_reciprocal():
    p = IntPolynomial([-5, -1, 1, -1, 10])
    r = reciprocal(p)
    assert r.coeffs == tuple(reversed(p.coeffs))
    with pytest.raises(Exception):
        reciprocal(IntPolynomial([0, 2, 1]))  # zero constant term


def test_rational_gcd_degree():
    p = IntPolynomial([-1, 0, 1])          # (X-1)(X+1)
    q = IntPolynomial([-1, 1])             # X-1
    assert rational_gcd_degree(p, q) == 1
    assert rational_gcd_degree(p, IntPolynomial([1, 1, 1])) == 0


def test_squarefree_part():
    p = IntPolynomial([-1, 1]) ** 2 if hasattr(IntPolynomial, "__pow__") \
        else IntPolynomial([-1, 1]) * IntPolynomial([-1, 1])
    sf = squarefree_part(p)
    assert rational_gcd_degree(sf, sf.derivative()) == 0
    assert sf.degree == 1


def test_rat_polynomial_clear_denominators():
    r = RatPolynomial([Fraction(1, 2), Fraction(1, 3)])
    p = r.clear_denominators()
    assert p.coeffs == (3, 2)
