"""Ring-kernel oracles: basis enumeration, multiplication, exactness."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratliffrush import (FieldSpec, HorizonError, RingPresentation,
                         ValidationError, build_ring, parse_element,
                         recommend_truncation)

from conftest import poly_ring, semigroup_ring


# -- independent oracles -------------------------------------------------------

def semigroup_members_bruteforce(gens, bound):
    """All sums of generator multiples up to ``bound``, by direct enumeration."""
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = s + g
                if t <= bound and t not in members:
                    members.add(t)
                    nxt.append(t)
        frontier = nxt
    return members


def standard_monomials_bruteforce(nvars, degree, quotient):
    """Standard monomials of total degree d via divisibility filtering."""
    out = []
    for e in itertools.product(range(degree + 1), repeat=nvars):
        if sum(e) != degree:
            continue
        if any(all(e[i] >= q[i] for i in range(nvars)) for q in quotient):
            continue
        out.append(e)
    return set(out)


# -- build_ring ------------------------------------------------------------------

def test_polynomial_ring_degree_dims():
    R = poly_ring("xy", 5)
    assert [R.dimension(d) for d in range(6)] == [1, 2, 3, 4, 5, 6]


def test_semigroup_basis_matches_bruteforce():
    R = semigroup_ring((4, 11, 17, 18), 30)
    expected = semigroup_members_bruteforce((4, 11, 17, 18), 30)
    assert R._members == expected
    for absent in (1, 2, 3, 5, 6, 7, 9, 10, 13, 14):
        assert R.dimension(absent) == 0
    for present in (4, 8, 11, 12, 15, 16, 17, 18):
        assert R.dimension(present) == 1


def test_quotient_standard_monomials():
    R = poly_ring("xy", 4, quotient=[(0, 3)])
    got = set(R.monomials_of_degree(3))
    assert got == standard_monomials_bruteforce(2, 3, [(0, 3)])
    assert got == {(3, 0), (2, 1), (1, 2)}


def test_build_ring_rejects_bad_presentations():
    with pytest.raises(ValidationError):
        semigroup_ring((4, 6), 30)            # gcd 2
    with pytest.raises(ValidationError):
        poly_ring("xy", 30, p=32004)          # composite characteristic
    with pytest.raises(ValidationError):
        build_ring(RingPresentation(
            backend="monomial-quotient", variables=("x", "y"),
            weights=(1, 5), truncation=3))    # D below the largest weight


# -- element arithmetic -----------------------------------------------------------

def test_quotient_relation_kills_product():
    R = poly_ring("xy", 10, quotient=[(0, 3)])
    y = parse_element(R, "y")
    y2 = parse_element(R, "y^2")
    assert (y * y2).is_zero()


def test_semigroup_exponent_addition():
    R = semigroup_ring((4, 11, 17, 18), 30)
    assert parse_element(R, "t^4") * parse_element(R, "t^11") == parse_element(R, "t^15")


def test_difference_of_squares():
    R = poly_ring("xy", 10)
    x, y = parse_element(R, "x"), parse_element(R, "y")
    assert (x + y) * (x - y) == parse_element(R, "x^2") - parse_element(R, "y^2")


def test_overflow_is_an_error_not_truncation():
    R = poly_ring("xy", 5)
    a = parse_element(R, "x^3")
    with pytest.raises(HorizonError):
        a * a


def test_rational_field_backend():
    R = build_ring(RingPresentation(
        backend="monomial-quotient", variables=("x", "y"), weights=(1, 1),
        field=FieldSpec("rationals"), truncation=6))
    half_x = parse_element(R, "x").scale("1/2")
    assert (half_x + half_x) == parse_element(R, "x")


# -- invariants --------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.data())
def test_monomial_multiplication_associative(data):
    R = poly_ring("xy", 12, quotient=[(2, 3)])
    monos = list(R.monomials_up_to(4))
    m1 = data.draw(st.sampled_from(monos))
    m2 = data.draw(st.sampled_from(monos))
    m3 = data.draw(st.sampled_from(monos))
    def mul(a, b):
        return None if a is None or b is None else R.mono_mul(a, b)
    left = mul(mul(m1, m2), m3)
    right = mul(m1, mul(m2, m3))
    assert left == right


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(semigroup_members_bruteforce((6, 7, 15), 60))),
       st.sampled_from(list(semigroup_members_bruteforce((6, 7, 15), 60))))
def test_semigroup_mult_commutes(a, b):
    R = semigroup_ring((6, 7, 15), 160)
    assert R.mono_mul(a, b) == R.mono_mul(b, a)


def test_semigroup_dims_iff_representable():
    R = semigroup_ring((6, 7, 15), 60)
    members = semigroup_members_bruteforce((6, 7, 15), 60)
    for d in range(61):
        assert R.dimension(d) == (1 if d in members else 0)


def test_monomial_dims_match_enumeration():
    quotient = [(1, 1), (0, 2)]
    R = poly_ring("xy", 10, quotient=quotient)
    for d in range(11):
        assert R.dimension(d) == len(standard_monomials_bruteforce(2, d, quotient))


# -- parsing ------------------------------------------------------------------------

def test_parse_rejects_unknown_variable():
    R = poly_ring("xy", 10)
    with pytest.raises(ValidationError):
        parse_element(R, "x^2*z")


def test_parse_polynomials_and_coefficients():
    R = poly_ring("xy", 30)
    u = parse_element(R, "x^22 + y^22")
    assert len(u.terms) == 2
    three = parse_element(R, "3*x*y")
    assert three.terms[(1, 1)] == 3
    cancel = parse_element(R, "x - x")
    assert cancel.is_zero()


def test_recommendation_formula():
    assert recommend_truncation(11, 17, n_max=6, r=2) == (6 + 2 + 2) * 11 + 17 + 8
