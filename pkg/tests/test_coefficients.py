from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from dgdef.coefficients import (ArtinianAlgebra, make_dual_numbers, make_staircase_algebra,
                                make_truncated_multivariate,
                                make_truncated_poly, parse_ring, rational)


def test_dual_numbers():
    A = make_dual_numbers()
    assert A.dim == 2
    assert len(A.basis) == 1
    assert A.nilpotency_order == 2
    eps = A.gen()
    assert A.mul(eps, eps) == {}


def test_truncated_poly_order_two_is_dual_numbers():
    assert make_truncated_poly(2).staircase == make_dual_numbers().staircase


def test_truncated_poly_order_three():
    A = make_truncated_poly(3)
    t = A.gen()
    t2 = A.mul(t, t)
    assert len(A.basis) == 2
    assert t2 == {(2,): 1}
    assert A.mul(t, t2) == {}


def test_truncated_poly_order_four():
    A = make_truncated_poly(4)
    t2 = A.power(A.gen(), 2)
    assert A.mul(t2, t2) == {}
    assert A.power(A.gen(), 3) == {(3,): 1}


def test_rejects_small_order():
    with pytest.raises(ValueError):
        make_truncated_poly(1)


def test_products():
    A = make_truncated_poly(3)
    one_plus = A.add(A.one(), A.gen())
    one_minus = A.add(A.one(), A.gen(), -1)
    assert A.mul(one_plus, one_minus) == {(0,): 1, (2,): -1}
    assert A.mul(A.gen(), A.power(A.gen(), 2)) == {}


def test_staircase_must_be_closed_under_division():
    with pytest.raises(ValueError):
        ArtinianAlgebra(("x", "y"), frozenset([(1, 0), (1, 1)]))


def test_unit_not_in_maximal_ideal():
    with pytest.raises(ValueError):
        ArtinianAlgebra(("x",), frozenset([(0,), (1,)]))


def test_staircase_builder_closes_downward():
    A = make_staircase_algebra(["x", "y"], [(1, 1)])
    assert set(A.basis) == {(1, 0), (0, 1), (1, 1)}
    assert A.mul({(1, 0): 1}, {(0, 1): 1}) == {(1, 1): 1}
    assert A.mul({(1, 0): 1}, {(1, 0): 1}) == {}


def test_parse_ring():
    assert parse_ring("dual").nilpotency_order == 2
    assert parse_ring("t^4").nilpotency_order == 4
    for bad in ("t^x", "quux", "t^1"):
        with pytest.raises(ValueError):
            parse_ring(bad)


def test_rational_normalizes():
    r = rational(6, -4)
    assert (r.numerator, r.denominator) == (-3, 2)


small_fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def staircase_rings(draw):
    m = draw(st.integers(1, 2))
    gens = [f"x{i}" for i in range(m)]
    if draw(st.booleans()):
        return make_truncated_multivariate(gens, draw(st.integers(1, 3)))
    # a random order ideal in a small box
    box = [tuple(e) for e in product(range(4), repeat=m) if any(e)]
    chosen = set(draw(st.lists(st.sampled_from(box), min_size=1, max_size=6)))
    closed = set()
    for e in chosen:
        for f in product(*[range(x + 1) for x in e]):
            if any(f):
                closed.add(tuple(f))
    return make_staircase_algebra(gens, closed)


def elements(A, draw, unit=True):
    monos = ([A.unit] if unit else []) + list(A.basis)
    coeffs = draw(st.lists(small_fractions, min_size=len(monos), max_size=len(monos)))
    return {m: Fraction(c) for m, c in zip(monos, coeffs) if c}


@given(st.data())
def test_ring_axioms(data):
    A = data.draw(staircase_rings())
    a, b, c = (elements(A, data.draw) for _ in range(3))
    assert A.mul(a, b) == A.mul(b, a)
    assert A.mul(a, A.mul(b, c)) == A.mul(A.mul(a, b), c)
    assert A.mul(a, A.add(b, c)) == A.add(A.mul(a, b), A.mul(a, c))
    assert A.mul(A.one(), a) == a


@given(st.data())
def test_maximal_ideal_is_nilpotent(data):
    A = data.draw(staircase_rings())
    a = elements(A, data.draw, unit=False)
    assert A.power(a, A.nilpotency_order) == {}


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_round_trip(p, q):
    r = rational(p, q)
    assert r.denominator > 0
    assert rational(r.numerator, r.denominator) == r
    assert r * q == p
