from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import heisenberg, sl2, sl2_forms, upper_triangular, uv
from dgdef.coefficients import make_dual_numbers, make_field, make_truncated_multivariate, make_truncated_poly
from dgdef.dgla import (DglaMorphism, bch, bch_terms, bernoulli, check_dgla_axioms, finite_dgla, gauge_action,
                        identity_morphism, is_first_order_gauge_equivalent, is_maurer_cartan, lift_order_by_order,
                        mc_residual, nilpotent, series_length, tangent_def, tensor_with_algebra, zero_element)

T3 = make_truncated_poly(3)


def el(L, A, terms, deg):
    return nilpotent(L, A, {mu: {k: Fraction(c) for k, c in v.items()} for mu, v in terms.items()}, deg)


# -- axioms -------------------------------------------------------------------

def test_abelian_passes():
    L = finite_dgla({"a": 0, "b": 1}, differential={"a": {"b": 1}})
    assert check_dgla_axioms(L).ok


def test_sl2_passes():
    rep = check_dgla_axioms(sl2())
    assert rep.ok and rep.checked > 0


def test_corrupted_sign_gives_jacobi_witness():
    bad = finite_dgla({"e": 0, "f": 0, "h": 0},
                      {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": 2}})
    rep = check_dgla_axioms(bad)
    assert not rep.ok
    assert rep.law == "graded Jacobi"
    assert len(rep.witness) == 3 and rep.lhs != rep.rhs


def test_leibniz_violation():
    # d is not a derivation: d[a,a'] must be [da,a'] + [a,da'] = 2c
    L = finite_dgla({"a": 0, "b": 0, "c": 1, "e": 1},
                    {("a", "b"): {"b": 1}, ("a", "e"): {"e": 1}},
                    differential={"b": {"c": 1}})
    rep = check_dgla_axioms(L)
    assert not rep.ok and rep.law == "graded Leibniz"


def test_d_squared_violation():
    L = finite_dgla({"a": 0, "b": 1, "c": 2}, differential={"a": {"b": 1}, "b": {"c": 1}})
    rep = check_dgla_axioms(L)
    assert not rep.ok and rep.law == "d∘d = 0"


def test_skew_violation():
    L = finite_dgla({"a": 1, "b": 2}, {("a", "a"): {"b": 1}})
    assert check_dgla_axioms(L).ok
    odd = finite_dgla({"a": 0, "b": 0}, {("a", "a"): {"b": 1}})
    rep = check_dgla_axioms(odd)
    assert not rep.ok and rep.law == "graded skewsymmetry"


def test_hand_examples_pass():
    for L in (heisenberg(), upper_triangular(4), uv(), sl2_forms()):
        assert check_dgla_axioms(L).ok, L.name


# -- tensor products ------------------------------------------------------------

def test_tensor_with_field_is_a_copy():
    L = sl2()
    LQ = tensor_with_algebra(L, make_field())
    assert LQ.dims() == L.dims()
    assert check_dgla_axioms(LQ).ok


def test_tensor_abelian_stays_abelian():
    L = finite_dgla({"a": 0, "b": 1}, differential={"a": {"b": 1}})
    LB = tensor_with_algebra(L, T3)
    basis = [b for d in LB.degrees() for b in LB.basis(d)]
    assert all(not LB.bracket(x, y) for x in basis for y in basis)
    assert check_dgla_axioms(LB).ok


def test_tensor_sl2_truncated():
    LB = tensor_with_algebra(sl2(), T3)
    assert LB.bracket({("e", (1,)): 1}, {("f", (1,)): 1}) == {("h", (2,)): 1}
    assert LB.d({("e", (1,)): 1}) == {}
    assert check_dgla_axioms(LB).ok


def test_tensor_keeps_differential():
    LB = tensor_with_algebra(sl2_forms(), make_truncated_multivariate(["x", "y"], 2))
    assert LB.d({(("e", "t"), (1, 0)): 1}) == {(("e", "dt"), (1, 0)): 1}
    assert check_dgla_axioms(LB).ok


# -- Maurer-Cartan --------------------------------------------------------------

def test_mc_residual_examples():
    L = uv()
    assert mc_residual(zero_element(L, T3, 1)).is_zero()
    x = el(L, T3, {(1,): {"u": 1}}, 1)
    # hand expansion: d(ut) = 0, [ut, ut] = v t^2, so the residual is v t^2 / 2
    assert mc_residual(x) == el(L, T3, {(2,): {"v": Fraction(1, 2)}}, 2)
    assert not is_maurer_cartan(x)


def test_mc_residual_abelian_is_dx():
    L = finite_dgla({"a": 1, "b": 2}, differential={"a": {"b": 1}})
    x = el(L, T3, {(1,): {"a": 2}, (2,): {"a": -1}}, 1)
    assert mc_residual(x) == x.d()


def test_mc_residual_rejects_wrong_degree():
    with pytest.raises(ValueError):
        mc_residual(el(sl2(), T3, {(1,): {"e": 1}}, 0))


def test_element_validation():
    with pytest.raises(ValueError):
        el(sl2(), T3, {(0,): {"e": 1}}, 0)
    with pytest.raises(ValueError):
        el(sl2(), T3, {(1,): {"e": 1}}, 1)


# -- BCH ----------------------------------------------------------------------

def test_bernoulli():
    assert [bernoulli(k) for k in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0,
                                                Fraction(1, 42)]


def test_bch_trivial_cases():
    L = sl2()
    a = el(L, T3, {(1,): {"e": 1, "h": 2}, (2,): {"f": 3}}, 0)
    assert bch(a, zero_element(L, T3, 0)) == a
    assert bch(a, -a).is_zero()


def test_bch_heisenberg():
    L = heisenberg()
    got = bch(el(L, T3, {(1,): {"e": 1}}, 0), el(L, T3, {(1,): {"f": 1}}, 0))
    assert got == el(L, T3, {(1,): {"e": 1, "f": 1}, (2,): {"z": Fraction(1, 2)}}, 0)


def test_bch_heisenberg_against_matrices():
    X, Y = oracles.elementary(3, 0, 1), oracles.elementary(3, 1, 2)
    Z = oracles.bch_matrix(X, Y)
    assert Z == oracles.matadd(oracles.matadd(X, Y), oracles.matscale(oracles.elementary(3, 0, 2), Fraction(1, 2)))


def test_bch_third_order_coefficients():
    """Free-enough nilpotent algebra: compare the degree 3 part with the matrix series."""
    L = upper_triangular(4)
    A = make_truncated_poly(4)
    X = {(0, 1): 1, (2, 3): 2}
    Y = {(1, 2): 1, (0, 2): -1}
    z = bch(el(L, A, {(1,): X}, 0), el(L, A, {(1,): Y}, 0))
    mats = [oracles.zeros(4), oracles.zeros(4)]
    for m, v in zip(mats, (X, Y)):
        for (i, j), c in v.items():
            m[i][j] = Fraction(c)
    ref = oracles.bch_matrix(*mats)
    total = {}
    for mu, v in z.terms.items():
        for k, c in v.items():
            total[k] = total.get(k, 0) + c
    assert {k: c for k, c in total.items() if c} == {(i, j): ref[i][j] for i in range(4) for j in range(4) if ref[i][j]}


def _matrix(v, n):
    m = oracles.zeros(n)
    for (i, j), c in v.items():
        m[i][j] += Fraction(c)
    return m


@st.composite
def upper_pairs(draw):
    n = draw(st.integers(2, 4))
    entries = [(i, j) for i in range(n) for j in range(i + 1, n)]
    coef = st.builds(Fraction, st.integers(-3, 3), st.integers(1, 3))
    X = {e: draw(coef) for e in entries}
    Y = {e: draw(coef) for e in entries}
    return n, {k: c for k, c in X.items() if c}, {k: c for k, c in Y.items() if c}


@given(upper_pairs())
def test_bch_matches_matrix_logarithm(data):
    """log(exp X exp Y) for nilpotent rational matrices; the Lie algebra is nilpotent so the series is finite."""
    n, X, Y = data
    L = upper_triangular(n)
    A = make_truncated_poly(n + 1)
    z = bch(el(L, A, {(1,): X}, 0), el(L, A, {(1,): Y}, 0))
    total = {}
    for v in z.terms.values():
        for k, c in v.items():
            total[k] = total.get(k, 0) + c
    ref = oracles.bch_matrix(_matrix(X, n), _matrix(Y, n))
    assert _matrix(total, n) == ref


# -- properties on random nilpotent elements ---------------------------------------

coef = st.integers(-2, 2)


def random_element(draw, L, A, deg):
    terms = {}
    for mu in A.basis:
        v = {}
        for b in L.basis(deg):
            c = draw(coef)
            for k, x in b.items():
                v[k] = v.get(k, 0) + c * x
        terms[mu] = v
    return nilpotent(L, A, terms, deg)


ALGEBRAS = {"sl2": sl2, "sl2_forms": sl2_forms, "n4": lambda: upper_triangular(4)}
RINGS = {"t^3": lambda: T3, "t^4": lambda: make_truncated_poly(4), "xy": lambda: make_truncated_multivariate("xy", 2)}


@given(st.sampled_from(sorted(ALGEBRAS)), st.sampled_from(sorted(RINGS)), st.data())
def test_bch_associative(lname, rname, data):
    L, A = ALGEBRAS[lname](), RINGS[rname]()
    a, b, c = (random_element(data.draw, L, A, 0) for _ in range(3))
    assert bch(a, bch(b, c)) == bch(bch(a, b), c)


@given(st.sampled_from(sorted(RINGS)), st.data())
def test_bch_abelian_is_addition(rname, data):
    L = finite_dgla({"a": 0, "b": 0, "c": 0})
    A = RINGS[rname]()
    a, b = (random_element(data.draw, L, A, 0) for _ in range(2))
    assert bch(a, b) == a + b


@given(st.sampled_from(sorted(RINGS)), st.data())
def test_bch_series_terminates(rname, data):
    L, A = sl2(), RINGS[rname]()
    a, b = (random_element(data.draw, L, A, 0) for _ in range(2))
    terms = bch_terms(a, b)
    assert len(terms) == A.nilpotency_order - 1
    # Z_n lives in L ⊗ m_A^n, so anything past the nilpotency order vanishes
    for n, z in enumerate(terms, start=1):
        assert all(sum(mu) >= n for mu in z.terms)


@settings(max_examples=60)
@given(st.sampled_from(sorted(RINGS)), st.data())
def test_gauge_group_law(rname, data):
    L, A = sl2_forms(), RINGS[rname]()
    a, b = (random_element(data.draw, L, A, 0) for _ in range(2))
    x = random_element(data.draw, L, A, 1)
    assert gauge_action(a, gauge_action(b, x)) == gauge_action(bch(a, b), x)


@given(st.sampled_from(sorted(RINGS)), st.data())
def test_gauge_preserves_mc(rname, data):
    L, A = sl2_forms(), RINGS[rname]()
    # the MC elements here are e^b * 0 = -db + ..., gauge them again
    a, b = (random_element(data.draw, L, A, 0) for _ in range(2))
    x = gauge_action(b, zero_element(L, A, 1))
    assert is_maurer_cartan(x)
    assert is_maurer_cartan(gauge_action(a, x))


@given(st.sampled_from(sorted(RINGS)), st.data())
def test_gauge_series_length_bounded(rname, data):
    L, A = sl2_forms(), RINGS[rname]()
    a = random_element(data.draw, L, A, 0)
    x = random_element(data.draw, L, A, 1)
    assert series_length(a, x) <= A.nilpotency_order


def test_gauge_trivial_cases():
    L = sl2_forms()
    x = el(L, T3, {(1,): {("e", "dt"): 1}}, 1)
    assert gauge_action(zero_element(L, T3, 0), x) == x
    ab = finite_dgla({"a": 0, "b": 1}, differential={"a": {"b": 1}})
    a = el(ab, T3, {(1,): {"a": 2}}, 0)
    y = el(ab, T3, {(2,): {"b": 1}}, 1)
    assert gauge_action(a, y) == y - a.d()


def test_gauge_rejects_degrees():
    L = sl2_forms()
    with pytest.raises(ValueError):
        gauge_action(el(L, T3, {(1,): {("e", "dt"): 1}}, 1), el(L, T3, {(1,): {("e", "dt"): 1}}, 1))


# -- first and second order ---------------------------------------------------------

def test_tangent_def_examples():
    assert tangent_def(finite_dgla({f"x{i}": 1 for i in range(4)})) == 4
    assert tangent_def(finite_dgla({"a": 0, "b": 1}, differential={"a": {"b": 1}})) == 0
    assert tangent_def(sl2_forms()) == 0


def test_first_order_gauge_equivalence():
    E = make_dual_numbers()
    L = sl2_forms()
    x = el(L, E, {(1,): {("h", "dt"): 1}}, 1)
    assert is_first_order_gauge_equivalent(x, x)
    a = el(L, E, {(1,): {("e", "t"): 3}}, 0)
    assert is_first_order_gauge_equivalent(x, x + a.d())
    ab = finite_dgla({"p": 1, "q": 1})
    assert not is_first_order_gauge_equivalent(el(ab, E, {(1,): {"p": 1}}, 1), el(ab, E, {(1,): {"q": 1}}, 1))
    with pytest.raises(ValueError):
        is_first_order_gauge_equivalent(el(L, T3, {(1,): {("h", "dt"): 1}}, 1), el(L, T3, {}, 1))


def test_lift_abelian_is_constant():
    L = finite_dgla({"a": 0, "b": 1, "c": 1})
    res = lift_order_by_order(L, {"c": 1}, 4)
    assert res.ok
    assert res.lifted.terms == {(1,): {"c": 1}}


def test_lift_obstruction_certificate():
    res = lift_order_by_order(uv(), {"u": 1}, 3)
    assert not res.ok
    assert res.order == 2
    assert res.defect == {"v": Fraction(-1, 2)}
    assert res.h2_class == [Fraction(-1, 2)]


def test_lift_unobstructed():
    L = sl2_forms()
    res = lift_order_by_order(L, {("e", "dt"): 1, ("f", "dt"): 2}, 4)
    assert res.ok and is_maurer_cartan(res.lifted)


def test_morphism_checks():
    L = sl2()
    assert identity_morphism(L).check() is None
    flip = DglaMorphism(L, L, lambda a: {{"e": "f", "f": "e", "h": "h"}[a]: 1})
    assert flip.check()[0] == "bracket"
