from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dgdef import apl
from dgdef.apl import AplForm
from dgdef.graded import DgSpace


def test_zero_simplex():
    assert apl.apl_basis(0, 3) == (((), ()),)


def test_one_simplex_weight_cap():
    got = apl.apl_basis_by_degree(1, 2)
    assert got[0] == [((0,), ()), ((1,), ()), ((2,), ())]
    assert got[1] == [((0,), (1,)), ((1,), (1,))]


def test_one_simplex_polynomial_cap():
    got = apl.apl_basis_by_degree(1, 2, cap="polynomial")
    assert got[1] == [((0,), (1,)), ((1,), (1,)), ((2,), (1,))]


def test_basis_sizes():
    assert len(apl.apl_basis(2, 2)) == 13
    with pytest.raises(ValueError):
        apl.apl_basis(-1, 2)
    with pytest.raises(ValueError):
        apl.apl_basis(1, 2, cap="other")


def test_d_of_square():
    t = AplForm.coordinate(1, 1)
    assert (t * t).d() == AplForm(1, {((1,), (1,)): 2})


def test_eliminated_coordinate():
    t0 = AplForm.coordinate(2, 0)
    total = t0 + AplForm.coordinate(2, 1) + AplForm.coordinate(2, 2)
    assert total == AplForm(2, apl.one(2))
    dsum = AplForm.differential_of_coordinate(2, 0) + AplForm.differential_of_coordinate(2, 1) \
        + AplForm.differential_of_coordinate(2, 2)
    assert dsum == AplForm(2, {})


def test_dt_antisymmetric():
    a = AplForm(2, {((0, 0), (2, 1)): 1})
    assert a == AplForm(2, {((0, 0), (1, 2)): -1})
    assert AplForm(2, {((0, 0), (1, 1)): 1}) == AplForm(2, {})


def test_faces_on_interval():
    t1 = AplForm.coordinate(1, 1)
    assert t1.face(1) == AplForm(0, {})
    assert t1.face(0) == AplForm(0, apl.one(0))
    for n in (1, 2, 3):
        for k in range(n + 1):
            assert AplForm(n, apl.one(n)).face(k) == AplForm(n - 1, apl.one(n - 1))


def test_face_index_checked():
    with pytest.raises(ValueError):
        apl.apl_face(3, apl.one(2), 2)
    with pytest.raises(ValueError):
        apl.apl_face(0, apl.one(0), 0)


@st.composite
def forms(draw, n, p=2):
    basis = apl.apl_basis(n, p)
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)))
    return {a: Fraction(c) for a, c in zip(basis, coeffs) if c}


def _homogeneous(x, k):
    return {a: c for a, c in x.items() if len(a[1]) == k}


@given(st.integers(1, 3), st.data())
def test_d_squared_and_weight(n, data):
    x = data.draw(forms(n, 3))
    assert apl.d(apl.d(x)) == {}
    assert all(apl.weight(a) <= 3 for a in apl.d(x))


@given(st.integers(1, 3), st.data())
def test_leibniz_and_commutativity(n, data):
    x, y = data.draw(forms(n)), data.draw(forms(n))
    for i in range(n + 1):
        for j in range(n + 1):
            a, b = _homogeneous(x, i), _homogeneous(y, j)
            ab = apl.mul(a, b)
            assert ab == {k: c * (-1) ** (i * j) for k, c in apl.mul(b, a).items()}
            rhs = apl.mul(apl.d(a), b)
            for k, c in apl.mul(a, apl.d(b)).items():
                rhs[k] = rhs.get(k, 0) + (-1) ** i * c
            assert apl.d(ab) == {k: c for k, c in rhs.items() if c}


@given(st.integers(1, 2), st.data())
def test_associative(n, data):
    x, y, z = (data.draw(forms(n, 1)) for _ in range(3))
    assert apl.mul(x, apl.mul(y, z)) == apl.mul(apl.mul(x, y), z)


@given(st.integers(1, 3), st.data())
def test_faces_are_dga_maps(n, data):
    x, y = data.draw(forms(n)), data.draw(forms(n))
    for k in range(n + 1):
        assert apl.apl_face(k, apl.d(x), n) == apl.d(apl.apl_face(k, x, n))
        assert apl.apl_face(k, apl.mul(x, y), n) == apl.mul(apl.apl_face(k, x, n), apl.apl_face(k, y, n))


@given(st.integers(2, 3), st.data())
def test_cosimplicial_identities(n, data):
    x = data.draw(forms(n, 3))
    for j in range(n + 1):
        for i in range(j):
            lhs = apl.apl_face(i, apl.apl_face(j, x, n), n - 1)
            rhs = apl.apl_face(j - 1, apl.apl_face(i, x, n), n - 1)
            assert lhs == rhs


def _capped_complex(n, p, cap):
    window = {}
    for a in apl.apl_basis(n, p, cap):
        window.setdefault(len(a[1]), []).append({a: Fraction(1)})
    return DgSpace(window, apl.form_degree, lambda a: dict(apl.d_atom(a)))


@pytest.mark.parametrize("n,p", [(0, 2), (1, 1), (1, 3), (2, 1), (2, 3), (3, 2)])
def test_weight_capped_forms_are_acyclic(n, p):
    assert _capped_complex(n, p, "weight").cohomology_dims() == {0: 1}


def test_polynomial_cap_has_spurious_class():
    # t^p dt is closed but its primitive t^{p+1}/(p+1) is over the cap
    assert _capped_complex(1, 2, "polynomial").cohomology_dims() == {0: 1, 1: 1}
