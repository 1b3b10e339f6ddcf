from fractions import Fraction

import pytest

from conftest import sl2_forms
from dgdef.bisimplicial import (BisemicosimplicialDgla, BisemicosimplicialDgvs, check_bisemicosimplicial,
                                tot_h_delta, tot_triangle, tot_tw_triangle, tot_v_delta, tw_columns_first,
                                tw_orders_coincide, tw_rows_first)
from dgdef.dgla import check_dgla_axioms, identity_morphism, tangent_def, zero_morphism
from dgdef.geometry import LineBundleSheaf, cech_lie, chi_bisemicosimplicial, parse_subscheme
from dgdef.simplicial import from_morphism, tot

LINE = "X0 + X1 + X2"
CONIC = "X0*X1 + X2**2"


def three_tots(B):
    return (tot(tot_h_delta(B)).cohomology_dims(), tot(tot_v_delta(B)).cohomology_dims(),
            tot_triangle(B).cohomology_dims())


def doubled_column(k, identity):
    """Two copies of Čech O(k) on P1 joined by the identity or the zero map."""
    col = cech_lie(LineBundleSheaf(1, k), 3)
    grid = {(i, j): col.levels[j] for i in range(2) for j in range(2)}
    return BisemicosimplicialDgla(
        grid, lambda i, j, s, a: {a: Fraction(1)} if identity and s == 0 else {},
        lambda i, j, k, a: col.face_atom(j, k, a), "double")


def test_single_entry():
    L = sl2_forms()
    B = BisemicosimplicialDgla({(0, 0): L}, lambda *a: {}, lambda *a: {})
    assert check_bisemicosimplicial(B, True)
    assert tot_triangle(B).dims() == L.dims()
    assert tot_triangle(B).cohomology_dims() == L.cohomology_dims()
    rep = tw_orders_coincide(B, 2)
    assert rep.ok and rep.dims == L.dims()


def test_one_row_is_a_cone():
    chi = identity_morphism(sl2_forms())
    for f in (chi, zero_morphism(chi.source, chi.target)):
        B = BisemicosimplicialDgla({(0, 0): f.source, (1, 0): f.target},
                                   lambda i, j, s, a: f.atom(a) if s == 0 else {}, lambda *a: {})
        want = tot(from_morphism(f)).cohomology_dims()
        assert all(t == want for t in three_tots(B))
        assert tw_orders_coincide(B, 1)


@pytest.mark.parametrize("identity,want", [(True, {}), (False, {1: 1, 2: 1})])
def test_doubled_line_bundle(identity, want):
    B = doubled_column(-2, identity)
    assert check_bisemicosimplicial(B)
    for got in three_tots(B):
        assert got == want
    assert tot_tw_triangle(B, 1).cohomology_dims() == want


@pytest.mark.parametrize("text,h1", [(LINE, 2), (CONIC, 5)])
def test_chi_triangle(text, h1):
    B = chi_bisemicosimplicial(parse_subscheme(text, 2), 0)
    assert check_bisemicosimplicial(B, True)
    for got in three_tots(B):
        assert got == {1: h1}
    T = tot_tw_triangle(B, 1)
    assert tangent_def(T) == h1
    assert T.cohomology_dims() == {1: h1}


def test_chi_triangle_point_on_p1():
    B = chi_bisemicosimplicial(parse_subscheme("X0 - X1", 1), 1)
    assert three_tots(B) == ({1: 1},) * 3


def test_broken_mixed_square():
    B = chi_bisemicosimplicial(parse_subscheme(CONIC, 2), 0)

    def hface(i, j, s, a):
        return {a: Fraction(2 if j == 1 else 1)} if s == 0 else {}

    bad = BisemicosimplicialDgla(B.grid, hface, lambda i, j, k, a: B.vface_atom(i, j, k, a))
    rep = check_bisemicosimplicial(bad)
    assert not rep.ok and rep.law == "mixed square"
    s, k, i, j = rep.witness
    assert (s, i, j) == (0, 1, 1) and 0 <= k <= 1


def test_row_failure_is_labelled():
    B = doubled_column(-2, True)
    bad = BisemicosimplicialDgvs(B.grid, lambda i, j, s, a: {("junk", a): 1} if j == 0 else B.hface_atom(i, j, s, a),
                                 lambda i, j, k, a: B.vface_atom(i, j, k, a))
    rep = check_bisemicosimplicial(bad)
    assert not rep.ok and rep.law.startswith("horizontal")


@pytest.mark.parametrize("text", [LINE, CONIC])
def test_thom_whitney_orders(text):
    B = chi_bisemicosimplicial(parse_subscheme(text, 2), 0)
    rep = tw_orders_coincide(B, 1)
    assert rep.ok, rep.detail
    assert rep.pairs_checked == sum(rep.dims.values()) ** 2
    R, _ = tw_rows_first(B, 1)
    C, _ = tw_columns_first(B, 1)
    assert R.dims() == C.dims() == rep.dims


def test_tw_triangle_is_a_dgla():
    B = chi_bisemicosimplicial(parse_subscheme(CONIC, 2), 0)
    assert check_dgla_axioms(tot_tw_triangle(B, 1)).ok
