"""Locally trivial embedded deformations of a hypersurface through gluing data.

A gluing datum over ``A`` is one field ``a_i ∈ Θ(U_i) ⊗ m_A`` per chart such
that ``bch(-a_i, a_j)`` lies in ``Θ(-log Z)(U_ij) ⊗ m_A``.  Two data are
equivalent when ``a_i = bch(a'_i, b_i)`` with ``b_i`` logarithmic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .coefficients import ArtinianAlgebra, make_dual_numbers, make_truncated_poly
from .dgla import Dgla, NilpotentElement, bch, tangent_def
from .geometry import (
    LogThetaSheaf, SubschemeIdeal, ThetaSheaf, UnstableWindow, apply_field,
    cech_lie, chi_bisemicosimplicial, convert, log_theta_sections, multi_indices, theta_sections, _e, _lin,
)
from .linalg import Subspace, Vec, axpy, nullspace, scale, solve
from .simplicial import def_chi_tangent, h1_sc_tangent, tot_tw, tw_morphism


def _charts(n: int) -> List[int]:
    return list(range(n + 1))


def field_algebra(n: int, I: Tuple[int, ...], w: int = 0) -> Dgla:
    """Vector fields on ``U_I`` (chart ``min I``) as a Lie algebra in degree 0."""
    T = ThetaSheaf(n)
    return Dgla({0: theta_sections(T.charts, I, w).basis}, lambda a: 0, None,
                lambda x, y: T.bracket_atoms(I, x, y), f"Θ(U{''.join(map(str, I))})",
                member=lambda v: T.member(I, v))


# ----------------------------------------------------------------------------
# gluing data


@dataclass
class GluingDatum:
    base: ArtinianAlgebra
    fields: List[Dict[Tuple[int, ...], Vec]]  # per chart: monomial -> field in chart coordinates
    Z: SubschemeIdeal

    def element(self, i: int, I: Tuple[int, ...]) -> NilpotentElement:
        """``a_i`` restricted to ``U_I`` as an element of ``Θ(U_I) ⊗ m_A``."""
        L = field_algebra(self.Z.n, I)
        terms = {mu: convert(i, I[0], v) for mu, v in self.fields[i].items()}
        return NilpotentElement(L, self.base, terms, 0)


def first_order_datum(Z: SubschemeIdeal, fields: Sequence[Mapping]) -> GluingDatum:
    return GluingDatum(make_dual_numbers(), [{(1,): dict(v)} if v else {} for v in fields], Z)


@dataclass
class GluingReport:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    residual: Vec = field(default_factory=dict)
    logs: Dict[Tuple[int, int], NilpotentElement] = field(default_factory=dict)
    cocycle: Optional[bool] = None

    def __bool__(self):
        return self.ok


def is_gluing_datum(datum: GluingDatum) -> GluingReport:
    """Check ``bch(-a_i, a_j) ∈ Θ(-log Z)(U_ij) ⊗ m_A`` on every overlap.

    On P^2 also verifies ``bch(d_01, d_12) = d_02`` on the triple overlap,
    which the pairwise conditions imply.
    """
    Z = datum.Z
    log = LogThetaSheaf(Z)
    logs = {}
    for i, j in combinations(_charts(Z.n), 2):
        I = (i, j)
        dij = bch(-datum.element(i, I), datum.element(j, I))
        logs[i, j] = dij
        for mu, v in sorted(dij.terms.items()):
            if not log.member(I, v):
                return GluingReport(False, (i, j), {(a, mu): c for a, c in v.items()}, logs)
    cocycle = None
    if Z.n == 2:
        I = (0, 1, 2)
        L = field_algebra(2, I)

        def lift(d, src):
            return NilpotentElement(L, datum.base, {mu: convert(src, 0, v) for mu, v in d.terms.items()}, 0)

        cocycle = bch(lift(logs[0, 1], 0), lift(logs[1, 2], 1)) == lift(logs[0, 2], 0)
    return GluingReport(True, logs=logs, cocycle=cocycle)


def apply_equivalence(datum: GluingDatum, witnesses: Sequence[Mapping]) -> GluingDatum:
    """``a_i ↦ bch(a_i, b_i)`` for logarithmic ``b_i`` (monomial -> field)."""
    out = []
    for i, b in enumerate(witnesses):
        L = field_algebra(datum.Z.n, (i,))
        a = NilpotentElement(L, datum.base, datum.fields[i], 0)
        bb = NilpotentElement(L, datum.base, b, 0)
        out.append(dict(bch(a, bb).terms))
    return GluingDatum(datum.base, out, datum.Z)


def is_equivalence(new: GluingDatum, old: GluingDatum, witnesses: Sequence[Mapping]) -> bool:
    """``a_i = bch(a'_i, b_i)`` with every ``b_i`` logarithmic on ``U_i``."""
    log = LogThetaSheaf(new.Z)
    for i, b in enumerate(witnesses):
        for v in b.values():
            if not log.member((i,), v):
                return False
    return apply_equivalence(old, witnesses).fields == [dict(f) for f in new.fields]


# ----------------------------------------------------------------------------
# first order


def _tangent_at(Z: SubschemeIdeal, w: int) -> Tuple[int, List[List[Vec]]]:
    n = Z.n
    T = ThetaSheaf(n)
    loc = [theta_sections(T.charts, (i,), w).basis for i in _charts(n)]
    pairs = list(combinations(_charts(n), 2))
    logs = {I: Subspace(log_theta_sections(T.charts, I, Z, w).basis) for I in pairs}
    unknowns = [(i, b) for i in _charts(n) for b in loc[i]]
    cols = []
    for i, b in unknowns:
        col: Vec = {}
        for I in pairs:
            if i not in I:
                continue
            r = convert(i, I[0], b)
            s = 1 if i == I[1] else -1
            axpy(col, {(I, a): c for a, c in logs[I].reduce(r).items()}, s)
        cols.append(col)
    Zsp = Subspace()
    for z in nullspace(cols):
        v: Vec = {}
        for k, c in z.items():
            i, b = unknowns[k]
            axpy(v, {(i, a): x for a, x in b.items()}, c)
        Zsp.insert(v)
    logloc = Subspace()
    for i in _charts(n):
        for b in log_theta_sections(T.charts, (i,), Z, w).basis:
            logloc.insert({(i, a): c for a, c in b.items()})
    reps = []
    for v in Zsp.basis:
        if logloc.insert(v):
            reps.append([{a: c for (j, a), c in v.items() if j == i} for i in _charts(n)])
    return len(reps), reps


def hilb_tangent(Z: SubschemeIdeal, w: int, check_stability: bool = True) -> int:
    """First-order gluing data modulo logarithmic changes, as a dimension."""
    dim, _ = _tangent_at(Z, w)
    if check_stability:
        dim2, _ = _tangent_at(Z, w + 2)
        if dim != dim2:
            raise UnstableWindow(f"hilb tangent changes from {dim} to {dim2} between windows {w} and {w + 2}")
    return dim


def tangent_classes(Z: SubschemeIdeal, w: int) -> List[List[Vec]]:
    """First-order gluing data whose classes form a basis of the tangent space."""
    return _tangent_at(Z, w)[1]


def _normal_h0_at(Z: SubschemeIdeal, w: int) -> int:
    n = Z.n
    T = ThetaSheaf(n)
    # quotient Θ/Θlog on U_i and U_ij by explicit complements of the log subspace
    Q0 = []
    for i in _charts(n):
        full = theta_sections(T.charts, (i,), w).basis
        log = Subspace(log_theta_sections(T.charts, (i,), Z, w).basis)
        comp = []
        for b in full:
            if log.insert(b):
                comp.append((i, b))
        Q0.extend(comp)
    rows: Dict[Tuple[int, int], Subspace] = {}
    for I in combinations(_charts(n), 2):
        rows[I] = Subspace(log_theta_sections(T.charts, I, Z, w).basis)
    cols = []
    for i, b in Q0:
        col: Vec = {}
        for I, log in rows.items():
            if i in I:
                s = 1 if i == I[1] else -1
                red = log.reduce(convert(i, I[0], b))
                axpy(col, {(I, a): c for a, c in red.items()}, s)
        cols.append(col)
    return len(nullspace(cols))


def normal_sheaf_h0(Z: SubschemeIdeal, w: int, check_stability: bool = True) -> int:
    """``dim H^0`` of ``∏ Θ(U_i)/Θlog(U_i) -> ∏ Θ(U_ij)/Θlog(U_ij)``."""
    h = _normal_h0_at(Z, w)
    if check_stability:
        h2 = _normal_h0_at(Z, w + 2)
        if h != h2:
            raise UnstableWindow(f"normal sheaf h0 changes from {h} to {h2} between windows {w} and {w + 2}")
    return h


# ----------------------------------------------------------------------------
# second order


@dataclass
class LiftReport:
    datum: Optional[GluingDatum] = None
    defect: Dict = field(default_factory=dict)
    window: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.datum is not None


def lift_gluing(first: GluingDatum, order: int = 3, w: int = 0, max_window: Optional[int] = None) -> LiftReport:
    """Extend a first-order datum to ``Q[t]/(t^3)``.

    Order-2 equation: ``a²_j - a²_i - c_ij = ½[a¹_i, a¹_j]`` on ``U_ij`` with
    ``c_ij`` logarithmic; it is linear in ``(a², c)`` and solved in growing
    windows.  On failure the right-hand side is returned as the defect.
    """
    if order != 3:
        raise ValueError("only the extension to Q[t]/(t^3) is implemented")
    if first.base.nilpotency_order != 2:
        raise ValueError("first-order datum expected")
    if not is_gluing_datum(first):
        raise ValueError("input is not a first-order gluing datum")
    Z = first.Z
    n = Z.n
    a1 = [f.get((1,), {}) for f in first.fields]
    pairs = list(combinations(_charts(n), 2))
    rhs: Vec = {}
    for i, j in pairs:
        L = field_algebra(n, (i, j))
        br = L.bracket(convert(i, i, a1[i]), convert(j, i, a1[j]))
        axpy(rhs, {((i, j), a): c for a, c in br.items()}, Fraction(1, 2))
    T = ThetaSheaf(n)
    top = max_window if max_window is not None else 2 * w + 4
    for W in range(w, top + 1):
        unknowns = []
        cols = []
        for i in _charts(n):
            for b in theta_sections(T.charts, (i,), W).basis:
                col: Vec = {}
                for I in pairs:
                    if i in I:
                        axpy(col, {(I, a): c for a, c in convert(i, I[0], b).items()}, 1 if i == I[1] else -1)
                unknowns.append(("a", i, b))
                cols.append(col)
        for I in pairs:
            for b in log_theta_sections(T.charts, I, Z, W).basis:
                unknowns.append(("c", I, b))
                cols.append({(I, a): -c for a, c in b.items()})
        sol = solve(cols, rhs)
        if sol is None:
            continue
        a2 = [dict() for _ in _charts(n)]
        for k, c in sol.items():
            kind, i, b = unknowns[k]
            if kind == "a":
                axpy(a2[i], b, c)
        A = make_truncated_poly(3)
        fields = []
        for i in _charts(n):
            terms = {}
            if a1[i]:
                terms[(1,)] = dict(a1[i])
            if a2[i]:
                terms[(2,)] = a2[i]
            fields.append(terms)
        datum = GluingDatum(A, fields, Z)
        if not is_gluing_datum(datum):
            raise AssertionError("order-2 solution fails the gluing test")
        return LiftReport(datum, window=W)
    return LiftReport(None, defect=rhs, window=top)


def _chart_monomials(n: int, i: int, deg: int):
    from .geometry import _degree_one_monomials

    for m in _degree_one_monomials(n, (), 0, deg):
        yield _lin(m, [(-deg, _e(n, i))])


def _poly_times(p: Mapping, q: Mapping) -> Vec:
    out: Vec = {}
    for e, c in p.items():
        for f, d in q.items():
            axpy(out, {tuple(x + y for x, y in zip(e, f)): 1}, c * d)
    return out


@dataclass
class EquationLift:
    G: Dict
    first: GluingDatum
    second: GluingDatum
    window: int


def equation_level_lift(Z: SubschemeIdeal, G: Mapping, w: Optional[int] = None) -> EquationLift:
    """Gluing data for the family ``F + tG`` up to order 2.

    On each chart solve ``a1(f) = g + u1 f`` and
    ``a2(f) = u1 g + u2 f - ½ a1(a1(f))`` for fields ``a1, a2`` and functions
    ``u1, u2``, so that ``e^{a}(f) = (f + t g)(1 + t u1 + t² u2)``.
    """
    n, d = Z.n, Z.degree
    if any(sum(e) != d for e in G):
        raise ValueError("G must be homogeneous of the same degree as F")
    T = ThetaSheaf(n)
    start = d if w is None else w
    for W in range(start, start + 4):
        a1s, a2s = [], []
        for i in _charts(n):
            f = Z.dehomogenize(i)
            g = {_lin(e, [(-d, _e(n, i))]): Fraction(c) for e, c in G.items() if c}
            fields = theta_sections(T.charts, (i,), W).basis
            funcs = [{m: Fraction(1)} for m in _chart_monomials(n, i, W + d)]
            cols = [apply_field(i, b, f) for b in fields] + [scale(_poly_times(u, f), -1) for u in funcs]
            sol = solve(cols, g)
            if sol is None:
                break
            a1: Vec = {}
            u1: Vec = {}
            for k, c in sol.items():
                if k < len(fields):
                    axpy(a1, fields[k], c)
                else:
                    axpy(u1, funcs[k - len(fields)], c)
            rhs = _poly_times(u1, g)
            axpy(rhs, apply_field(i, a1, apply_field(i, a1, f)), Fraction(-1, 2))
            sol2 = solve(cols, rhs)
            if sol2 is None:
                break
            a2: Vec = {}
            for k, c in sol2.items():
                if k < len(fields):
                    axpy(a2, fields[k], c)
            a1s.append(a1)
            a2s.append(a2)
        else:
            first = first_order_datum(Z, a1s)
            A = make_truncated_poly(3)
            fields3 = []
            for a1, a2 in zip(a1s, a2s):
                terms = {}
                if a1:
                    terms[(1,)] = a1
                if a2:
                    terms[(2,)] = a2
                fields3.append(terms)
            return EquationLift(dict(G), first, GluingDatum(A, fields3, Z), W)
    raise ValueError("equation-level lift not found in the searched windows")


def normal_directions(Z: SubschemeIdeal) -> List[Dict]:
    """Monomials ``G`` of degree ``d`` spanning ``S_d / (F)``."""
    from .geometry import _degree_one_monomials

    d = Z.degree
    monos = sorted(_degree_one_monomials(Z.n, (), 0, d), reverse=True)
    span = Subspace([dict((e, c) for e, c in Z.F)])
    out = []
    for m in monos:
        if span.insert({m: Fraction(1)}):
            out.append({m: Fraction(1)})
    return out


# ----------------------------------------------------------------------------
# four routes


@dataclass
class CrosscheckReport:
    values: Dict[str, int]

    @property
    def agree(self) -> bool:
        return len(set(self.values.values())) == 1

    def __bool__(self):
        return self.agree


def functor_crosscheck(Z: SubschemeIdeal, w: int, p_max: int = 1) -> CrosscheckReport:
    """First-order tangent dimension along four independent routes."""
    from .bisimplicial import tot_tw_triangle, tw_rows_first

    values = {"hilb_gluing": hilb_tangent(Z, w)}
    B = chi_bisemicosimplicial(Z, w)
    values["tot_tw_triangle"] = tangent_def(tot_tw_triangle(B, p_max))
    _, TDelta = tw_rows_first(B, p_max)
    values["h1_sc_T_delta"] = h1_sc_tangent(TDelta)
    values["def_chi_tw"] = def_chi_tangent(chi_tw(Z, w, p_max))
    return CrosscheckReport(values)


def chi_tw(Z: SubschemeIdeal, w: int, p_max: int):
    """``χ_TW : TW(Čech Θ(-log Z)) ↪ TW(Čech Θ)``."""
    log = tot_tw(cech_lie(LogThetaSheaf(Z), w), p_max)
    theta = tot_tw(cech_lie(ThetaSheaf(Z.n), w), p_max)
    return tw_morphism(lambda n, v: {v: Fraction(1)}, log, theta, "χ_TW", image_member=log.contains)


def whitney_element(Z: SubschemeIdeal, fields: Sequence[Mapping]) -> Vec:
    """Degree-0 Thom-Whitney element ``x_n = Σ_k t_k a_{i_k}`` on ``U_{i_0..i_n}``."""
    from . import apl

    out: Vec = {}
    n = Z.n
    for h in range(n + 1):
        for I in multi_indices(n, h):
            for k, i in enumerate(I):
                tk = apl.t(h, k)
                for a, c in convert(i, I[0], fields[i]).items():
                    for alpha, ca in tk.items():
                        axpy(out, {(h, (I, a), alpha): c * ca})
    return out
