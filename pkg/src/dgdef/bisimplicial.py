"""Bisemicosimplicial objects: three totalizations and three Thom-Whitney orders.

A grid entry ``V_{i,j}`` sits at horizontal index ``i`` and vertical index
``j``.  ``hface(i, j, s, atom)`` is ``∂^{H_j}_s : V_{i-1,j} -> V_{i,j}`` and
``vface(i, j, k, atom)`` is ``∂^{V_i}_k : V_{i,j-1} -> V_{i,j}``.

Thom-Whitney atoms of the triangle construction are ``(n, m, v, α, β)`` with
``α`` a form on the horizontal simplex ``Δ^n`` and ``β`` on the vertical
``Δ^m``; degree ``|v| + |α| + |β|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Tuple

from . import apl
from .dgla import Dgla
from .graded import ComplexError, DgSpace
from .linalg import Subspace, Vec, axpy, nullspace
from .simplicial import Report, SemicosimplicialDgla, SemicosimplicialDgvs, check_semicosimplicial, tot, tot_tw


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _empty() -> DgSpace:
    return DgSpace({}, lambda a: 0)


class BisemicosimplicialDgvs:
    def __init__(self, grid: Mapping[Tuple[int, int], DgSpace], hface: Callable, vface: Callable, name: str = ""):
        self.grid = dict(grid)
        self._h = hface
        self._v = vface
        self._hc: Dict = {}
        self._vc: Dict = {}
        self.name = name
        self.width = max(i for i, _ in self.grid) + 1
        self.height = max(j for _, j in self.grid) + 1

    @property
    def is_lie(self) -> bool:
        return all(isinstance(V, Dgla) for V in self.grid.values())

    def entry(self, i: int, j: int) -> DgSpace:
        return self.grid.get((i, j)) or _empty()

    def hface_atom(self, i, j, s, atom) -> Vec:
        key = (i, j, s, atom)
        r = self._hc.get(key)
        if r is None:
            ok = 1 <= i < self.width and 0 <= s <= i and j < self.height
            r = {a: c for a, c in self._h(i, j, s, atom).items() if c} if ok else {}
            self._hc[key] = r
        return r

    def vface_atom(self, i, j, k, atom) -> Vec:
        key = (i, j, k, atom)
        r = self._vc.get(key)
        if r is None:
            ok = 1 <= j < self.height and 0 <= k <= j and i < self.width
            r = {a: c for a, c in self._v(i, j, k, atom).items() if c} if ok else {}
            self._vc[key] = r
        return r

    def hface(self, i, j, s, v: Mapping) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            axpy(out, self.hface_atom(i, j, s, a), c)
        return out

    def vface(self, i, j, k, v: Mapping) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            axpy(out, self.vface_atom(i, j, k, a), c)
        return out

    def row(self, j: int) -> SemicosimplicialDgvs:
        levels = [self.entry(i, j) for i in range(self.width)]
        cls = SemicosimplicialDgla if all(isinstance(L, Dgla) for L in levels) else SemicosimplicialDgvs
        return cls(levels, lambda i, s, a: self.hface_atom(i, j, s, a), f"row{j}")

    def column(self, i: int) -> SemicosimplicialDgvs:
        levels = [self.entry(i, j) for j in range(self.height)]
        cls = SemicosimplicialDgla if all(isinstance(L, Dgla) for L in levels) else SemicosimplicialDgvs
        return cls(levels, lambda j, k, a: self.vface_atom(i, j, k, a), f"col{i}")


class BisemicosimplicialDgla(BisemicosimplicialDgvs):
    pass


def check_bisemicosimplicial(B: BisemicosimplicialDgvs, brackets: bool = False) -> Report:
    """Row identities, column identities and the mixed squares ``∂^H_s ∂^V_k = ∂^V_k ∂^H_s``."""
    for j in range(B.height):
        r = check_semicosimplicial(B.row(j), brackets)
        if not r:
            return Report(False, "horizontal " + r.law, r.witness + (j,), r.detail)
    for i in range(B.width):
        r = check_semicosimplicial(B.column(i), brackets)
        if not r:
            return Report(False, "vertical " + r.law, r.witness + (i,), r.detail)
    for i in range(1, B.width):
        for j in range(1, B.height):
            V = B.entry(i - 1, j - 1)
            basis = [b for d in V.degrees() for b in V.basis(d)]
            for s in range(i + 1):
                for k in range(j + 1):
                    for b in basis:
                        lhs = B.hface(i, j, s, B.vface(i - 1, j, k, b))
                        rhs = B.vface(i, j, k, B.hface(i, j - 1, s, b))
                        if lhs != rhs:
                            return Report(False, "mixed square", (s, k, i, j), "∂^H_s ∂^V_k != ∂^V_k ∂^H_s")
    return Report(True)


# ----------------------------------------------------------------------------
# totalizations


def tot_h_delta(B: BisemicosimplicialDgvs) -> SemicosimplicialDgvs:
    """Rows first: level ``m`` is ``tot`` of row ``m``; vertical cofaces act on the ``V`` factor."""
    levels = [tot(B.row(m)) for m in range(B.height)]

    def coface(m, k, atom):
        n, v = atom
        return {(n, a): c for a, c in B.vface_atom(n, m, k, v).items()}

    return SemicosimplicialDgvs(levels, coface, f"totH({B.name})")


def tot_v_delta(B: BisemicosimplicialDgvs) -> SemicosimplicialDgvs:
    """Columns first: level ``n`` is ``tot`` of column ``n``; horizontal cofaces act on the ``V`` factor."""
    levels = [tot(B.column(n)) for n in range(B.width)]

    def coface(n, k, atom):
        m, v = atom
        return {(m, a): c for a, c in B.hface_atom(n, m, k, v).items()}

    return SemicosimplicialDgvs(levels, coface, f"totV({B.name})")


def tot_triangle(B: BisemicosimplicialDgvs) -> DgSpace:
    """``D = Σ(-1)^{n+m} d + Σ(-1)^{j+m} ∂^{H_m}_j + Σ(-1)^k ∂^{V}_k``; atoms ``(n, m, v)``."""

    def degree(atom):
        n, m, v = atom
        return B.entry(n, m).degree(v) + n + m

    def differential(atom):
        n, m, v = atom
        out = {(n, m, a): _sign(n + m) * c for a, c in B.entry(n, m).d_atom(v).items()}
        for j in range(n + 2):
            for a, c in B.hface_atom(n + 1, m, j, v).items():
                axpy(out, {(n + 1, m, a): c}, _sign(j + m))
        for k in range(m + 2):
            for a, c in B.vface_atom(n, m + 1, k, v).items():
                axpy(out, {(n, m + 1, a): c}, _sign(k))
        return out

    window: Dict[int, List[Vec]] = {}
    for (n, m), V in sorted(B.grid.items()):
        for i in V.degrees():
            window.setdefault(i + n + m, []).extend({(n, m, a): c for a, c in b.items()} for b in V.basis(i))
    T = DgSpace(window, degree, differential, f"tot▲({B.name})")
    if T.check_d_squared() is not None:
        raise ComplexError("D∘D != 0 on tot▲")
    return T


# ----------------------------------------------------------------------------
# Thom-Whitney


def _coords(V: DgSpace, v: Mapping, q: int) -> Dict[int, Fraction]:
    return {j: c for j, c in enumerate(V.coords(v, q)) if c}


def tw_triangle_window(B: BisemicosimplicialDgvs, p_max: int, cap: str = "weight") -> Dict[int, List[Vec]]:
    W, H = B.width, B.height
    forms = {n: apl.apl_basis_by_degree(n, p_max, cap) for n in range(max(W, H))}
    hmat, vmat = {}, {}
    for (n, m), V in B.grid.items():
        for q in V.degrees():
            for j, b in enumerate(V.basis(q)):
                if n + 1 < W:
                    for s in range(n + 2):
                        img = B.hface(n + 1, m, s, b)
                        hmat[n, m, s, q, j] = _coords(B.entry(n + 1, m), img, q) if img else {}
                if m + 1 < H:
                    for k in range(m + 2):
                        img = B.vface(n, m + 1, k, b)
                        vmat[n, m, k, q, j] = _coords(B.entry(n, m + 1), img, q) if img else {}
    totals = set()
    for (n, m), V in B.grid.items():
        for q in V.degrees():
            for a in forms[n]:
                for b in forms[m]:
                    totals.add(q + a + b)
    out: Dict[int, List[Vec]] = {}
    for D in sorted(totals):
        unknowns = []
        for (n, m), V in sorted(B.grid.items()):
            for q in V.degrees():
                for da, alphas in forms[n].items():
                    for beta in forms[m].get(D - q - da, ()):
                        for alpha in alphas:
                            for j in range(V.window[q].dim):
                                unknowns.append((n, m, q, j, alpha, beta))
        cols = []
        for (n, m, q, j, alpha, beta) in unknowns:
            col: Vec = {}
            if n >= 1:
                for s in range(n + 1):
                    for a2, c in apl.apl_face(s, {alpha: 1}, n).items():
                        axpy(col, {("H", n, m, s, q, j, a2, beta): c})
            if n + 1 < W:
                for s in range(n + 2):
                    for jj, c in hmat[n, m, s, q, j].items():
                        axpy(col, {("H", n + 1, m, s, q, jj, alpha, beta): c}, -1)
            if m >= 1:
                for k in range(m + 1):
                    for b2, c in apl.apl_face(k, {beta: 1}, m).items():
                        axpy(col, {("V", n, m, k, q, j, alpha, b2): c})
            if m + 1 < H:
                for k in range(m + 2):
                    for jj, c in vmat[n, m, k, q, j].items():
                        axpy(col, {("V", n, m + 1, k, q, jj, alpha, beta): c}, -1)
            cols.append(col)
        vecs = []
        for z in nullspace(cols):
            vec: Vec = {}
            for idx, c in z.items():
                n, m, q, j, alpha, beta = unknowns[idx]
                for a, cv in B.entry(n, m).basis(q)[j].items():
                    axpy(vec, {(n, m, a, alpha, beta): cv}, c)
            vecs.append(vec)
        if vecs:
            out[D] = vecs
    return out


def tot_tw_triangle(B: BisemicosimplicialDgvs, p_max: int, cap: str = "weight") -> DgSpace:
    """Triangle Thom-Whitney totalization.

    ``d(v⊗α⊗β) = dv⊗α⊗β + (-1)^{|v|} v⊗dα⊗β + (-1)^{|v|+|α|} v⊗α⊗dβ`` and
    ``[v⊗α⊗β, u⊗γ⊗δ] = (-1)^{(|α|+|β|)|u| + |β||γ|} [v,u]⊗αγ⊗βδ``.
    """

    def degree(atom):
        n, m, v, alpha, beta = atom
        return B.entry(n, m).degree(v) + len(alpha[1]) + len(beta[1])

    def differential(atom):
        n, m, v, alpha, beta = atom
        V = B.entry(n, m)
        out = {(n, m, a, alpha, beta): c for a, c in V.d_atom(v).items()}
        dv = V.degree(v)
        for a2, c in apl.d_atom(alpha):
            axpy(out, {(n, m, v, a2, beta): c}, _sign(dv))
        for b2, c in apl.d_atom(beta):
            axpy(out, {(n, m, v, alpha, b2): c}, _sign(dv + len(alpha[1])))
        return out

    window = tw_triangle_window(B, p_max, cap)
    name = f"TW▲({B.name})"
    if not B.is_lie:
        return DgSpace(window, degree, differential, name)

    def bracket(x, y):
        n, m, v, alpha, beta = x
        n2, m2, u, gamma, delta = y
        if (n, m) != (n2, m2):
            return {}
        r1 = apl.mul_atoms(alpha, gamma)
        if r1 is None:
            return {}
        r2 = apl.mul_atoms(beta, delta)
        if r2 is None:
            return {}
        V = B.entry(n, m)
        du = V.degree(u)
        s = r1[0] * r2[0] * _sign((len(alpha[1]) + len(beta[1])) * du + len(beta[1]) * len(gamma[1]))
        return {(n, m, a, r1[1], r2[1]): s * c for a, c in V.bracket_atoms(v, u).items()}

    return Dgla(window, degree, differential, bracket, name, bracket_key=lambda a: (a[0], a[1]))


def tw_rows_first(B: BisemicosimplicialDgvs, p_max: int, cap: str = "weight") -> DgSpace:
    """``tot_TW`` of the column of row Thom-Whitney DGLAs; atoms ``(m, (n, v, α), β)``."""
    rows = [tot_tw(B.row(m), p_max, cap) for m in range(B.height)]

    def coface(m, k, atom):
        n, v, alpha = atom
        return {(n, a, alpha): c for a, c in B.vface_atom(n, m, k, v).items()}

    cls = SemicosimplicialDgla if all(isinstance(R, Dgla) for R in rows) else SemicosimplicialDgvs
    S = cls(rows, coface, f"TWrows({B.name})")
    return tot_tw(S, p_max, cap), S


def tw_columns_first(B: BisemicosimplicialDgvs, p_max: int, cap: str = "weight") -> DgSpace:
    """``tot_TW`` of the row of column Thom-Whitney DGLAs; atoms ``(n, (m, v, β), α)``."""
    cols = [tot_tw(B.column(n), p_max, cap) for n in range(B.width)]

    def coface(n, k, atom):
        m, v, beta = atom
        return {(m, a, beta): c for a, c in B.hface_atom(n, m, k, v).items()}

    cls = SemicosimplicialDgla if all(isinstance(C, Dgla) for C in cols) else SemicosimplicialDgvs
    S = cls(cols, coface, f"TWcols({B.name})")
    return tot_tw(S, p_max, cap), S


def from_rows_atom(atom) -> Tuple[Hashable, int]:
    m, (n, v, alpha), beta = atom
    return (n, m, v, alpha, beta), 1


def from_columns_atom(atom) -> Tuple[Hashable, int]:
    n, (m, v, beta), alpha = atom
    return (n, m, v, alpha, beta), _sign(len(alpha[1]) * len(beta[1]))


def to_rows_atom(atom):
    n, m, v, alpha, beta = atom
    return (m, (n, v, alpha), beta), 1


def to_columns_atom(atom):
    n, m, v, alpha, beta = atom
    return (n, (m, v, beta), alpha), _sign(len(alpha[1]) * len(beta[1]))


def _relabel(v: Mapping, f) -> Vec:
    out: Vec = {}
    for a, c in v.items():
        b, s = f(a)
        axpy(out, {b: c}, s)
    return out


@dataclass
class CoincidenceReport:
    ok: bool
    detail: str = ""
    dims: Optional[Dict[int, int]] = None
    pairs_checked: int = 0

    def __bool__(self):
        return self.ok


def tw_orders_coincide(B: BisemicosimplicialDgvs, p_max: int, cap: str = "weight",
                       brackets: bool = True) -> CoincidenceReport:
    """Compare the three Thom-Whitney constructions under the canonical identification of atoms.

    Checks equality of the windows in every degree, of ``d`` on every basis
    vector and of the bracket on every pair of basis vectors.
    """
    T = tot_tw_triangle(B, p_max, cap)
    R, _ = tw_rows_first(B, p_max, cap)
    C, _ = tw_columns_first(B, p_max, cap)
    others = [("rows", R, from_rows_atom, to_rows_atom), ("columns", C, from_columns_atom, to_columns_atom)]
    for label, X, back, fwd in others:
        if set(X.degrees()) != set(T.degrees()):
            return CoincidenceReport(False, f"{label}: degrees differ")
        for d in T.degrees():
            mapped = Subspace(_relabel(b, back) for b in X.basis(d))
            if not mapped == T.window[d]:
                return CoincidenceReport(False, f"{label}: windows differ in degree {d}")
    basis = [b for d in T.degrees() for b in T.basis(d)]
    for b in basis:
        db = T.d(b)
        for label, X, back, fwd in others:
            if _relabel(X.d(_relabel(b, fwd)), back) != db:
                return CoincidenceReport(False, f"{label}: differential differs")
    pairs = 0
    if brackets and B.is_lie:
        images = {label: [_relabel(b, fwd) for b in basis] for label, X, back, fwd in others}
        for x in range(len(basis)):
            for y in range(len(basis)):
                ref = T.bracket(basis[x], basis[y])
                for label, X, back, fwd in others:
                    im = images[label]
                    if _relabel(X.bracket(im[x], im[y]), back) != ref:
                        return CoincidenceReport(False, f"{label}: bracket differs", pairs_checked=pairs)
                pairs += 1
    return CoincidenceReport(True, dims=T.dims(), pairs_checked=pairs)
