"""Semicosimplicial DG spaces and DGLAs, total and Thom-Whitney totalizations.

A :class:`SemicosimplicialDgvs` holds finitely many levels ``V_0 .. V_N``
(sparse :class:`~dgdef.graded.DgSpace` objects, levels above ``N`` are zero)
and cofaces ``∂_k : V_{i-1} -> V_i`` given on atoms.  ``tot`` and ``tot_tw``
return DgSpaces; call ``.to_complex()`` for the matrix complex.

Thom-Whitney atoms are ``(n, v, α)`` for ``v`` an atom of ``V_n`` and ``α`` an
atom of the forms on the ``n``-simplex.  Windows come from the weight-capped
forms of :mod:`dgdef.apl`; brackets are always evaluated exactly in the
ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from . import apl
from .coefficients import ArtinianAlgebra, make_dual_numbers
from .dgla import Dgla, DglaMorphism, NilpotentElement, bch, gauge_action, zero_element
from .graded import ComplexError, DgSpace, cohomology
from .linalg import Subspace, Vec, axpy, nullspace, scale, solve


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class SemicosimplicialDgvs:
    """Levels plus cofaces; ``coface(i, k, atom)`` is ``∂_k : V_{i-1} -> V_i`` on an atom."""

    def __init__(self, levels: Sequence[DgSpace], coface: Callable[[int, int, Hashable], Mapping], name: str = ""):
        self.levels = list(levels)
        self._coface = coface
        self._cache: Dict[Tuple[int, int, Hashable], Vec] = {}
        self.name = name

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def is_lie(self) -> bool:
        return all(isinstance(L, Dgla) for L in self.levels)

    def face_atom(self, i: int, k: int, atom) -> Vec:
        key = (i, k, atom)
        r = self._cache.get(key)
        if r is None:
            if not 1 <= i <= self.top or not 0 <= k <= i:
                r = {}
            else:
                r = {a: c for a, c in self._coface(i, k, atom).items() if c}
            self._cache[key] = r
        return r

    def face(self, i: int, k: int, v: Mapping) -> Vec:
        """``∂_k`` applied to ``v ∈ V_{i-1}``, landing in ``V_i``."""
        out: Vec = {}
        for a, c in v.items():
            axpy(out, self.face_atom(i, k, a), c)
        return out

    def coface_morphism(self, i: int, k: int) -> DglaMorphism:
        return DglaMorphism(self.levels[i - 1], self.levels[i], lambda a: self.face_atom(i, k, a), f"∂_{k}")

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, levels={[L.dims() for L in self.levels]})"


class SemicosimplicialDgla(SemicosimplicialDgvs):
    def __init__(self, levels: Sequence[Dgla], coface, name: str = ""):
        for L in levels:
            if not isinstance(L, Dgla):
                raise TypeError("every level of a semicosimplicial DGLA must be a Dgla")
        super().__init__(levels, coface, name)


@dataclass
class Report:
    ok: bool
    law: str = ""
    witness: Tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_semicosimplicial(S: SemicosimplicialDgvs, brackets: bool = True) -> Report:
    """Cosimplicial identities, chain-map and window conditions, and bracket preservation for DGLAs."""
    for i, V in enumerate(S.levels):
        bad = V.check_d_squared()
        if bad is not None:
            return Report(False, "d∘d = 0", (i,), f"level {i}")
    for i in range(1, S.top + 1):
        V, W = S.levels[i - 1], S.levels[i]
        for k in range(i + 1):
            for deg in V.degrees():
                for b in V.basis(deg):
                    img = S.face(i, k, b)
                    if S.face(i, k, V.d(b)) != W.d(img):
                        return Report(False, "chain map", (k, i), "∂_k d != d ∂_k")
                    if not W.in_window(img):
                        return Report(False, "window", (k, i), "coface leaves the window")
    for i in range(1, S.top):
        # ∂_l ∂_k = ∂_{k+1} ∂_l on V_{i-1} -> V_{i+1}, l <= k <= i
        V = S.levels[i - 1]
        basis = [b for deg in V.degrees() for b in V.basis(deg)]
        for k in range(i + 1):
            for l in range(k + 1):
                for b in basis:
                    lhs = S.face(i + 1, l, S.face(i, k, b))
                    rhs = S.face(i + 1, k + 1, S.face(i, l, b))
                    if lhs != rhs:
                        return Report(False, "cosimplicial identity", (l, k, i), "∂_l∂_k != ∂_{k+1}∂_l")
    if brackets and S.is_lie:
        for i in range(1, S.top + 1):
            V = S.levels[i - 1]
            W = S.levels[i]
            basis = [b for deg in V.degrees() for b in V.basis(deg)]
            for k in range(i + 1):
                for x in basis:
                    fx = S.face(i, k, x)
                    for y in basis:
                        if S.face(i, k, V.bracket(x, y)) != W.bracket(fx, S.face(i, k, y)):
                            return Report(False, "bracket", (k, i), "∂_k does not preserve brackets")
    return Report(True)


def from_morphism(chi: DglaMorphism) -> SemicosimplicialDgla:
    """``L ⇉ M`` with ``∂_0 = χ`` and ``∂_1 = 0``, zero above."""

    def coface(i, k, atom):
        return chi.atom(atom) if k == 0 else {}

    return SemicosimplicialDgla([chi.source, chi.target], coface, f"cone({chi.name})")


# ----------------------------------------------------------------------------
# total complex


def tot(S: SemicosimplicialDgvs) -> DgSpace:
    """``⊕ V_n[-n]`` with ``D = (-1)^n d_n + Σ_k (-1)^k ∂_k``; atoms ``(n, v)``."""
    levels = S.levels

    def degree(atom):
        n, v = atom
        return levels[n].degree(v) + n

    def differential(atom):
        n, v = atom
        out = {(n, a): _sign(n) * c for a, c in levels[n].d_atom(v).items()}
        if n < S.top:
            for k in range(n + 2):
                for a, c in S.face_atom(n + 1, k, v).items():
                    axpy(out, {(n + 1, a): c}, _sign(k))
        return out

    window: Dict[int, List[Vec]] = {}
    for n, V in enumerate(levels):
        for i in V.degrees():
            window.setdefault(i + n, []).extend({(n, a): c for a, c in b.items()} for b in V.basis(i))
    T = DgSpace(window, degree, differential, f"tot({S.name})")
    if T.check_d_squared() is not None:
        raise ComplexError("D∘D != 0 on tot")
    return T


# ----------------------------------------------------------------------------
# Thom-Whitney


def _level_coords(V: DgSpace, v: Mapping, deg: int) -> Dict[int, Fraction]:
    return {j: c for j, c in enumerate(V.coords(v, deg)) if c}


def tw_window(S: SemicosimplicialDgvs, p_max: int, cap: str = "weight") -> Dict[int, List[Vec]]:
    """Basis (per total degree) of the capped Thom-Whitney space, in ambient atoms ``(n, v, α)``.

    Solves the matching equations ``(Id⊗δ^k) x_n = (∂_k⊗Id) x_{n-1}`` in the
    coordinates of the level windows.
    """
    levels = S.levels
    N = S.top
    forms = {n: apl.apl_basis_by_degree(n, p_max, cap) for n in range(N + 1)}
    # coface matrices in window coordinates
    fmat: Dict[Tuple[int, int, int, int], Dict[int, Fraction]] = {}
    for n in range(1, N + 1):
        for q in levels[n - 1].degrees():
            for j, b in enumerate(levels[n - 1].basis(q)):
                for k in range(n + 1):
                    img = S.face(n, k, b)
                    fmat[n, k, q, j] = _level_coords(levels[n], img, q) if img else {}
    total = set()
    for n in range(N + 1):
        for q in levels[n].degrees():
            for r in forms[n]:
                total.add(q + r)
    out: Dict[int, List[Vec]] = {}
    for D in sorted(total):
        unknowns = []
        for n in range(N + 1):
            V = levels[n]
            for q in V.degrees():
                for alpha in forms[n].get(D - q, ()):
                    for j in range(V.window[q].dim):
                        unknowns.append((n, q, j, alpha))
        cols = []
        for (n, q, j, alpha) in unknowns:
            col: Vec = {}
            if n >= 1:
                for k in range(n + 1):
                    for beta, c in apl.apl_face(k, {alpha: 1}, n).items():
                        col[(n, k, q, j, beta)] = col.get((n, k, q, j, beta), 0) + c
            if n < N:
                for k in range(n + 2):
                    for jj, c in fmat[n + 1, k, q, j].items():
                        key = (n + 1, k, q, jj, alpha)
                        v = col.get(key, 0) - c
                        if v:
                            col[key] = v
                        else:
                            col.pop(key, None)
            cols.append({kk: vv for kk, vv in col.items() if vv})
        vecs = []
        for z in nullspace(cols):
            vec: Vec = {}
            for idx, c in z.items():
                n, q, j, alpha = unknowns[idx]
                for a, cv in levels[n].basis(q)[j].items():
                    axpy(vec, {(n, a, alpha): cv}, c)
            vecs.append(vec)
        if vecs:
            out[D] = vecs
    return out


def tw_matching_defect(S: SemicosimplicialDgvs, x: Mapping) -> Vec:
    """Residual of the matching equations on an ambient element (zero iff it matches)."""
    by_level: Dict[int, Vec] = {}
    for (n, v, alpha), c in x.items():
        by_level.setdefault(n, {})[(v, alpha)] = c
    out: Vec = {}
    for n in range(1, S.top + 1):
        xn = by_level.get(n, {})
        xp = by_level.get(n - 1, {})
        for k in range(n + 1):
            for (v, alpha), c in xn.items():
                for beta, cb in apl.apl_face(k, {alpha: 1}, n).items():
                    axpy(out, {(n, k, v, beta): cb}, c)
            for (v, alpha), c in xp.items():
                for a, ca in S.face_atom(n, k, v).items():
                    axpy(out, {(n, k, a, alpha): ca}, -c)
    return out


def tw_member(S: SemicosimplicialDgvs) -> Callable[[Mapping], bool]:
    """Membership in the uncapped Thom-Whitney space (levels tested with their own ``contains``)."""

    def member(x: Mapping) -> bool:
        if tw_matching_defect(S, x):
            return False
        comps: Dict[Tuple[int, Hashable], Vec] = {}
        for (n, v, alpha), c in x.items():
            comps.setdefault((n, alpha), {})[v] = c
        return all(S.levels[n].contains(v) for (n, _), v in comps.items())

    return member


def tot_tw(S: SemicosimplicialDgvs, p_max: int, cap: str = "weight") -> DgSpace:
    """Thom-Whitney totalization, capped at form weight ``p_max``.

    ``d(v⊗α) = dv⊗α + (-1)^{|v|} v⊗dα`` and, for DGLA levels,
    ``[v⊗α, u⊗β] = (-1)^{|α||u|} [v,u]⊗αβ``.
    """
    levels = S.levels

    def degree(atom):
        n, v, alpha = atom
        return levels[n].degree(v) + len(alpha[1])

    def differential(atom):
        n, v, alpha = atom
        out = {(n, a, alpha): c for a, c in levels[n].d_atom(v).items()}
        s = _sign(levels[n].degree(v))
        for beta, c in apl.d_atom(alpha):
            axpy(out, {(n, v, beta): c}, s)
        return out

    window = tw_window(S, p_max, cap)
    name = f"TW({S.name})"
    member = tw_member(S)
    if not S.is_lie:
        return DgSpace(window, degree, differential, name, member)

    def bracket(x, y):
        n, v, alpha = x
        m, u, beta = y
        if n != m:
            return {}
        r = apl.mul_atoms(alpha, beta)
        if r is None:
            return {}
        s, gamma = r
        s *= _sign(len(alpha[1]) * levels[n].degree(u))
        return {(n, a, gamma): s * c for a, c in levels[n].bracket_atoms(v, u).items()}

    return Dgla(window, degree, differential, bracket, name, member, bracket_key=lambda a: a[0])


def tw_morphism(chi: Callable[[int, Hashable], Mapping], source: Dgla, target: Dgla, name: str = "",
                image_member=None) -> DglaMorphism:
    """Levelwise map ``f_n ⊗ Id`` between Thom-Whitney DGLAs."""

    def atom_map(atom):
        n, v, alpha = atom
        return {(n, a, alpha): c for a, c in chi(n, v).items()}

    return DglaMorphism(source, target, atom_map, name, image_member)


# ----------------------------------------------------------------------------
# nonabelian functors


def map_element(f: Callable[[Mapping], Mapping], x: NilpotentElement, target: Dgla,
                degree: Optional[int] = None) -> NilpotentElement:
    return NilpotentElement(target, x.base, {mu: f(v) for mu, v in x.terms.items()},
                            x.degree if degree is None else degree)


@dataclass
class Z1Report:
    ok: bool
    failed: Optional[int] = None
    residual: Vec = field(default_factory=dict)
    n: Optional[NilpotentElement] = None

    def __bool__(self):
        return self.ok


def _solve_twisted(L: Dgla, A: ArtinianAlgebra, twist: NilpotentElement, rhs: NilpotentElement):
    """Find ``n ∈ L^{-1}⊗m_A`` with ``dn + [twist, n] = rhs`` (one exact linear system)."""
    basis = L.basis(-1)
    unknowns = [(j, mu) for j in range(len(basis)) for mu in A.basis]
    cols = []
    for j, mu in unknowns:
        e = NilpotentElement(L, A, {mu: basis[j]}, -1)
        cols.append((e.d() + twist.bracket(e)).coefficients)
    sol = solve(cols, rhs.coefficients)
    if sol is None:
        return None
    terms: Dict = {}
    for idx, c in sol.items():
        j, mu = unknowns[idx]
        axpy(terms.setdefault(mu, {}), basis[j], c)
    return NilpotentElement(L, A, terms, -1)


def z1_sc(G: SemicosimplicialDgla, l: NilpotentElement, m: NilpotentElement) -> Z1Report:
    """Membership of ``(l, m) ∈ (𝔤_0^1 ⊗ m_A) × (𝔤_1^0 ⊗ m_A)`` in ``Z^1_sc``.

    (1) ``dl + ½[l,l] = 0``; (2) ``∂_1 l = e^m * ∂_0 l``; (3)
    ``∂_0 m • -∂_1 m • ∂_2 m = dn + [∂_2∂_0 l, n]`` for some ``n ∈ 𝔤_2^{-1}⊗m_A``.
    """
    A = l.base
    res = l.d() + l.bracket(l).scaled(Fraction(1, 2))
    if not res.is_zero():
        return Z1Report(False, 1, res.coefficients)
    if G.top < 1:
        if not m.is_zero():
            return Z1Report(False, 2, m.coefficients)
        return Z1Report(True)
    g1 = G.levels[1]
    d0l = map_element(lambda v: G.face(1, 0, v), l, g1)
    d1l = map_element(lambda v: G.face(1, 1, v), l, g1)
    diff = d1l - gauge_action(m, d0l)
    if not diff.is_zero():
        return Z1Report(False, 2, diff.coefficients)
    if G.top < 2:
        return Z1Report(True)
    g2 = G.levels[2]
    f = [map_element(lambda v, k=k: G.face(2, k, v), m, g2) for k in range(3)]
    lhs = bch(bch(f[0], -f[1]), f[2])
    twist = map_element(lambda v: G.face(2, 2, v), d0l, g2)
    if lhs.is_zero():
        return Z1Report(True, n=zero_element(g2, A, -1))
    n = _solve_twisted(g2, A, twist, lhs)
    if n is None:
        return Z1Report(False, 3, lhs.coefficients)
    return Z1Report(True, n=n)


def h1_sc_related(G: SemicosimplicialDgla, first: Tuple[NilpotentElement, NilpotentElement],
                  second: Tuple[NilpotentElement, NilpotentElement], a: NilpotentElement,
                  b: Optional[NilpotentElement] = None) -> bool:
    """Witness check of ``(l_0, m_0) ~ (l_1, m_1)`` via ``a ∈ 𝔤_0^0⊗m_A``, ``b ∈ 𝔤_1^{-1}⊗m_A``.

    ``l_1 = e^a * l_0`` and ``-m_0 • -∂_1 a • m_1 • ∂_0 a = db + [∂_0 l_0, b]``.
    """
    l0, m0 = first
    l1, m1 = second
    if gauge_action(a, l0) != l1:
        return False
    if G.top < 1:
        return True
    g1 = G.levels[1]
    d0a = map_element(lambda v: G.face(1, 0, v), a, g1)
    d1a = map_element(lambda v: G.face(1, 1, v), a, g1)
    lhs = bch(bch(bch(-m0, -d1a), m1), d0a)
    if b is None:
        b = zero_element(g1, a.base, -1)
    d0l = map_element(lambda v: G.face(1, 0, v), l0, g1)
    return lhs == b.d() + d0l.bracket(b)


def _negative_cohomology(G: SemicosimplicialDgvs) -> Optional[Tuple[int, int]]:
    for i, V in enumerate(G.levels):
        for deg, (h, _) in cohomology(V.to_complex()).items():
            if deg < 0 and h:
                return i, deg
    return None


def h1_sc_tangent(G: SemicosimplicialDgla) -> int:
    """``H^1_sc(Q[ε])`` by exact linear algebra.

    Cocycles: ``dl = 0``, ``∂_0 l - ∂_1 l = dm``, ``∂_0 m - ∂_1 m + ∂_2 m ∈ d(𝔤_2^{-1})``.
    Relation: ``(l, m) ~ (l - da, m + ∂_1 a - ∂_0 a + db)``.
    """
    bad = _negative_cohomology(G)
    if bad is not None:
        raise ValueError(f"level {bad[0]} has nonzero cohomology in negative degree {bad[1]}")
    lev = G.levels + [None, None]
    g0, g1, g2 = lev[0], lev[1], lev[2]
    top = G.top
    unknowns: List[Tuple[str, Vec]] = []
    unknowns += [("l", b) for b in g0.basis(1)]
    if top >= 1:
        unknowns += [("m", b) for b in g1.basis(0)]
    if top >= 2:
        unknowns += [("n", b) for b in g2.basis(-1)]

    def tag(t, v):
        return {(t, a): c for a, c in v.items()}

    cols = []
    for kind, b in unknowns:
        col: Vec = {}
        if kind == "l":
            axpy(col, tag("E1", g0.d(b)))
            if top >= 1:
                axpy(col, tag("E2", G.face(1, 0, b)))
                axpy(col, tag("E2", G.face(1, 1, b)), -1)
        elif kind == "m":
            axpy(col, tag("E2", g1.d(b)), -1)
            if top >= 2:
                for k in range(3):
                    axpy(col, tag("E3", G.face(2, k, b)), _sign(k))
        else:
            axpy(col, tag("E3", g2.d(b)), -1)
        cols.append(col)
    Z = Subspace()
    for z in nullspace(cols):
        proj: Vec = {}
        for idx, c in z.items():
            kind, b = unknowns[idx]
            if kind != "n":
                axpy(proj, tag(kind, b), c)
        Z.insert(proj)
    B = Subspace()
    for a in g0.basis(0):
        v = tag("l", scale(g0.d(a), -1))
        if top >= 1:
            axpy(v, tag("m", G.face(1, 1, a)))
            axpy(v, tag("m", G.face(1, 0, a)), -1)
        B.insert(v)
    if top >= 1:
        for b in g1.basis(-1):
            B.insert(tag("m", g1.d(b)))
    for v in B.basis:
        if not Z.contains(v):
            raise ComplexError("linearized relation leaves the cocycles")
    return Z.dim - B.dim


def mc_chi_membership(chi: DglaMorphism, a: NilpotentElement) -> bool:
    """Injective ``χ``: ``e^a ∈ MC_χ(A)`` iff ``e^{-a} * 0 ∈ χ(L^1)⊗m_A``."""
    if not chi.is_injective():
        raise ValueError("MC_χ membership is implemented for injective morphisms only")
    zero = zero_element(chi.target, a.base, 1)
    x = gauge_action(-a, zero)
    return all(chi.image_contains(v, 1) for v in x.terms.values())


def def_chi_equivalence(chi: DglaMorphism, a: NilpotentElement, b: NilpotentElement) -> bool:
    """First order: ``a ~ a'`` iff ``a - a' ∈ χ(L^0)``."""
    if a.base.nilpotency_order != 2:
        raise ValueError("first-order equivalence needs the dual numbers")
    diff = (a - b).component((1,))
    return chi.image_contains(diff, 0)


def def_chi_tangent(chi: DglaMorphism) -> int:
    """``dim {a ∈ M^0 : da ∈ χ(L^1)} / (χ(L^0) + d M^{-1})`` for injective ``χ``."""
    if not chi.is_injective():
        raise ValueError("injective morphism expected")
    M = chi.target
    basis = M.basis(0)
    img1 = chi.image(1)
    # kernel of M^0 -> M^1 / χ(L^1)
    cols = [img1.reduce(M.d(b)) for b in basis]
    K = Subspace()
    for z in nullspace(cols):
        v: Vec = {}
        for j, c in z.items():
            axpy(v, basis[j], c)
        K.insert(v)
    Bsp = Subspace(chi.image(0).basis)
    for b in M.basis(-1):
        Bsp.insert(M.d(b))
    for v in Bsp.basis:
        if not K.contains(v):
            raise ComplexError("χ(L^0) is not inside the cocycles")
    return K.dim - Bsp.dim


def first_order_element(L: Dgla, v: Mapping, degree: int) -> NilpotentElement:
    """``v ⊗ ε`` over the dual numbers."""
    return NilpotentElement(L, make_dual_numbers(), {(1,): v}, degree)
