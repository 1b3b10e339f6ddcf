"""Differential graded Lie algebras and their Maurer-Cartan calculus.

A :class:`Dgla` is a :class:`~dgdef.graded.DgSpace` with a bracket on atoms.
Elements of ``L ⊗ m_A`` are :class:`NilpotentElement` values, stored as
``monomial -> L-vector``; every series below (BCH, gauge action) stops once
products of monomials vanish in ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Tuple

from .coefficients import ArtinianAlgebra, Monomial
from .graded import DgSpace, cohomology
from .linalg import Subspace, Vec, axpy, scale, solve


class Dgla(DgSpace):
    """DGLA on atoms.

    ``bracket(a, b)`` returns the bracket of two atoms.  ``bracket_key`` groups
    atoms so that atoms with different keys bracket to zero; it only speeds up
    brackets of long vectors.
    """

    def __init__(self, window, degree, differential, bracket: Callable[[Hashable, Hashable], Mapping],
                 name: str = "", member=None, bracket_key: Optional[Callable[[Hashable], Hashable]] = None):
        super().__init__(window, degree, differential, name, member)
        self._bracket = bracket
        self._bkey = bracket_key
        self._bcache: Dict[Tuple[Hashable, Hashable], Vec] = {}

    def bracket_atoms(self, a, b) -> Vec:
        key = (a, b)
        r = self._bcache.get(key)
        if r is None:
            r = {k: c for k, c in self._bracket(a, b).items() if c}
            self._bcache[key] = r
        return r

    def bracket(self, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        if not u or not v:
            return out
        if self._bkey is None:
            for a, ca in u.items():
                for b, cb in v.items():
                    axpy(out, self.bracket_atoms(a, b), ca * cb)
            return out
        groups: Dict[Hashable, List] = {}
        for b, cb in v.items():
            groups.setdefault(self._bkey(b), []).append((b, cb))
        for a, ca in u.items():
            for b, cb in groups.get(self._bkey(a), ()):
                axpy(out, self.bracket_atoms(a, b), ca * cb)
        return out


def finite_dgla(degrees: Mapping[Hashable, int], brackets: Mapping[Tuple[Hashable, Hashable], Mapping] = (),
                differential: Mapping[Hashable, Mapping] = (), name: str = "") -> Dgla:
    """Finite-dimensional DGLA from structure constants on named basis elements.

    Brackets not listed are filled in by graded skewsymmetry from the
    reversed pair, otherwise zero.
    """
    degrees = dict(degrees)
    table = {k: {a: Fraction(c) for a, c in v.items() if c} for k, v in dict(brackets).items()}
    dtab = {k: {a: Fraction(c) for a, c in v.items() if c} for k, v in dict(differential).items()}

    def br(a, b):
        if (a, b) in table:
            return table[(a, b)]
        if (b, a) in table:
            s = -1 if (degrees[a] * degrees[b]) % 2 == 0 else 1
            return scale(table[(b, a)], s)
        return {}

    window: Dict[int, List[Vec]] = {}
    for lab, i in degrees.items():
        window.setdefault(i, []).append({lab: Fraction(1)})
    return Dgla(window, degrees.__getitem__, lambda a: dtab.get(a, {}), br, name)


# ----------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    ok: bool
    law: str = ""
    witness: Tuple = ()
    lhs: Vec = field(default_factory=dict)
    rhs: Vec = field(default_factory=dict)
    checked: int = 0

    def __bool__(self):
        return self.ok


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def check_dgla_axioms(L: Dgla, closure: bool = False) -> AxiomReport:
    """Exhaustive check of skewsymmetry, Jacobi and Leibniz on window basis elements.

    With ``closure=True`` also require brackets of window elements to stay in
    the ambient object (``L.contains``).
    """
    basis = [(i, b) for i in L.degrees() for b in L.basis(i)]
    checked = 0
    if L.check_d_squared() is not None:
        i, b = L.check_d_squared()
        return AxiomReport(False, "d∘d = 0", (b,), L.d(L.d(b)), {}, checked)
    pair = {}
    for x, (i, a) in enumerate(basis):
        for y, (j, b) in enumerate(basis):
            pair[x, y] = L.bracket(a, b)
    for x, (i, a) in enumerate(basis):
        for y, (j, b) in enumerate(basis):
            checked += 1
            lhs, rhs = pair[x, y], scale(pair[y, x], -_sign(i * j))
            if lhs != rhs:
                return AxiomReport(False, "graded skewsymmetry", (a, b), lhs, rhs, checked)
            lhs = L.d(pair[x, y])
            rhs = L.bracket(L.d(a), b)
            axpy(rhs, L.bracket(a, L.d(b)), _sign(i))
            if lhs != rhs:
                return AxiomReport(False, "graded Leibniz", (a, b), lhs, rhs, checked)
            if closure and not L.contains(pair[x, y]):
                return AxiomReport(False, "bracket closure", (a, b), pair[x, y], {}, checked)
    # once skewsymmetry holds the Jacobiator is graded-alternating, so ordered triples suffice
    row: Dict[Tuple[int, Hashable], Vec] = {}

    def left(x, v):
        out: Vec = {}
        for p, cp in v.items():
            r = row.get((x, p))
            if r is None:
                r = row[x, p] = L.bracket(basis[x][1], {p: 1})
            axpy(out, r, cp)
        return out

    for x, (i, a) in enumerate(basis):
        for y in range(x, len(basis)):
            j, b = basis[y]
            for z in range(y, len(basis)):
                k, c = basis[z]
                checked += 1
                if not (pair[y, z] or pair[x, y] or pair[x, z]):
                    continue
                lhs = left(x, pair[y, z])
                rhs = scale(left(z, pair[x, y]), -_sign((i + j) * k))
                axpy(rhs, left(y, pair[x, z]), _sign(i * j))
                if lhs != rhs:
                    return AxiomReport(False, "graded Jacobi", (a, b, c), lhs, rhs, checked)
    return AxiomReport(True, checked=checked)


# ----------------------------------------------------------------------------
# morphisms


class DglaMorphism:
    """Degree-preserving map of DGLAs given on atoms."""

    def __init__(self, source: Dgla, target: Dgla, atom_map: Callable[[Hashable], Mapping], name: str = "",
                 image_member: Optional[Callable[[Mapping], bool]] = None):
        self.source = source
        self.target = target
        self._map = atom_map
        self._cache: Dict[Hashable, Vec] = {}
        self.name = name
        self._image_member = image_member
        self._image: Dict[int, Subspace] = {}

    def atom(self, a) -> Vec:
        r = self._cache.get(a)
        if r is None:
            r = {k: c for k, c in self._map(a).items() if c}
            self._cache[a] = r
        return r

    def __call__(self, v: Mapping) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            axpy(out, self.atom(a), c)
        return out

    def image(self, degree: int) -> Subspace:
        if degree not in self._image:
            self._image[degree] = Subspace(self(b) for b in self.source.basis(degree))
        return self._image[degree]

    def image_contains(self, v: Mapping, degree: int) -> bool:
        if self._image_member is not None:
            return self._image_member(v)
        return self.image(degree).contains(v)

    def is_injective(self) -> bool:
        return all(self.image(i).dim == len(self.source.basis(i)) for i in self.source.degrees())

    def check(self) -> Optional[Tuple[str, Tuple]]:
        """First failure of chain-map / bracket compatibility on window elements."""
        basis = [b for i in self.source.degrees() for b in self.source.basis(i)]
        for b in basis:
            if self(self.source.d(b)) != self.target.d(self(b)):
                return "differential", (b,)
        for a in basis:
            for b in basis:
                if self(self.source.bracket(a, b)) != self.target.bracket(self(a), self(b)):
                    return "bracket", (a, b)
        return None


def identity_morphism(L: Dgla) -> DglaMorphism:
    return DglaMorphism(L, L, lambda a: {a: Fraction(1)}, "id")


def zero_morphism(L: Dgla, M: Dgla) -> DglaMorphism:
    return DglaMorphism(L, M, lambda a: {}, "0")


# ----------------------------------------------------------------------------
# L ⊗ B and L ⊗ m_A


def tensor_with_algebra(L: Dgla, B: ArtinianAlgebra) -> Dgla:
    """``L ⊗ B`` with ``[l⊗a, m⊗b] = [l,m]⊗ab`` and ``d(l⊗a) = dl⊗a``."""
    monos = [B.unit] + list(B.basis)

    def degree(atom):
        return L.degree(atom[0])

    def differential(atom):
        l, mu = atom
        return {(k, mu): c for k, c in L.d_atom(l).items()}

    def bracket(x, y):
        nu = B.monomial_product(x[1], y[1])
        if nu is None:
            return {}
        return {(k, nu): c for k, c in L.bracket_atoms(x[0], y[0]).items()}

    window = {i: [{(a, mu): c for a, c in b.items()} for b in L.basis(i) for mu in monos] for i in L.degrees()}
    key = None if L._bkey is None else (lambda atom: L._bkey(atom[0]))
    return Dgla(window, degree, differential, bracket, f"{L.name}⊗{B}", bracket_key=key)


@dataclass(frozen=True, eq=False)
class NilpotentElement:
    algebra: Dgla
    base: ArtinianAlgebra
    terms: Mapping[Monomial, Mapping]
    degree: int

    def __post_init__(self):
        clean = {}
        for mu, v in self.terms.items():
            mu = tuple(mu)
            if mu == self.base.unit or mu not in self.base.staircase:
                raise ValueError(f"monomial {mu!r} is not in the maximal ideal")
            v = {a: Fraction(c) for a, c in v.items() if c}
            for a in v:
                if self.algebra.degree(a) != self.degree:
                    raise ValueError(f"atom {a!r} does not have degree {self.degree}")
            if v:
                clean[mu] = v
        object.__setattr__(self, "terms", clean)

    @property
    def coefficients(self) -> Dict[Tuple[Hashable, Monomial], Fraction]:
        return {(a, mu): c for mu, v in self.terms.items() for a, c in v.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NilpotentElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, tuple(sorted((m, tuple(sorted(v.items()))) for m, v in self.terms.items()))))

    def _new(self, terms, degree=None):
        return NilpotentElement(self.algebra, self.base, terms, self.degree if degree is None else degree)

    def __add__(self, other: "NilpotentElement"):
        out = {mu: dict(v) for mu, v in self.terms.items()}
        for mu, v in other.terms.items():
            axpy(out.setdefault(mu, {}), v)
        return self._new(out, self.degree if self.terms else other.degree)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, a) -> "NilpotentElement":
        return self._new({mu: scale(v, a) for mu, v in self.terms.items()})

    def component(self, mu: Monomial) -> Vec:
        return dict(self.terms.get(tuple(mu), {}))

    def d(self) -> "NilpotentElement":
        return self._new({mu: self.algebra.d(v) for mu, v in self.terms.items()}, self.degree + 1)

    def bracket(self, other: "NilpotentElement") -> "NilpotentElement":
        out: Dict[Monomial, Vec] = {}
        for mu, u in self.terms.items():
            for nu, v in other.terms.items():
                rho = self.base.monomial_product(mu, nu)
                if rho is None:
                    continue
                axpy(out.setdefault(rho, {}), self.algebra.bracket(u, v))
        return self._new(out, self.degree + other.degree)

    def __repr__(self):
        return f"NilpotentElement(deg={self.degree}, {self.coefficients})"


def nilpotent(L: Dgla, A: ArtinianAlgebra, terms: Mapping[Monomial, Mapping], degree: int) -> NilpotentElement:
    return NilpotentElement(L, A, terms, degree)


def zero_element(L: Dgla, A: ArtinianAlgebra, degree: int) -> NilpotentElement:
    return NilpotentElement(L, A, {}, degree)


def mc_residual(x: NilpotentElement) -> NilpotentElement:
    """``dx + ½[x,x]``; zero exactly when ``x`` is Maurer-Cartan."""
    if x.degree != 1:
        raise ValueError("Maurer-Cartan residual needs a degree 1 element")
    return x.d() + x.bracket(x).scaled(Fraction(1, 2))


def is_maurer_cartan(x: NilpotentElement) -> bool:
    return mc_residual(x).is_zero()


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / Fraction(n + 1)


def _compositions(n: int, parts: int):
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def bch_terms(a: NilpotentElement, b: NilpotentElement) -> List[NilpotentElement]:
    """Homogeneous pieces ``Z_1, Z_2, ...`` of ``log(e^a e^b)``.

    Recursion: ``(n+1) Z_{n+1} = ½[a-b, Z_n] + Σ_{p≥1,2p≤n} B_{2p}/(2p)!
    Σ_{k_1+…+k_{2p}=n} [Z_{k_1},[…,[Z_{k_{2p}}, a+b]…]]``.  ``Z_n`` lies in
    ``L ⊗ m_A^n``, so the list stops before the nilpotency order.
    """
    if a.degree != 0 or b.degree != 0:
        raise ValueError("BCH product is defined on degree 0 elements")
    N = a.base.nilpotency_order
    s = a + b
    diff = a - b
    Z = [None, s]
    for n in range(1, N - 1):
        acc = diff.bracket(Z[n]).scaled(Fraction(1, 2))
        for p in range(1, n // 2 + 1):
            k2p = bernoulli(2 * p) / factorial(2 * p)
            if not k2p:
                continue
            for ks in _compositions(n, 2 * p):
                t = s
                for k in reversed(ks):
                    t = Z[k].bracket(t)
                    if t.is_zero():
                        break
                acc = acc + t.scaled(k2p)
        Z.append(acc.scaled(Fraction(1, n + 1)))
    return Z[1:]


def bch(a: NilpotentElement, b: NilpotentElement) -> NilpotentElement:
    """Baker-Campbell-Hausdorff product ``a • b`` in ``L^0 ⊗ m_A``."""
    out = zero_element(a.algebra, a.base, 0)
    for z in bch_terms(a, b):
        out = out + z
    return out


def gauge_action(a: NilpotentElement, x: NilpotentElement) -> NilpotentElement:
    """``e^a * x = x + Σ_{n≥0} [a,-]^n/(n+1)! ([a,x] - da)``."""
    if a.degree != 0 or x.degree != 1:
        raise ValueError("gauge action needs a in degree 0 and x in degree 1")
    term = a.bracket(x) - a.d()
    out = x
    n = 0
    while not term.is_zero():
        out = out + term.scaled(Fraction(1, factorial(n + 1)))
        n += 1
        term = a.bracket(term)
        if n > a.base.nilpotency_order + 1:
            raise RuntimeError("gauge series failed to terminate")
    return out


def series_length(a: NilpotentElement, x: NilpotentElement) -> int:
    """Number of nonzero terms in the gauge series (used to test termination)."""
    term = a.bracket(x) - a.d()
    n = 0
    while not term.is_zero():
        n += 1
        term = a.bracket(term)
    return n


# ----------------------------------------------------------------------------
# first and second order


def tangent_def(L: Dgla) -> int:
    """``Def_L(Q[ε]) = H^1(L)``."""
    return L.cohomology_dims().get(1, 0)


def _dual_coefficient(x: NilpotentElement) -> Vec:
    if x.base.nilpotency_order != 2 or len(x.base.generators) != 1:
        raise ValueError("first-order comparison needs the dual numbers")
    return x.component((1,))


def is_first_order_gauge_equivalent(x: NilpotentElement, y: NilpotentElement) -> bool:
    """Over ``Q[ε]``: ``x ~ y`` iff ``x - y ∈ d(L^0)``."""
    u, v = _dual_coefficient(x), _dual_coefficient(y)
    diff = dict(u)
    axpy(diff, v, -1)
    L = x.algebra
    return Subspace(L.d(b) for b in L.basis(0)).contains(diff)


@dataclass
class LiftResult:
    lifted: Optional[NilpotentElement] = None
    order: Optional[int] = None
    defect: Vec = field(default_factory=dict)
    h2_class: Optional[List[Fraction]] = None

    @property
    def ok(self) -> bool:
        return self.lifted is not None


def h2_class(L: Dgla, v: Mapping) -> Optional[List[Fraction]]:
    """Coordinates of the class of a 2-cocycle in the window's H^2 basis (None if outside the window)."""
    if not L.in_window(v):
        return None
    C = L.to_complex()
    H = cohomology(C)
    reps = H.get(2, (0, []))[1]
    coords = L.coords(v, 2)
    vec = {r: c for r, c in enumerate(coords) if c}
    cols = [b for b in (C.d(1).columns if C.space.dim(1) else [])] + list(reps)
    sol = solve(cols, vec)
    if sol is None:
        raise ValueError("not a cocycle")
    k = len(cols) - len(reps)
    return [sol.get(k + r, Fraction(0)) for r in range(len(reps))]


def lift_order_by_order(L: Dgla, x1: Mapping, order: int, solve_space: Optional[DgSpace] = None) -> LiftResult:
    """Extend a closed ``x1 ∈ L^1`` to a Maurer-Cartan element over ``Q[t]/(t^order)``.

    At order ``k`` solve ``d x_k = -½ Σ_{i+j=k} [x_i, x_j]`` inside the degree 1
    window of ``solve_space`` (default ``L``); if the right side is not exact
    there, return it as the obstruction together with its H^2 class.
    """
    from .coefficients import make_truncated_poly

    A = make_truncated_poly(order)
    space = solve_space or L
    if L.d(x1):
        raise ValueError("first-order datum is not closed")
    xs: List[Vec] = [{}, dict(x1)]
    cols = [space.d(b) for b in space.basis(1)]
    basis1 = space.basis(1)
    for k in range(2, order):
        rhs: Vec = {}
        for i in range(1, k):
            axpy(rhs, L.bracket(xs[i], xs[k - i]), Fraction(-1, 2))
        sol = solve(cols, rhs)
        if sol is None:
            return LiftResult(order=k, defect=rhs, h2_class=h2_class(L, rhs))
        xk: Vec = {}
        for j, c in sol.items():
            axpy(xk, basis1[j], c)
        xs.append(xk)
    terms = {(k,): xs[k] for k in range(1, order)}
    return LiftResult(lifted=NilpotentElement(L, A, terms, 1))
