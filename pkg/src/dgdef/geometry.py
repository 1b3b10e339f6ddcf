"""Standard covers of P^1 and P^2, windowed vector fields and Čech builders.

Functions on ``U_I = ∩_{i∈I} {X_i ≠ 0}`` are Laurent monomials ``X^f`` with
``Σ f = 0`` and negative exponents only at indices of ``I``; they do not depend
on the chart.  A vector field on ``U_I`` is written in the chart of record
``r = min I`` with coordinates ``x_a = X_a/X_r`` (``a ≠ r``): the atom
``(a, f)`` stands for ``X^f ∂/∂x_a``.

Windows are pole-order bounds.  At window ``N`` a field on ``U_I`` belongs to the
window when it lifts to ``Σ_b G_b ∂/∂X_b`` with every ``G_b`` of degree 1 whose
poles along ``X_j`` (``j ∈ I``) have order at most ``N``.  These truncations
keep the Čech complexes of ``Θ`` and ``O(k)`` exact enough to give the right
cohomology; a componentwise Laurent box does not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .dgla import Dgla, DglaMorphism
from .linalg import Subspace, Vec, axpy, nullspace
from .simplicial import SemicosimplicialDgla

Exp = Tuple[int, ...]


class UnstableWindow(ValueError):
    """A reported number changed between window ``w`` and ``w + 2``."""


class UnsupportedInput(ValueError):
    pass


def _e(n: int, i: int) -> Exp:
    return tuple(1 if j == i else 0 for j in range(n + 1))


def _add(*vs) -> Exp:
    return tuple(map(sum, zip(*vs)))


def _lin(f: Exp, terms) -> Exp:
    out = list(f)
    for c, v in terms:
        for j, x in enumerate(v):
            out[j] += c * x
    return tuple(out)


# ----------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class Chart:
    index: int
    n: int

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return tuple(f"x{a}_{self.index}" for a in range(self.n + 1) if a != self.index)

    def transition(self, j: int) -> Dict[int, Exp]:
        """Coordinates of this chart as Laurent monomials on ``U_i ∩ U_j`` (homogeneous exponents)."""
        i = self.index
        return {a: _lin(_e(self.n, a), [(-1, _e(self.n, i))]) for a in range(self.n + 1) if a != i}

    def in_chart(self, f: Exp, j: int) -> Exp:
        """Exponents of ``X^f`` in the coordinates of chart ``j`` (dropping ``X_j``)."""
        return tuple(x for a, x in enumerate(f) if a != j)


def standard_cover(n: int) -> List[Chart]:
    if n not in (1, 2):
        raise UnsupportedInput(f"unsupported variety P{n}")
    charts = [Chart(i, n) for i in range(n + 1)]
    if not transitions_consistent(charts):
        raise AssertionError("transition maps do not compose")
    return charts


def transitions_consistent(charts: Sequence[Chart]) -> bool:
    """Composing ``i -> j -> k`` agrees with ``i -> k`` on coordinate generators."""
    n = charts[0].n
    for ci in charts:
        for cj in charts:
            for ck in charts:
                i, j, k = ci.index, cj.index, ck.index
                # x^{(i)}_a written through chart j: (X_a/X_j)/(X_i/X_j) = X^{e_a - e_i}
                for a, f in ci.transition(j).items():
                    via = _lin(_lin(_e(n, a), [(-1, _e(n, j))]), [(-1, _lin(_e(n, i), [(-1, _e(n, j))]))])
                    if via != f or ci.transition(k)[a] != f:
                        return False
    return True


def multi_indices(n: int, level: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(n + 1), level + 1))


def is_regular(f: Exp, I: Sequence[int]) -> bool:
    return all(x >= 0 for j, x in enumerate(f) if j not in I)


# ----------------------------------------------------------------------------
# vector fields


def apply_atom(r: int, atom: Tuple[int, Exp], h: Exp) -> Optional[Tuple[int, Exp]]:
    """``X^f ∂/∂x_a (X^h)`` in chart ``r``."""
    a, f = atom
    if not h[a]:
        return None
    n = len(h) - 1
    return h[a], _lin(_add(f, h), [(-1, _e(n, a)), (1, _e(n, r))])


@lru_cache(maxsize=None)
def field_bracket(r: int, x: Tuple[int, Exp], y: Tuple[int, Exp]) -> Tuple[Tuple[Tuple[int, Exp], int], ...]:
    """``[X^f ∂_a, X^g ∂_b] = g_a X^{f+g-e_a+e_r} ∂_b - f_b X^{f+g-e_b+e_r} ∂_a``."""
    (a, f), (b, g) = x, y
    out: Dict = {}
    t = apply_atom(r, x, g)
    if t is not None:
        c, h = t
        out[(b, h)] = out.get((b, h), 0) + c
    t = apply_atom(r, y, f)
    if t is not None:
        c, h = t
        out[(a, h)] = out.get((a, h), 0) - c
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def apply_field(r: int, theta: Mapping, poly: Mapping) -> Vec:
    """``θ(p)`` for a Laurent polynomial ``p`` (homogeneous degree-0 exponents)."""
    out: Vec = {}
    for atom, c in theta.items():
        for h, ch in poly.items():
            t = apply_atom(r, atom, h)
            if t is not None:
                k, e = t
                axpy(out, {e: k}, c * ch)
    return out


@lru_cache(maxsize=None)
def convert_atom(s: int, r: int, atom: Tuple[int, Exp]) -> Tuple[Tuple[Tuple[int, Exp], int], ...]:
    """Rewrite ``X^f ∂/∂x_a`` from chart ``s`` to chart ``r``."""
    if s == r:
        return ((atom, 1),)
    a, f = atom
    n = len(f) - 1
    out = []
    for b in range(n + 1):
        if b == r:
            continue
        c = (1 if b == a else 0) - (1 if r == a else 0)
        if c:
            out.append(((b, _lin(f, [(1, _e(n, b)), (-1, _e(n, r)), (-1, _e(n, a)), (1, _e(n, s))])), c))
    return tuple(out)


def convert(s: int, r: int, v: Mapping) -> Vec:
    out: Vec = {}
    for atom, c in v.items():
        for b, k in convert_atom(s, r, atom):
            axpy(out, {b: k}, c)
    return out


def _degree_one_monomials(n: int, I: Sequence[int], N: int, total: int = 1):
    lower = [(-N if j in I else 0) for j in range(n + 1)]
    slack = total - sum(lower)

    def rec(j, left):
        if j == n:
            yield (lower[n] + left,)
            return
        for x in range(left + 1):
            for rest in rec(j + 1, left - x):
                yield (lower[j] + x,) + rest

    if slack < 0:
        return
    yield from rec(0, slack)


def homogeneous_field(n: int, r: int, m: Exp, b: int) -> Vec:
    """Chart-``r`` form of ``X^m ∂/∂X_b`` (``Σ m = 1``)."""
    out: Vec = {}
    for a in range(n + 1):
        if a == r:
            continue
        if a == b:
            axpy(out, {(a, _lin(m, [(-1, _e(n, r))])): 1})
        if r == b:
            axpy(out, {(a, _lin(m, [(1, _e(n, a)), (-2, _e(n, r))])): -1})
    return out


@dataclass
class WindowedSections:
    multi_index: Tuple[int, ...]
    window: int
    basis: List[Vec]
    chart: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def theta_sections(charts: Sequence[Chart], multi_index: Sequence[int], w: int) -> WindowedSections:
    """Window ``w`` of ``Θ(U_I)`` in the coordinates of chart ``min I``."""
    if w < 0:
        raise ValueError("window must be nonnegative")
    n = charts[0].n
    I = tuple(sorted(multi_index))
    r = I[0]
    sub = Subspace()
    for m in _degree_one_monomials(n, I, w):
        for b in range(n + 1):
            v = homogeneous_field(n, r, m, b)
            if v:
                sub.insert(v)
    return WindowedSections(I, w, sub.sorted_copy().basis, r)


# ----------------------------------------------------------------------------
# subschemes


@dataclass(frozen=True)
class SubschemeIdeal:
    """Hypersurface ``V(F)``; ``F`` maps exponent vectors to coefficients."""

    n: int
    F: Tuple[Tuple[Exp, Fraction], ...]
    text: str = ""
    coordinate_change: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def degree(self) -> int:
        return sum(self.F[0][0])

    @property
    def polynomial(self) -> Dict[Exp, Fraction]:
        return dict(self.F)

    def dehomogenize(self, r: int) -> Dict[Exp, Fraction]:
        """``f_r = F / X_r^d`` as a degree-0 Laurent polynomial."""
        d = self.degree
        return {_lin(e, [(-d, _e(self.n, r))]): c for e, c in self.F}

    def meets_every_chart(self) -> bool:
        return not any(all(e[j] > 0 for e, _ in self.F) for j in range(self.n + 1))


_VARS = ("X0", "X1", "X2")


def _to_poly(expr, n: int) -> Dict[Exp, Fraction]:
    import sympy

    gens = sympy.symbols(_VARS[: n + 1])
    P = sympy.Poly(sympy.expand(expr), *gens)
    out = {}
    for mono, c in P.terms():
        c = sympy.Rational(c)
        out[tuple(int(x) for x in mono)] = Fraction(int(c.p), int(c.q))
    return out


def _changes(n: int):
    # invertible integer matrices with no zero entries (Pascal-type), deterministic order
    for shift in range(1, 8):
        M = [[1] * (n + 1) for _ in range(n + 1)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                M[i][j] = M[i - 1][j] + M[i][j - 1] + (shift - 1 if i == j else 0)
        yield tuple(tuple(row) for row in M)


def parse_subscheme(text: str, n: int) -> SubschemeIdeal:
    """Parse a homogeneous polynomial in ``X0..Xn`` with rational coefficients.

    When some ``X_j`` divides ``F`` (so ``Z`` misses chart ``j``) a fixed
    generic linear change of coordinates is applied and recorded.
    """
    import sympy

    if n not in (1, 2):
        raise UnsupportedInput(f"unsupported variety P{n}")
    allowed = set(_VARS[: n + 1])
    try:
        expr = sympy.sympify(text, locals={v: sympy.Symbol(v) for v in _VARS})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise UnsupportedInput(f"cannot parse subscheme {text!r}") from exc
    extra = {str(s) for s in expr.free_symbols} - allowed
    if extra:
        raise UnsupportedInput(f"subscheme uses unknown variables {sorted(extra)}")
    try:
        poly = _to_poly(expr, n)
    except sympy.PolynomialError as exc:
        raise UnsupportedInput(f"subscheme {text!r} is not a polynomial") from exc
    degs = {sum(e) for e in poly}
    if not poly or len(degs) != 1 or 0 in degs:
        raise UnsupportedInput(f"subscheme {text!r} is not a nonconstant homogeneous polynomial")
    Z = SubschemeIdeal(n, tuple(sorted(poly.items())), text)
    if Z.meets_every_chart():
        return Z
    gens = sympy.symbols(_VARS[: n + 1])
    for M in _changes(n):
        sub = {gens[i]: sum(M[i][k] * gens[k] for k in range(n + 1)) for i in range(n + 1)}
        poly2 = _to_poly(expr.subs(sub, simultaneous=True), n)
        Z2 = SubschemeIdeal(n, tuple(sorted(poly2.items())), text, M)
        if Z2.meets_every_chart():
            return Z2
    raise UnsupportedInput(f"no coordinate change makes {text!r} meet every chart")


def _chart_poly(p: Mapping[Exp, Fraction], r: int) -> Dict[Exp, Fraction]:
    return {tuple(x for j, x in enumerate(e) if j != r): c for e, c in p.items()}


def poly_remainder(p: Mapping[Exp, Fraction], f: Mapping[Exp, Fraction]) -> Dict[Exp, Fraction]:
    """Remainder of ``p`` on division by ``f`` (lex order); zero iff ``f | p``."""
    lt = max(f)
    lc = f[lt]
    p = dict(p)
    rem: Dict[Exp, Fraction] = {}
    while p:
        m = max(p)
        c = p[m]
        if all(x >= y for x, y in zip(m, lt)):
            q = tuple(x - y for x, y in zip(m, lt))
            k = c / lc
            for e, ce in f.items():
                t = tuple(x + y for x, y in zip(e, q))
                v = p.get(t, 0) - k * ce
                if v:
                    p[t] = v
                else:
                    p.pop(t, None)
        else:
            rem[m] = c
            del p[m]
    return rem


class LogTest:
    """Decides ``θ(f_r) ∈ f_r · O(U_I)`` for fields on ``U_I``."""

    def __init__(self, Z: SubschemeIdeal, I: Sequence[int]):
        self.Z = Z
        self.I = tuple(sorted(I))
        self.r = self.I[0]
        self.f = Z.dehomogenize(self.r)
        units = [j for j in self.I if j != self.r]
        fc = _chart_poly(self.f, self.r)
        # strip monomial factors in the inverted variables; they are units on U_I
        pos = [j for j in range(Z.n + 1) if j != self.r]
        low = [min(e[k] for e in fc) if pos[k] in units else 0 for k in range(Z.n)]
        self.fc = {tuple(x - y for x, y in zip(e, low)): c for e, c in fc.items()}

    def residue(self, theta: Mapping, shift: Optional[Exp] = None) -> Dict[Exp, Fraction]:
        g = _chart_poly(apply_field(self.r, theta, self.f), self.r)
        if not g:
            return {}
        if shift is None:
            shift = tuple(max(0, -min(e[k] for e in g)) for k in range(self.Z.n))
        g = {tuple(x + s for x, s in zip(e, shift)): c for e, c in g.items()}
        if any(x < 0 for e in g for x in e):
            raise ValueError("shift does not clear denominators")
        return poly_remainder(g, self.fc)

    def __call__(self, theta: Mapping) -> bool:
        return not self.residue(theta)


def log_theta_sections(charts: Sequence[Chart], multi_index: Sequence[int], Z: SubschemeIdeal,
                       w: int) -> WindowedSections:
    """Window ``w`` of ``Θ(-log Z)(U_I)``: the fields of the ``Θ`` window with ``θ(f) ∈ (f)``."""
    T = theta_sections(charts, multi_index, w)
    test = LogTest(Z, T.multi_index)
    n = Z.n
    shift = tuple(w + 1 for _ in range(n))
    cols = [test.residue(b, shift) for b in T.basis]
    sub = Subspace()
    for z in nullspace(cols):
        v: Vec = {}
        for j, c in z.items():
            axpy(v, T.basis[j], c)
        sub.insert(v)
    basis = sub.sorted_copy().basis
    for v in basis:
        if not test(v):
            raise AssertionError("log window contains a non-logarithmic field")
    return WindowedSections(T.multi_index, w, basis, T.chart)


# ----------------------------------------------------------------------------
# sheaves as section builders


class Sheaf:
    """Section builder: window bases, restrictions, brackets and membership on ``U_I``."""

    name = "F"
    abelian = False

    def __init__(self, n: int):
        self.n = n
        self.charts = standard_cover(n)

    def window(self, I: Tuple[int, ...], w: int) -> List[Vec]:
        raise NotImplementedError

    def restrict_atom(self, J: Tuple[int, ...], I: Tuple[int, ...], atom) -> Vec:
        raise NotImplementedError

    def bracket_atoms(self, I: Tuple[int, ...], x, y) -> Vec:
        return {}

    def member(self, I: Tuple[int, ...], v: Mapping) -> bool:
        raise NotImplementedError


class ThetaSheaf(Sheaf):
    name = "Θ"

    def window(self, I, w):
        return theta_sections(self.charts, I, w).basis

    def restrict_atom(self, J, I, atom):
        return dict(convert_atom(J[0], I[0], atom))

    def bracket_atoms(self, I, x, y):
        return dict(field_bracket(I[0], x, y))

    def member(self, I, v):
        return all(is_regular(f, I) and a != I[0] for a, f in v)


class LogThetaSheaf(ThetaSheaf):
    def __init__(self, Z: SubschemeIdeal):
        super().__init__(Z.n)
        self.Z = Z
        self.name = f"Θ(-log {Z.text or 'Z'})"
        self._tests: Dict[Tuple[int, ...], LogTest] = {}

    def test(self, I) -> LogTest:
        if I not in self._tests:
            self._tests[I] = LogTest(self.Z, I)
        return self._tests[I]

    def window(self, I, w):
        return log_theta_sections(self.charts, I, self.Z, w).basis

    def member(self, I, v):
        return super().member(I, v) and self.test(I)(v)


class LineBundleSheaf(Sheaf):
    """``O(k)``: sections on ``U_I`` are Laurent polynomials of degree ``k`` with poles along ``I``."""

    abelian = True

    def __init__(self, n: int, k: int):
        super().__init__(n)
        self.k = k
        self.name = f"O({k})"

    def window(self, I, w):
        return [{m: Fraction(1)} for m in sorted(_degree_one_monomials(self.n, I, w, self.k))]

    def restrict_atom(self, J, I, atom):
        return {atom: Fraction(1)}

    def member(self, I, v):
        return all(is_regular(m, I) and sum(m) == self.k for m in v)


def line_bundle_sections(n: int, k: int, multi_index: Sequence[int], w: int) -> List[Vec]:
    return LineBundleSheaf(n, k).window(tuple(sorted(multi_index)), w)


# ----------------------------------------------------------------------------
# Čech objects


def overlap_algebra(sheaf: Sheaf, I: Tuple[int, ...], w: int) -> Dgla:
    """Sections over one ``U_I`` as a Lie algebra in degree 0 (atoms are the sheaf's own)."""
    return Dgla({0: sheaf.window(I, w)}, lambda a: 0, None, lambda x, y: sheaf.bracket_atoms(I, x, y),
                f"{sheaf.name}(U{''.join(map(str, I))})", member=lambda v: sheaf.member(I, v))


def cech_level(sheaf: Sheaf, level: int, w: int) -> Dgla:
    Is = multi_indices(sheaf.n, level)
    window = [{(I, a): c for a, c in b.items()} for I in Is for b in sheaf.window(I, w)]

    def bracket(x, y):
        if x[0] != y[0]:
            return {}
        I = x[0]
        return {(I, a): c for a, c in sheaf.bracket_atoms(I, x[1], y[1]).items()}

    def member(v):
        parts: Dict = {}
        for (I, a), c in v.items():
            if len(I) != level + 1:
                return False
            parts.setdefault(I, {})[a] = c
        return all(sheaf.member(I, p) for I, p in parts.items())

    return Dgla({0: window}, lambda a: 0, None, bracket, f"C^{level}({sheaf.name})", member,
                bracket_key=lambda a: a[0])


def cech_lie(sheaf: Sheaf, w: int) -> SemicosimplicialDgla:
    """``∏_{|I|=h+1} F(U_I)`` with ``∂_k(x)_{i_0..i_h} = x_{i_0..î_k..i_h}|``."""
    n = sheaf.n
    levels = [cech_level(sheaf, h, w) for h in range(n + 1)]
    sup = {h: multi_indices(n, h) for h in range(n + 1)}

    def coface(h, k, atom):
        J, a = atom
        out: Vec = {}
        for I in sup[h]:
            if I[:k] + I[k + 1:] == J:
                for b, c in sheaf.restrict_atom(J, I, a).items():
                    axpy(out, {(I, b): c})
        return out

    return SemicosimplicialDgla(levels, coface, f"Čech({sheaf.name})")


def chi_morphism(log: SemicosimplicialDgla, theta: SemicosimplicialDgla, level: int) -> DglaMorphism:
    """Inclusion ``Θ(-log Z) ↪ Θ`` on one Čech level (identity on atoms)."""
    return DglaMorphism(log.levels[level], theta.levels[level], lambda a: {a: Fraction(1)}, f"χ_{level}",
                        image_member=log.levels[level].contains)


@dataclass
class CoverGeometry:
    """Cover of ``P^n`` with a hypersurface and a window."""

    n: int
    Z: Optional[SubschemeIdeal]
    window: int
    charts: List[Chart] = field(default_factory=list)

    def __post_init__(self):
        if not self.charts:
            self.charts = standard_cover(self.n)

    @property
    def theta(self) -> ThetaSheaf:
        return ThetaSheaf(self.n)

    @property
    def log_theta(self) -> LogThetaSheaf:
        if self.Z is None:
            raise ValueError("no subscheme")
        return LogThetaSheaf(self.Z)


def chi_bisemicosimplicial(Z: SubschemeIdeal, w: int):
    """``χ^▲``: column 0 is Čech(Θ(-log Z)), column 1 is Čech(Θ); ``∂^H_0`` is the inclusion, ``∂^H_1 = 0``."""
    from .bisimplicial import BisemicosimplicialDgla

    log = cech_lie(LogThetaSheaf(Z), w)
    theta = cech_lie(ThetaSheaf(Z.n), w)
    cols = [log, theta]
    grid = {(i, j): cols[i].levels[j] for i in range(2) for j in range(Z.n + 1)}

    def hface(i, j, s, atom):
        return {atom: Fraction(1)} if s == 0 else {}

    def vface(i, j, k, atom):
        return cols[i].face_atom(j, k, atom)

    return BisemicosimplicialDgla(grid, hface, vface, f"χ^▲({Z.text})")
