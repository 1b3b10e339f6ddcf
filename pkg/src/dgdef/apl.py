"""Polynomial differential forms on standard simplices.

On the ``n``-simplex we eliminate ``t_0 = 1 - Σ t_i`` and ``dt_0 = -Σ dt_i``, so
a form is a sparse dict over atoms ``(exps, dts)`` meaning
``t_1^e_1 … t_n^e_n dt_{i_1} ∧ … ∧ dt_{i_k}`` with ``i_1 < … < i_k``.

The *weight* of an atom is polynomial degree plus form degree.  ``d`` and the
face maps never raise it, so capping the weight gives finite subcomplexes
whose cohomology is still ``Q`` in degree 0.  Capping only the polynomial
degree (``cap="polynomial"``) is also available; it leaves spurious classes
such as ``t^p dt``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Tuple

from .linalg import Vec, axpy

Atom = Tuple[Tuple[int, ...], Tuple[int, ...]]


def weight(atom: Atom) -> int:
    return sum(atom[0]) + len(atom[1])


def form_degree(atom: Atom) -> int:
    return len(atom[1])


def _exponents(n: int, max_deg: int):
    if n == 0:
        yield ()
        return
    for total in range(max_deg + 1):
        yield from _exact(n, total)


def _exact(n: int, total: int):
    # graded-lex within a fixed total degree
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exact(n - 1, total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def apl_basis(n: int, p_max: int, cap: str = "weight") -> Tuple[Atom, ...]:
    """Monomial basis of capped forms on the ``n``-simplex, ordered by form degree then graded-lex."""
    if n < 0 or p_max < 0:
        raise ValueError("need n >= 0 and p_max >= 0")
    if cap not in ("weight", "polynomial"):
        raise ValueError(f"unknown cap mode {cap!r}")
    out = []
    for k in range(n + 1):
        budget = p_max - k if cap == "weight" else p_max
        if budget < 0:
            continue
        for e in _exponents(n, budget):
            for dts in combinations(range(1, n + 1), k):
                out.append((e, dts))
    return tuple(out)


def apl_basis_by_degree(n: int, p_max: int, cap: str = "weight") -> Dict[int, List[Atom]]:
    out: Dict[int, List[Atom]] = {}
    for a in apl_basis(n, p_max, cap):
        out.setdefault(len(a[1]), []).append(a)
    return out


def _wedge(I: Tuple[int, ...], J: Tuple[int, ...]):
    """``dt_I ∧ dt_J`` as (sign, sorted indices) or None."""
    if set(I) & set(J):
        return None
    inversions = sum(1 for i in I for j in J if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


@lru_cache(maxsize=None)
def mul_atoms(a: Atom, b: Atom):
    w = _wedge(a[1], b[1])
    if w is None:
        return None
    s, dts = w
    return s, (tuple(x + y for x, y in zip(a[0], b[0])), dts)


def mul(x: Mapping, y: Mapping) -> Vec:
    out: Vec = {}
    for a, ca in x.items():
        for b, cb in y.items():
            r = mul_atoms(a, b)
            if r is not None:
                s, c = r
                v = out.get(c, 0) + s * ca * cb
                if v:
                    out[c] = v
                else:
                    del out[c]
    return out


@lru_cache(maxsize=None)
def d_atom(a: Atom) -> Tuple[Tuple[Atom, int], ...]:
    e, I = a
    out = []
    for j, ej in enumerate(e, start=1):
        if not ej or j in I:
            continue
        s, dts = _wedge((j,), I)
        e2 = e[:j - 1] + (ej - 1,) + e[j:]
        out.append(((e2, dts), s * ej))
    return tuple(out)


def d(x: Mapping) -> Vec:
    out: Vec = {}
    for a, c in x.items():
        for b, k in d_atom(a):
            v = out.get(b, 0) + k * c
            if v:
                out[b] = v
            else:
                del out[b]
    return out


def one(n: int) -> Vec:
    return {((0,) * n, ()): Fraction(1)}


def t(n: int, i: int) -> Vec:
    """The coordinate ``t_i`` (``i = 0`` is eliminated: ``1 - Σ t_j``)."""
    if not 0 <= i <= n:
        raise ValueError("coordinate index out of range")
    if i == 0:
        out = one(n)
        for j in range(1, n + 1):
            out[(_unit(n, j), ())] = Fraction(-1)
        return out
    return {(_unit(n, i), ()): Fraction(1)}


def _unit(n: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(1, n + 1))


def dt(n: int, i: int) -> Vec:
    return d(t(n, i))


@lru_cache(maxsize=None)
def _face_images(n: int, k: int):
    """Images of ``t_1..t_n`` and ``dt_1..dt_n`` under the face ``δ^k``: Δ^{n-1} → Δ^n."""
    m = n - 1
    ts = []
    for i in range(1, n + 1):
        if k == 0:
            ts.append(t(m, i - 1))
        elif i < k:
            ts.append(t(m, i))
        elif i == k:
            ts.append({})
        else:
            ts.append(t(m, i - 1))
    return tuple(ts), tuple(d(x) for x in ts)


@lru_cache(maxsize=None)
def _face_atom(n: int, k: int, a: Atom) -> Tuple[Tuple[Atom, Fraction], ...]:
    ts, dts = _face_images(n, k)
    out = one(n - 1)
    e, I = a
    for i, ei in enumerate(e):
        for _ in range(ei):
            out = mul(out, ts[i])
            if not out:
                return ()
    for i in I:
        out = mul(out, dts[i - 1])
        if not out:
            return ()
    return tuple(sorted(out.items()))


def apl_face(k: int, omega: Mapping, n: int) -> Vec:
    """Pull back a form on the ``n``-simplex along the ``k``-th face ``δ^k``."""
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"face index {k} out of range for the {n}-simplex")
    out: Vec = {}
    for a, c in omega.items():
        for b, v in _face_atom(n, k, a):
            axpy(out, {b: v}, c)
    return out


class AplForm:
    """A polynomial form on the ``n``-simplex in canonical coordinates."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping = ()):
        self.n = n
        self.terms: Vec = {}
        for (e, I), c in dict(terms).items():
            e, I = tuple(e), tuple(I)
            if len(e) != n or any(i < 1 or i > n for i in I):
                raise ValueError(f"atom {(e, I)!r} does not live on the {n}-simplex")
            if len(set(I)) != len(I):
                continue
            s = 1
            lst = list(I)
            for p in range(len(lst)):
                for q in range(len(lst) - 1 - p):
                    if lst[q] > lst[q + 1]:
                        lst[q], lst[q + 1] = lst[q + 1], lst[q]
                        s = -s
            axpy(self.terms, {(e, tuple(lst)): Fraction(c)}, s)

    @classmethod
    def coordinate(cls, n: int, i: int) -> "AplForm":
        return cls(n, t(n, i))

    @classmethod
    def differential_of_coordinate(cls, n: int, i: int) -> "AplForm":
        return cls(n, dt(n, i))

    def degrees(self):
        return sorted({len(a[1]) for a in self.terms})

    def polynomial_degree(self) -> int:
        return max((sum(a[0]) for a in self.terms), default=0)

    def d(self) -> "AplForm":
        return AplForm(self.n, d(self.terms))

    def face(self, k: int) -> "AplForm":
        return AplForm(self.n - 1, apl_face(k, self.terms, self.n))

    def __mul__(self, other: "AplForm") -> "AplForm":
        if self.n != other.n:
            raise ValueError("forms live on different simplices")
        return AplForm(self.n, mul(self.terms, other.terms))

    def __add__(self, other: "AplForm") -> "AplForm":
        out = dict(self.terms)
        axpy(out, other.terms)
        return AplForm(self.n, out)

    def __sub__(self, other: "AplForm") -> "AplForm":
        out = dict(self.terms)
        axpy(out, other.terms, -1)
        return AplForm(self.n, out)

    def __eq__(self, other):
        return isinstance(other, AplForm) and self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return f"AplForm(n={self.n}, {self.terms})"
