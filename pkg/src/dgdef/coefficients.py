"""Exact scalars and local Artinian algebras presented by monomials.

Scalars are :class:`fractions.Fraction` (or plain ``int``, which compares and
hashes identically).  An :class:`ArtinianAlgebra` is ``Q[t_1..t_m] / I`` for a
monomial ideal ``I`` containing a power of every generator; its maximal ideal
has the basis of standard monomials other than ``1`` (the *staircase*).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Rational = Fraction
Monomial = Tuple[int, ...]
Element = Dict[Monomial, Fraction]


def rational(p, q=1) -> Fraction:
    """Normalized rational ``p/q``."""
    return Fraction(p, q)


@dataclass(frozen=True)
class ArtinianAlgebra:
    generators: Tuple[str, ...]
    staircase: frozenset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = len(self.generators)
        zero = (0,) * m
        if zero in self.staircase:
            raise ValueError("the unit monomial is not part of the maximal ideal")
        for mono in self.staircase:
            if len(mono) != m or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent vector {mono!r}")
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                lower = mono[:i] + (e - 1,) + mono[i + 1:]
                if lower != zero and lower not in self.staircase:
                    raise ValueError(f"staircase not closed under division at {mono!r}")

    # -- structure -------------------------------------------------------
    @property
    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    @property
    def basis(self) -> Tuple[Monomial, ...]:
        """Monomial basis of the maximal ideal, graded-lex ordered."""
        return tuple(sorted(self.staircase, key=lambda e: (sum(e), e)))

    @property
    def dim(self) -> int:
        return len(self.staircase) + 1

    @property
    def max_degree(self) -> int:
        return max((sum(e) for e in self.staircase), default=0)

    @property
    def nilpotency_order(self) -> int:
        """Smallest N with m_A^N = 0."""
        return self.max_degree + 1

    def is_field(self) -> bool:
        return not self.staircase

    def monomial_product(self, a: Monomial, b: Monomial):
        c = tuple(x + y for x, y in zip(a, b))
        if c == self.unit or c in self.staircase:
            return c
        return None

    # -- elements --------------------------------------------------------
    def element(self, terms: Mapping[Monomial, object]) -> Element:
        out = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if mono != self.unit and mono not in self.staircase:
                raise ValueError(f"{mono!r} is zero in {self}")
            if c:
                out[mono] = Fraction(c)
        return out

    def one(self) -> Element:
        return {self.unit: Fraction(1)}

    def gen(self, i: int = 0) -> Element:
        e = [0] * len(self.generators)
        e[i] = 1
        return self.element({tuple(e): 1})

    def mul(self, a: Mapping, b: Mapping) -> Element:
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                mc = self.monomial_product(ma, mb)
                if mc is None:
                    continue
                v = out.get(mc, 0) + ca * cb
                if v:
                    out[mc] = v
                else:
                    out.pop(mc, None)
        return out

    def add(self, a: Mapping, b: Mapping, scale=1) -> Element:
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + scale * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def power(self, a: Mapping, k: int) -> Element:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def in_maximal_ideal(self, a: Mapping) -> bool:
        return not a.get(self.unit, 0)

    def __str__(self):
        return self.name or f"Q[{','.join(self.generators)}]/I"


def _truncation(generators: Sequence[str], max_total_degree: int, name: str) -> ArtinianAlgebra:
    m = len(generators)
    stairs = frozenset(
        e for e in product(range(max_total_degree + 1), repeat=m)
        if 0 < sum(e) <= max_total_degree
    )
    return ArtinianAlgebra(tuple(generators), stairs, name)


def make_field() -> ArtinianAlgebra:
    """The ground field Q itself (zero maximal ideal)."""
    return ArtinianAlgebra((), frozenset(), "Q")


def make_dual_numbers(name: str = "eps") -> ArtinianAlgebra:
    return _truncation([name], 1, f"Q[{name}]/({name}^2)")


def make_truncated_poly(order: int, name: str = "t") -> ArtinianAlgebra:
    """``Q[t]/(t^order)``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    return _truncation([name], order - 1, f"Q[{name}]/({name}^{order})")


def make_truncated_multivariate(generators: Iterable[str], max_total_degree: int) -> ArtinianAlgebra:
    """``Q[t_1..t_m] / (t)^(max_total_degree+1)``."""
    gens = tuple(generators)
    if max_total_degree < 1 or not gens:
        raise ValueError("need at least one generator and degree >= 1")
    return _truncation(gens, max_total_degree, f"Q[{','.join(gens)}]/(m^{max_total_degree + 1})")


def make_staircase_algebra(generators: Iterable[str], staircase: Iterable[Monomial]) -> ArtinianAlgebra:
    """Monomial quotient with the given staircase; the staircase is closed downward first."""
    gens = tuple(generators)
    closed = set()
    todo = [tuple(e) for e in staircase]
    while todo:
        e = todo.pop()
        if sum(e) == 0 or e in closed:
            continue
        closed.add(e)
        for i, x in enumerate(e):
            if x:
                todo.append(e[:i] + (x - 1,) + e[i + 1:])
    return ArtinianAlgebra(gens, frozenset(closed))


def parse_ring(text: str) -> ArtinianAlgebra:
    """Ring names accepted in scenario files: ``"dual"`` or ``"t^n"``."""
    s = text.strip().replace(" ", "")
    if s == "dual":
        return make_dual_numbers()
    if s.startswith("t^"):
        try:
            n = int(s[2:])
        except ValueError:
            raise ValueError(f"unsupported ring {text!r}") from None
        return make_truncated_poly(n)
    raise ValueError(f"unsupported ring {text!r}")
