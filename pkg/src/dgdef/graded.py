"""Graded vector spaces, cochain complexes and their cohomology over Q.

Two layers live here.  The concrete layer (:class:`GradedVectorSpace`,
:class:`LinearMap`, :class:`CochainComplex`) is plain finite linear algebra with
exact matrices.  :class:`DgSpace` is the sparse layer used by everything else:
elements are dicts over *atoms* of a possibly infinite-dimensional ambient
space, and a finite *window* (one :class:`~dgdef.linalg.Subspace` per degree)
selects the part we do linear algebra on.  ``DgSpace.to_complex`` turns a
window into a :class:`CochainComplex`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import Matrix, Subspace, Vec, axpy, nullspace

Label = Hashable


class ComplexError(ValueError):
    """Raised when d∘d != 0 or a window is not closed under d."""


@dataclass(frozen=True)
class GradedVectorSpace:
    components: Mapping[int, Tuple[Label, ...]]

    def __post_init__(self):
        comps = {int(k): tuple(v) for k, v in self.components.items() if len(v)}
        seen = set()
        for labels in comps.values():
            for lab in labels:
                if lab in seen:
                    raise ValueError(f"duplicate basis label {lab!r}")
                seen.add(lab)
        object.__setattr__(self, "components", comps)

    def dim(self, degree: Optional[int] = None) -> int:
        if degree is None:
            return sum(len(v) for v in self.components.values())
        return len(self.components.get(degree, ()))

    def degrees(self) -> List[int]:
        return sorted(self.components)

    def basis(self, degree: int) -> Tuple[Label, ...]:
        return self.components.get(degree, ())

    def dims(self) -> Dict[int, int]:
        return {k: len(v) for k, v in sorted(self.components.items())}


@dataclass(frozen=True)
class LinearMap:
    source: GradedVectorSpace
    target: GradedVectorSpace
    degree: int
    blocks: Mapping[int, Matrix]

    def __post_init__(self):
        blocks = {}
        for i in self.source.degrees():
            m, n = self.target.dim(i + self.degree), self.source.dim(i)
            if not m:
                continue
            b = self.blocks.get(i)
            if b is None:
                b = Matrix.zero(m, n)
            if (b.nrows, b.ncols) != (m, n):
                raise ValueError(f"block in degree {i} has shape {b.nrows}x{b.ncols}, expected {m}x{n}")
            blocks[i] = b
        object.__setattr__(self, "blocks", blocks)

    def block(self, i: int) -> Matrix:
        return self.blocks.get(i) or Matrix.zero(self.target.dim(i + self.degree), self.source.dim(i))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        blocks = {}
        for i in other.source.degrees():
            blocks[i] = self.block(i + other.degree) @ other.block(i)
        return LinearMap(other.source, self.target, self.degree + other.degree, blocks)

    def scaled(self, a) -> "LinearMap":
        return LinearMap(self.source, self.target, self.degree, {i: b.scaled(a) for i, b in self.blocks.items()})

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())


@dataclass(frozen=True)
class CochainComplex:
    space: GradedVectorSpace
    differential: LinearMap

    def __post_init__(self):
        d = self.differential
        if d.degree != 1 or d.source != self.space or d.target != self.space:
            raise ComplexError("differential must be a degree +1 endomorphism")

    def d(self, i: int) -> Matrix:
        return self.differential.block(i)

    def check(self) -> Optional[int]:
        """First degree where d∘d is nonzero, else None."""
        for i in self.space.degrees():
            if not (self.d(i + 1) @ self.d(i)).is_zero():
                return i
        return None

    def validate(self) -> "CochainComplex":
        bad = self.check()
        if bad is not None:
            raise ComplexError(f"d∘d != 0 starting in degree {bad}")
        return self

    def dims(self) -> Dict[int, int]:
        return self.space.dims()

    def betti(self) -> Dict[int, int]:
        return {i: h[0] for i, h in cohomology(self).items()}


def make_complex(dims: Mapping[int, int], blocks: Mapping[int, Sequence[Sequence]], prefix: str = "e") -> CochainComplex:
    """Small helper: complex from dimensions and dense differential blocks."""
    space = GradedVectorSpace({i: tuple((prefix, i, k) for k in range(n)) for i, n in dims.items()})
    mats = {i: Matrix.from_dense(rows) if rows else Matrix.zero(space.dim(i + 1), space.dim(i))
            for i, rows in blocks.items()}
    return CochainComplex(space, LinearMap(space, space, 1, mats)).validate()


def shift(C: CochainComplex, n: int) -> CochainComplex:
    """``C[n]``: degree ``i`` holds ``C^{n+i}``, differential ``(-1)^n d``."""
    comps = {i - n: labs for i, labs in C.space.components.items()}
    space = GradedVectorSpace(comps)
    sign = -1 if n % 2 else 1
    blocks = {i - n: b.scaled(sign) for i, b in C.differential.blocks.items()}
    return CochainComplex(space, LinearMap(space, space, 1, blocks))


def cohomology(C: CochainComplex) -> Dict[int, Tuple[int, List[Vec]]]:
    """Per degree: ``(dim H^i, cocycle representatives)``; fails fast if d∘d != 0."""
    C.validate()
    out = {}
    for i in C.space.degrees():
        kernel = nullspace(C.d(i).columns)
        image = Subspace(C.d(i - 1).columns) if C.space.dim(i - 1) else Subspace()
        reps = []
        for z in kernel:
            if image.insert(z):
                reps.append(z)
        out[i] = (len(reps), reps)
    return out


def betti_numbers(C: CochainComplex) -> Dict[int, int]:
    return {i: h for i, h in ((i, v[0]) for i, v in cohomology(C).items()) if h}


def compare_cohomology(C1: CochainComplex, C2: CochainComplex) -> bool:
    """True iff both complexes have the same cohomology dimension in every degree."""
    return betti_numbers(C1) == betti_numbers(C2)


# --------------------------------------------------------------------------
# sparse layer


class DgSpace:
    """Differential graded space on atoms with a finite window.

    ``degree(atom)`` and ``differential(atom)`` describe the ambient space;
    ``window`` maps degrees to spanning vectors of the finite part we compute
    with.  ``member`` optionally decides membership in the (unwindowed)
    ambient object when the atoms are shared with a larger space.
    """

    def __init__(self, window: Mapping[int, Iterable[Mapping]], degree: Callable[[Hashable], int],
                 differential: Optional[Callable[[Hashable], Mapping]] = None, name: str = "",
                 member: Optional[Callable[[Mapping], bool]] = None):
        self.name = name
        self._degree = degree
        self._differential = differential
        self._dcache: Dict[Hashable, Vec] = {}
        self.member_test = member
        self.window: Dict[int, Subspace] = {}
        for i, vecs in sorted(window.items()):
            sub = vecs if isinstance(vecs, Subspace) else Subspace(vecs)
            if sub.dim:
                self.window[int(i)] = sub
        self._complex: Optional[CochainComplex] = None

    # -- ambient operations -----------------------------------------------
    def degree(self, atom) -> int:
        return self._degree(atom)

    def degree_of(self, v: Mapping) -> Optional[int]:
        """Degree of a homogeneous vector (None for zero); raises on mixed degrees."""
        ds = {self._degree(a) for a in v}
        if len(ds) > 1:
            raise ValueError("vector is not homogeneous")
        return ds.pop() if ds else None

    def d_atom(self, atom) -> Vec:
        if self._differential is None:
            return {}
        r = self._dcache.get(atom)
        if r is None:
            r = {k: c for k, c in self._differential(atom).items() if c}
            self._dcache[atom] = r
        return r

    def d(self, v: Mapping) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            axpy(out, self.d_atom(a), c)
        return out

    # -- window ------------------------------------------------------------
    def basis(self, degree: int) -> List[Vec]:
        sub = self.window.get(degree)
        return list(sub.basis) if sub else []

    def dims(self) -> Dict[int, int]:
        return {i: s.dim for i, s in self.window.items()}

    def degrees(self) -> List[int]:
        return sorted(self.window)

    def in_window(self, v: Mapping) -> bool:
        if not v:
            return True
        sub = self.window.get(self.degree_of(v))
        return sub is not None and sub.contains(v)

    def contains(self, v: Mapping) -> bool:
        """Membership in the ambient object (falls back to the window span)."""
        if self.member_test is not None:
            return self.member_test(v)
        return self.in_window(v)

    def coords(self, v: Mapping, degree: int) -> List[Fraction]:
        sub = self.window.get(degree)
        if sub is None:
            if v:
                raise ValueError(f"degree {degree} window is empty")
            return []
        return sub.coords(v)

    def labels(self, degree: int) -> Tuple[Label, ...]:
        return tuple((self.name, degree, k) for k in range(self.window[degree].dim)) if degree in self.window else ()

    def to_complex(self) -> CochainComplex:
        """Matrix form of the window; requires the window to be closed under d."""
        if self._complex is not None:
            return self._complex
        space = GradedVectorSpace({i: self.labels(i) for i in self.window})
        blocks = {}
        for i in self.window:
            cols = []
            for b in self.basis(i):
                db = self.d(b)
                try:
                    cs = self.coords(db, i + 1)
                except ValueError:
                    raise ComplexError(f"{self.name or 'window'} is not closed under d in degree {i}") from None
                cols.append({r: c for r, c in enumerate(cs) if c})
            if space.dim(i + 1):
                blocks[i] = Matrix(space.dim(i + 1), space.dim(i), cols)
        C = CochainComplex(space, LinearMap(space, space, 1, blocks))
        self._complex = C
        return C

    def cohomology_dims(self) -> Dict[int, int]:
        return betti_numbers(self.to_complex())

    def check_d_squared(self) -> Optional[Tuple[int, Vec]]:
        """First window basis vector with d(d(b)) != 0, else None."""
        for i in self.degrees():
            for b in self.basis(i):
                dd = self.d(self.d(b))
                if dd:
                    return i, b
        return None

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, dims={self.dims()})"


def dgspace_from_complex(C: CochainComplex, name: str = "") -> DgSpace:
    """View a matrix complex as a DgSpace whose atoms are its basis labels."""
    degree_of = {}
    for i, labs in C.space.components.items():
        for lab in labs:
            degree_of[lab] = i

    def differential(atom):
        i = degree_of[atom]
        k = C.space.basis(i).index(atom)
        col = C.d(i).columns[k] if C.space.dim(i + 1) else {}
        tgt = C.space.basis(i + 1)
        return {tgt[r]: c for r, c in col.items()}

    window = {i: [{lab: Fraction(1)} for lab in labs] for i, labs in C.space.components.items()}
    return DgSpace(window, degree_of.__getitem__, differential, name)
