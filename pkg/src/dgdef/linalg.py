"""Sparse exact linear algebra over Q.

Vectors are plain dicts ``atom -> coefficient`` with no zero entries.  Atoms
are arbitrary hashable, mutually comparable keys; comparisons only serve to
pick pivots deterministically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

Vec = Dict[Hashable, Fraction]


def axpy(y: Vec, x: Mapping, a=1) -> Vec:
    """In place ``y += a*x``; returns ``y``."""
    if not a:
        return y
    for k, c in x.items():
        v = y.get(k, 0) + a * c
        if v:
            y[k] = v
        else:
            del y[k]
    return y


def add(x: Mapping, y: Mapping, a=1) -> Vec:
    return axpy(dict(x), y, a)


def scale(x: Mapping, a) -> Vec:
    if not a:
        return {}
    return {k: a * c for k, c in x.items()}


def lincomb(terms: Iterable[Tuple[object, Mapping]]) -> Vec:
    out: Vec = {}
    for a, x in terms:
        axpy(out, x, a)
    return out


def is_zero(x: Mapping) -> bool:
    return not any(x.values())


def _pivot(v: Mapping):
    return min(v)


class Subspace:
    """Span of sparse vectors kept in reduced row-echelon form.

    Every basis vector has a pivot atom with coefficient 1 that appears in no
    other basis vector, so coordinates are read off the pivots.
    """

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self.basis: List[Vec] = []
        self.pivots: List[Hashable] = []
        self._where: Dict[Hashable, int] = {}
        for v in vectors:
            self.insert(v)

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Mapping) -> Vec:
        r = dict(v)
        for p in [p for p in r if p in self._where]:
            c = r.get(p)
            if c:
                axpy(r, self.basis[self._where[p]], -c)
        return r

    def insert(self, v: Mapping) -> bool:
        """Add ``v`` to the span; returns False when it was already there."""
        r = self.reduce(v)
        if not r:
            return False
        p = _pivot(r)
        inv = 1 / Fraction(r[p])
        r = {k: c * inv for k, c in r.items()}
        for b in self.basis:
            c = b.get(p)
            if c:
                axpy(b, r, -c)
        self._where[p] = len(self.basis)
        self.basis.append(r)
        self.pivots.append(p)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def coords(self, v: Mapping) -> List[Fraction]:
        """Coordinates of ``v`` in :attr:`basis`; ``ValueError`` if outside."""
        cs = [v.get(p, 0) for p in self.pivots]
        r = dict(v)
        for c, b in zip(cs, self.basis):
            axpy(r, b, -c)
        if r:
            raise ValueError("vector is not in the subspace")
        return cs

    def sorted_copy(self) -> "Subspace":
        """Same span with basis ordered by pivot atom (canonical form)."""
        s = Subspace()
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        s.basis = [self.basis[i] for i in order]
        s.pivots = [self.pivots[i] for i in order]
        s._where = {p: i for i, p in enumerate(s.pivots)}
        return s

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        a, b = self.sorted_copy(), other.sorted_copy()
        return a.pivots == b.pivots and a.basis == b.basis


class _Reducer:
    """Column echelon with history, for kernels and solves."""

    def __init__(self):
        self.rows: List[Tuple[Hashable, Vec, Vec]] = []  # pivot, vector, combination
        self._where: Dict[Hashable, int] = {}

    def reduce(self, v: Vec, comb: Vec):
        v = dict(v)
        comb = dict(comb)
        # entries only contain pivots of later entries, so one ordered sweep suffices
        for p, row, rc in self.rows:
            c = v.get(p)
            if c:
                axpy(v, row, -c)
                axpy(comb, rc, -c)
        return v, comb

    def add(self, v: Vec, comb: Vec):
        p = _pivot(v)
        inv = 1 / Fraction(v[p])
        self._where[p] = len(self.rows)
        self.rows.append((p, scale(v, inv), scale(comb, inv)))


def nullspace(columns: Sequence[Mapping]) -> List[Vec]:
    """Kernel of the map ``e_j -> columns[j]``, as dicts ``j -> coefficient``."""
    red = _Reducer()
    kernel = []
    for j, col in enumerate(columns):
        v, comb = red.reduce(col, {j: Fraction(1)})
        if v:
            red.add(v, comb)
        else:
            kernel.append(comb)
    return kernel


def rank(columns: Sequence[Mapping]) -> int:
    return Subspace(columns).dim


def solve(columns: Sequence[Mapping], rhs: Mapping) -> Optional[Vec]:
    """One solution ``x`` (dict ``j -> value``) of ``sum_j x_j columns[j] = rhs``, or None."""
    red = _Reducer()
    for j, col in enumerate(columns):
        v, comb = red.reduce(col, {j: Fraction(1)})
        if v:
            red.add(v, comb)
    v, comb = red.reduce(rhs, {})
    if v:
        return None
    return scale(comb, -1)


def image_basis(columns: Sequence[Mapping]) -> Subspace:
    return Subspace(columns)


class Matrix:
    """Exact sparse matrix stored by columns (``row -> value`` dicts)."""

    def __init__(self, nrows: int, ncols: int, columns: Optional[Sequence[Mapping]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.columns: List[Vec] = [dict(c) for c in columns] if columns is not None else [{} for _ in range(ncols)]
        if len(self.columns) != ncols:
            raise ValueError("column count mismatch")
        for c in self.columns:
            for r in c:
                if not 0 <= r < nrows:
                    raise ValueError("row index out of range")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: Fraction(rows[i][j]) for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols)

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                out[i][j] = Fraction(c)
        return out

    def apply(self, x: Mapping) -> Vec:
        out: Vec = {}
        for j, c in x.items():
            axpy(out, self.columns[j], c)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, other.ncols, [self.apply(c) for c in other.columns])

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.nrows, self.ncols, [add(a, b) for a, b in zip(self.columns, other.columns)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.nrows, self.ncols, [add(a, b, -1) for a, b in zip(self.columns, other.columns)])

    def scaled(self, a) -> "Matrix":
        return Matrix(self.nrows, self.ncols, [scale(c, a) for c in self.columns])

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def rank(self) -> int:
        return rank(self.columns)

    def nullspace(self) -> List[Vec]:
        return nullspace(self.columns)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.columns == other.columns

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={sum(len(c) for c in self.columns)})"
