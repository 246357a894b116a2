"""Exact linear algebra over the rationals.

Vectors are sparse: a ``dict`` mapping a column key to a nonzero ``Fraction``.
Column keys may be any hashable; when no column order is given, keys are
compared with ``sorted``, so mixing incomparable key types needs an
explicit ``column_order``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence

Vector = Dict[Hashable, Fraction]


def sparse(values: Sequence) -> Vector:
    """Dense sequence -> sparse vector keyed by position."""
    return {i: Fraction(v) for i, v in enumerate(values) if v != 0}


def dense(vec: Vector, n: int) -> List[Fraction]:
    return [vec.get(i, Fraction(0)) for i in range(n)]


def dot(u: Vector, v: Vector) -> Fraction:
    if len(u) > len(v):
        u, v = v, u
    return sum((c * v[k] for k, c in u.items() if k in v), Fraction(0))


def axpy(a: Fraction, x: Vector, y: Vector) -> Vector:
    """Return ``y + a*x`` as a new vector."""
    out = dict(y)
    for k, c in x.items():
        s = out.get(k, 0) + a * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class RowReducer:
    """Incremental reduced row echelon form.

    Rows are kept fully reduced against each other, and the pivot of each new
    row is the earliest column (in ``column_order``) where it is nonzero.  The
    final pivot set is therefore the pivot set of the RREF of all inserted rows
    under that column order.
    """

    def __init__(self, column_order: Optional[Iterable[Hashable]] = None):
        self._rank_of = None if column_order is None else {c: i for i, c in enumerate(column_order)}
        self.pivots: Dict[Hashable, Vector] = {}

    def _key(self, col):
        if self._rank_of is None:
            return col
        return self._rank_of[col]

    def reduce(self, row: Vector) -> Vector:
        r = {k: Fraction(v) for k, v in row.items() if v != 0}
        for pc in [c for c in r if c in self.pivots]:
            coeff = r.get(pc)
            if coeff:
                r = axpy(-coeff, self.pivots[pc], r)
        return r

    def add(self, row: Vector) -> bool:
        """Insert ``row``; return True iff it was independent of earlier rows."""
        r = self.reduce(row)
        if not r:
            return False
        pc = min(r, key=self._key)
        inv = 1 / r[pc]
        r = {k: v * inv for k, v in r.items()}
        for other_pc, other in list(self.pivots.items()):
            c = other.get(pc)
            if c:
                self.pivots[other_pc] = axpy(-c, r, other)
        self.pivots[pc] = r
        return True

    def contains(self, row: Vector) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[Vector], column_order=None) -> int:
    rr = RowReducer(column_order)
    for r in rows:
        rr.add(r)
    return rr.rank


def pivot_columns(rows: Iterable[Vector], column_order=None) -> List[Hashable]:
    """Pivot columns of the RREF, listed in ``column_order``."""
    rr = RowReducer(column_order)
    for r in rows:
        rr.add(r)
    return sorted(rr.pivots, key=rr._key)


def span_basis(rows: Iterable[Vector], column_order=None) -> List[Vector]:
    rr = RowReducer(column_order)
    for r in rows:
        rr.add(r)
    return [rr.pivots[c] for c in sorted(rr.pivots, key=rr._key)]


def nullspace(rows: Sequence[Vector], columns: Sequence[Hashable]) -> List[Vector]:
    """Basis of ``{x : r . x = 0 for all rows r}`` with support in ``columns``."""
    rr = RowReducer(columns)
    for r in rows:
        rr.add(r)
    free = [c for c in columns if c not in rr.pivots]
    basis = []
    for f in free:
        x = {f: Fraction(1)}
        for pc, prow in rr.pivots.items():
            c = prow.get(f)
            if c:
                x[pc] = -c
        basis.append(x)
    return basis


def solve_combination(vectors: Sequence[Vector], target: Vector) -> Optional[List[Fraction]]:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target``, or None.

    Solved by row-reducing rows ``(v_i | e_i)``; the tag columns carry the
    combination along with the eliminations.
    """
    n = len(vectors)
    rr = RowReducer()
    # Real columns are keyed (0, col) and tag columns (1, i) so real columns pivot first.
    for i, v in enumerate(vectors):
        row = {(0, k): Fraction(c) for k, c in v.items()}
        row[(1, i)] = Fraction(1)
        rr.add(row)
    t = rr.reduce({(0, k): Fraction(c) for k, c in target.items()})
    if any(k[0] == 0 for k in t):
        return None
    # t == target - sum(c_i v_i) restricted to tags => t has -c_i on tag i.
    return [-t.get((1, i), Fraction(0)) for i in range(n)]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f = f / p
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= f * row_c[c]
    return det


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> List[Fraction]:
    """Coefficients (low to high) of the unique polynomial through the points."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    # Newton divided differences, then expand the Newton form.
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for d in range(n - 1):
            if poly[d]:
                new[d + 1] += poly[d]
                new[d] -= poly[d] * xs[i]
        new[0] += coef[i]
        poly = new
    return poly


def is_independent(rows: Sequence[Vector]) -> bool:
    return rank(rows) == len(rows)


__all__ = [
    "Vector",
    "RowReducer",
    "axpy",
    "dense",
    "determinant",
    "dot",
    "interpolate",
    "is_independent",
    "nullspace",
    "pivot_columns",
    "rank",
    "solve_combination",
    "span_basis",
    "sparse",
]
