"""Exact sparse linear algebra over the rationals.

Vectors are sparse ``dict[int, Fraction]`` maps.  Internally rows are scaled
to primitive integer form and eliminated fraction-free, so no floating point
ever enters.  A single word-sized prime powers an optional fast path: a full
rank over F_p certifies full rank over the rationals, everything else falls
back to exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = dict[int, Fraction]
Row = dict[int, int]

_FAST_PRIME = 2**31 - 1


def to_int_row(vec: Vec) -> Row:
    """Clear denominators and strip content; zero vector becomes {}."""
    if not vec:
        return {}
    denom = lcm(*(c.denominator for c in vec.values()))
    row = {j: int(c * denom) for j, c in vec.items() if c}
    return row_primitive(row)


def row_primitive(row: Row) -> Row:
    row = {j: v for j, v in row.items() if v}
    if not row:
        return {}
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
    lead = row[min(row)]
    if lead < 0:
        g = -g
    return {j: v // g for j, v in row.items()}


def row_to_vec(row: Row) -> Vec:
    return {j: Fraction(v) for j, v in row.items()}


def _combine(a: Row, ca: int, b: Row, cb: int) -> Row:
    """ca*a + cb*b over the integers."""
    out = dict((j, ca * v) for j, v in a.items()) if ca != 1 else dict(a)
    for j, v in b.items():
        w = out.get(j, 0) + cb * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return out


class Echelon:
    """Reduced row echelon form maintained incrementally over primitive rows.

    With ``track=True`` every added row is augmented with a marker column at
    ``ncols + k``; rows that reduce to zero surface exact dependence
    relations through :attr:`null_rows`.  Marker columns are never pivots.
    """

    def __init__(self, ncols: int | None = None, track: bool = False):
        if track and ncols is None:
            raise ValueError("tracking requires an explicit column count")
        self.ncols = ncols
        self.track = track
        self.rows: list[Row] = []
        self.pivots: list[int] = []
        self.null_rows: list[Row] = []
        self.added = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _is_marker(self, col: int) -> bool:
        return self.track and col >= self.ncols

    def _reduce(self, row: Row) -> Row:
        for pivot, base in zip(self.pivots, self.rows):
            c = row.get(pivot)
            if c:
                row = _combine(row, base[pivot], base, -c)
        return row

    def _real_part(self, row: Row) -> Row:
        if not self.track:
            return row
        return {j: v for j, v in row.items() if j < self.ncols}

    def add(self, vec: Vec | Row) -> bool:
        """Insert a vector; returns True when the rank grew."""
        frac_vec: Vec = {j: Fraction(v) for j, v in vec.items() if v}
        if self.track:
            # scale the marker together with the vector, never separately
            frac_vec[self.ncols + self.added] = Fraction(1)
        self.added += 1
        row = to_int_row(frac_vec)
        row = self._reduce(row)
        if not self._real_part(row):
            if self.track and row:
                self.null_rows.append(row_primitive(row))
            return False
        row = row_primitive(row)
        pivot = min(self._real_part(row))
        for k, base in enumerate(self.rows):
            c = base.get(pivot)
            if c:
                self.rows[k] = row_primitive(_combine(base, row[pivot], row, -c))
        at = sum(1 for p in self.pivots if p < pivot)
        self.rows.insert(at, row)
        self.pivots.insert(at, pivot)
        return True

    def residue(self, vec: Vec) -> Vec:
        """Image of a vector in the quotient by the row space, as a primitive row."""
        row = self._reduce(to_int_row(vec))
        return row_to_vec(row_primitive(self._real_part(row)))

    def contains(self, vec: Vec) -> bool:
        return not self.residue(vec)

    def reduce_fraction(self, vec: Vec) -> Vec:
        """Exact linear reduction modulo the row space, marker columns dropped."""
        w = {j: Fraction(v) for j, v in vec.items() if v}
        for pivot, base in zip(self.pivots, self.rows):
            c = w.get(pivot)
            if c:
                f = c / base[pivot]
                for j, bv in base.items():
                    if self._is_marker(j):
                        continue
                    cur = w.get(j, Fraction(0)) - f * bv
                    if cur:
                        w[j] = cur
                    else:
                        w.pop(j, None)
        return w

    def express(self, vec: Vec) -> list[Fraction] | None:
        """Coefficients over the added vectors, or None when outside the span."""
        if not self.track:
            raise ValueError("express requires tracking")
        frac_vec: Vec = {j: Fraction(v) for j, v in vec.items() if v}
        if not frac_vec:
            return [Fraction(0)] * self.added
        marker = self.ncols + self.added
        frac_vec[marker] = Fraction(1)
        row = to_int_row(frac_vec)
        row = self._reduce(row)
        if self._real_part(row):
            return None
        alpha = row[marker]
        coeffs = [Fraction(0)] * self.added
        for j, v in row.items():
            if j >= self.ncols and j != marker:
                coeffs[j - self.ncols] = Fraction(-v, alpha)
        return coeffs

    def basis_vectors(self) -> list[Vec]:
        return [row_to_vec(self._real_part(r)) for r in self.rows]


def rank_mod_p(rows: Iterable[Row], p: int = _FAST_PRIME) -> int:
    pivots: dict[int, Row] = {}
    for raw in rows:
        row = {j: v % p for j, v in raw.items() if v % p}
        while row:
            col = min(row)
            base = pivots.get(col)
            if base is None:
                inv = pow(row[col], -1, p)
                pivots[col] = {j: (v * inv) % p for j, v in row.items()}
                break
            c = row[col]
            row = {
                j: v
                for j in set(row) | set(base)
                if (v := (row.get(j, 0) - c * base.get(j, 0)) % p)
            }
    return len(pivots)


def rank_rows(rows: Sequence[Row], max_rank: int | None = None) -> int:
    """Exact rank; certifies through F_p first when the matrix could be full."""
    rows = [r for r in rows if r]
    if not rows:
        return 0
    if max_rank is not None:
        fast = rank_mod_p(rows)
        if fast == min(len(rows), max_rank):
            return fast
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


@dataclass
class SparseMatrix:
    """Column-major sparse rational matrix."""

    nrows: int
    ncols: int
    cols: list[Vec] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.cols:
            self.cols = [{} for _ in range(self.ncols)]
        if len(self.cols) != self.ncols:
            raise ValueError("column count mismatch")

    def entry(self, i: int, j: int) -> Fraction:
        return self.cols[j].get(i, Fraction(0))

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def apply(self, vec: Vec) -> Vec:
        out: dict[int, Fraction] = {}
        for j, c in vec.items():
            if not c:
                continue
            for i, v in self.cols[j].items():
                w = out.get(i, Fraction(0)) + c * v
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
        return out

    def compose(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in composition")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def rank(self) -> int:
        rows = [to_int_row(c) for c in self.cols]
        return rank_rows(rows, max_rank=self.nrows)

    def kernel(self) -> list[Vec]:
        """Deterministic rational basis of the null space."""
        ech = Echelon(self.nrows, track=True)
        for c in self.cols:
            ech.add(c)
        out = []
        for null in ech.null_rows:
            vec = {j - self.nrows: Fraction(v) for j, v in null.items()}
            out.append(vec)
        return out

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                dense[i][j] = v
        return dense


class Span:
    """Subspace of Q^n with exact membership, coordinates and quotients."""

    def __init__(self, ncols: int, vectors: Iterable[Vec] = ()):
        self.ncols = ncols
        self._ech = Echelon(ncols, track=True)
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return self._ech.rank

    def add(self, vec: Vec) -> bool:
        return self._ech.add(vec)

    def contains(self, vec: Vec) -> bool:
        return self._ech.contains(vec)

    def express(self, vec: Vec) -> list[Fraction] | None:
        return self._ech.express(vec)

    def residue(self, vec: Vec) -> Vec:
        return self._ech.residue(vec)

    def basis_vectors(self) -> list[Vec]:
        return self._ech.basis_vectors()

    def pivot_columns(self) -> list[int]:
        return list(self._ech.pivots)


def intersect_spans(a: Sequence[Vec], b: Sequence[Vec], ncols: int) -> list[Vec]:
    """Basis of span(a) ∩ span(b) inside Q^ncols."""
    cols = [dict(v) for v in a] + [dict(v) for v in b]
    mat = SparseMatrix(ncols, len(cols), cols)
    out = Span(ncols)
    basis = []
    for rel in mat.kernel():
        w: Vec = {}
        for k, c in rel.items():
            if k < len(a):
                for j, v in a[k].items():
                    cur = w.get(j, Fraction(0)) + c * v
                    if cur:
                        w[j] = cur
                    else:
                        w.pop(j, None)
        if w and out.add(w):
            basis.append(w)
    return basis
