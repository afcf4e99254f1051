"""Cohomology ring presentations truncated at a degree cutoff.

A presentation stores per-degree class bases of a CDGA's cohomology plus
lazily computed structure constants; only products of total degree at most
the cutoff are available.  On top of it sit the degree-1 generation test
and the characteristic subspace, the kernel of multiplication from the
second exterior power of H^1 into H^2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cdga import CDGA
from .gca import Algebra, Multivector
from .linalg import Span, SparseMatrix, Vec


class CutoffError(ValueError):
    """A product or dimension beyond the presentation cutoff was requested."""


class RingPresentation:
    """Truncated cohomology ring of a CDGA with exact structure constants."""

    def __init__(self, source: CDGA, max_degree: int):
        if max_degree < 1:
            raise ValueError(f"cutoff must be >= 1, got {max_degree}")
        self.source = source
        self.max_degree = max_degree
        self._bases = {q: source.cohomology(q) for q in range(max_degree + 1)}
        self._products: dict[tuple[int, int, int, int], Vec] = {}
        self._labels: dict[int, tuple[str, ...]] = {}

    def dim(self, q: int) -> int:
        if q < 0:
            return 0
        if q > self.max_degree:
            raise CutoffError(f"degree {q} beyond cutoff {self.max_degree}")
        return self._bases[q].dim

    def dims(self) -> list[int]:
        return [self.dim(q) for q in range(self.max_degree + 1)]

    def representative(self, q: int, i: int) -> Multivector:
        if not 0 <= q <= self.max_degree:
            raise CutoffError(f"degree {q} beyond cutoff {self.max_degree}")
        return self._bases[q].representatives[i]

    def basis(self, q: int):
        if not 0 <= q <= self.max_degree:
            raise CutoffError(f"degree {q} beyond cutoff {self.max_degree}")
        return self._bases[q]

    def labels(self, q: int) -> tuple[str, ...]:
        cached = self._labels.get(q)
        if cached is None:
            cached = tuple(str(rep) for rep in self.basis(q).representatives)
            self._labels[q] = cached
        return cached

    def product_coords(self, qa: int, ia: int, qb: int, ib: int) -> Vec:
        """Sparse class coordinates of the product of two basis classes."""
        q = qa + qb
        if q > self.max_degree:
            raise CutoffError(
                f"product degree {q} beyond cutoff {self.max_degree}"
            )
        if (qa, ia) > (qb, ib):
            base = self.product_coords(qb, ib, qa, ia)
            if qa % 2 and qb % 2:
                return {j: -c for j, c in base.items()}
            return base
        key = (qa, ia, qb, ib)
        cached = self._products.get(key)
        if cached is None:
            prod = self.representative(qa, ia) * self.representative(qb, ib)
            coords = self._bases[q].reduction(prod)
            cached = {j: c for j, c in enumerate(coords) if c}
            self._products[key] = cached
        return cached

    def multiply_coords(self, qa: int, va: Vec, qb: int, vb: Vec) -> Vec:
        """Bilinear extension of product_coords to coordinate vectors."""
        out: Vec = {}
        for ia, ca in va.items():
            if not ca:
                continue
            for ib, cb in vb.items():
                if not cb:
                    continue
                for j, c in self.product_coords(qa, ia, qb, ib).items():
                    cur = out.get(j, Fraction(0)) + ca * cb * c
                    if cur:
                        out[j] = cur
                    else:
                        out.pop(j, None)
        return out

    def reduce(self, v: Multivector) -> RingElement:
        """Ring element of a (possibly inhomogeneous) cocycle of the source."""
        parts: dict[int, Vec] = {}
        for q, part in v.homogeneous_parts().items():
            if q > self.max_degree:
                raise CutoffError(f"degree {q} beyond cutoff {self.max_degree}")
            coords = self._bases[q].reduction(part)
            sparse = {j: c for j, c in enumerate(coords) if c}
            if sparse:
                parts[q] = sparse
        return RingElement(self, parts)

    def unit(self) -> RingElement:
        return RingElement(self, {0: {0: Fraction(1)}})

    def h_class(self, q: int, i: int) -> RingElement:
        if not 0 <= i < self.dim(q):
            raise IndexError(f"no class {i} in degree {q}")
        return RingElement(self, {q: {i: Fraction(1)}})

    def element(self, q: int, coords: Vec | Sequence[Fraction | int]) -> RingElement:
        if not isinstance(coords, dict):
            coords = {j: Fraction(c) for j, c in enumerate(coords) if c}
        else:
            coords = {j: Fraction(c) for j, c in coords.items() if c}
        if any(not 0 <= j < self.dim(q) for j in coords):
            raise IndexError(f"coordinate outside H^{q} basis")
        return RingElement(self, {q: coords} if coords else {})


def from_cdga(source: CDGA, max_degree: int) -> RingPresentation:
    """Truncated cohomology ring presentation of a validated CDGA."""
    return RingPresentation(source, max_degree)


class RingElement:
    """Graded element of a ring presentation, sparse per-degree coordinates."""

    __slots__ = ("ring", "parts")

    def __init__(self, ring: RingPresentation, parts: dict[int, Vec]):
        self.ring = ring
        self.parts = {q: dict(v) for q, v in parts.items() if v}

    def is_zero(self) -> bool:
        return not self.parts

    def part(self, q: int) -> Vec:
        return dict(self.parts.get(q, {}))

    @property
    def degree(self) -> int | None:
        ds = sorted(self.parts)
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"mixed degrees {ds}")
        return ds[0]

    def __add__(self, other: RingElement) -> RingElement:
        self._check(other)
        parts = {q: dict(v) for q, v in self.parts.items()}
        for q, v in other.parts.items():
            cur = parts.setdefault(q, {})
            for j, c in v.items():
                s = cur.get(j, Fraction(0)) + c
                if s:
                    cur[j] = s
                else:
                    cur.pop(j, None)
        return RingElement(self.ring, parts)

    def __sub__(self, other: RingElement) -> RingElement:
        return self + (-other)

    def __neg__(self) -> RingElement:
        return self.scale(-1)

    def scale(self, c: Fraction | int) -> RingElement:
        c = Fraction(c)
        if not c:
            return RingElement(self.ring, {})
        return RingElement(
            self.ring, {q: {j: c * v for j, v in part.items()} for q, part in self.parts.items()}
        )

    def __mul__(self, other: RingElement | int | Fraction) -> RingElement:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        parts: dict[int, Vec] = {}
        for qa, va in self.parts.items():
            for qb, vb in other.parts.items():
                prod = self.ring.multiply_coords(qa, va, qb, vb)
                if not prod:
                    continue
                cur = parts.setdefault(qa + qb, {})
                for j, c in prod.items():
                    s = cur.get(j, Fraction(0)) + c
                    if s:
                        cur[j] = s
                    else:
                        cur.pop(j, None)
        return RingElement(self.ring, parts)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.parts == other.parts

    def _check(self, other: RingElement) -> None:
        if other.ring is not self.ring:
            raise ValueError("elements of different ring presentations")

    def __repr__(self) -> str:
        if not self.parts:
            return "<ring 0>"
        chunks = []
        for q in sorted(self.parts):
            labels = self.ring.labels(q)
            for j in sorted(self.parts[q]):
                chunks.append(f"{self.parts[q][j]}*[{labels[j]}]")
        return "<ring " + " + ".join(chunks) + ">"


@dataclass(frozen=True)
class GenerationVerdict:
    """Outcome of the degree-1 generation test up to a degree bound."""

    generated: bool
    checked_upto: int
    failure_degree: int | None = None
    cokernel_dim: int | None = None


def generated_in_degree_one_upto(ring: RingPresentation, m: int) -> GenerationVerdict:
    """Check that products of degree-1 classes span H^q for every q <= m.

    Works on the incremental filtration: the span in degree q is generated
    by products of the degree q-1 span with H^1.  Reports the first failing
    degree and the dimension missed there.
    """
    if not 1 <= m <= ring.max_degree:
        raise CutoffError(f"generation bound {m} outside 1..{ring.max_degree}")
    b1 = ring.dim(1)
    prev = [
        {i: Fraction(1)} for i in range(b1)
    ]
    for q in range(2, m + 1):
        span = Span(ring.dim(q))
        for vec in prev:
            for j in range(b1):
                span.add(ring.multiply_coords(q - 1, vec, 1, {j: Fraction(1)}))
        if span.dim < ring.dim(q):
            return GenerationVerdict(False, m, q, ring.dim(q) - span.dim)
        prev = span.basis_vectors()
    return GenerationVerdict(True, m)


@dataclass(frozen=True)
class CharacteristicSubspace:
    """Kernel of multiplication from the second exterior power of H^1 to H^2.

    Elements live in a fresh exterior algebra on degree-1 class symbols, one
    per basis class of H^1.
    """

    ring: RingPresentation
    algebra: Algebra
    basis: tuple[Multivector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def class_symbol_algebra(ring: RingPresentation) -> Algebra:
    """Exterior algebra on one degree-1 symbol per H^1 basis class."""
    labels = ring.labels(1)
    ok = all(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", s) for s in labels)
    if not ok or len(set(labels)) != len(labels):
        labels = tuple(f"a{i}" for i in range(len(labels)))
    return Algebra([(s, 1) for s in labels])


def characteristic_subspace(ring: RingPresentation) -> CharacteristicSubspace:
    if ring.max_degree < 2:
        raise CutoffError("characteristic subspace needs cutoff >= 2")
    alg = class_symbol_algebra(ring)
    b1 = ring.dim(1)
    pairs = alg.basis(2)
    cols: list[Vec] = []
    for mono in pairs:
        i, j = mono
        cols.append(ring.product_coords(1, i, 1, j))
    mat = SparseMatrix(ring.dim(2), len(pairs), cols)
    basis = tuple(
        alg.from_coordinates(2, [vec.get(k, Fraction(0)) for k in range(len(pairs))])
        for vec in mat.kernel()
    )
    return CharacteristicSubspace(ring, alg, basis)
