"""Commutative differential graded algebras and their cohomology.

A CDGA here is a free graded-commutative algebra with a degree ``+1``
differential satisfying the graded Leibniz rule and ``d(d(v)) = 0``.
Cohomology is computed per degree with exact rational arithmetic and comes
with deterministic class representatives and a linear reduction map onto
class coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .gca import Algebra, AlgebraError, DegreeError, Generator, Monomial, Multivector
from .linalg import Echelon, Span, SparseMatrix, Vec


class NotADifferential(ValueError):
    """d fails to square to zero; carries the offending generator and residual."""

    def __init__(self, name: str, residual: Multivector):
        self.generator = name
        self.residual = residual
        super().__init__(f"d(d({name})) = {residual} is nonzero")


class NotACocycle(ValueError):
    """An operation required d(v) = 0."""


class CDGA:
    """Free CDGA with a validated differential.

    ``differential`` maps generator names to their images, given as
    multivectors of the same algebra or as parseable expression strings.
    Unlisted generators are closed.
    """

    def __init__(
        self,
        algebra: Algebra,
        differential: Mapping[str, Multivector | str] | None = None,
        *,
        check: bool = True,
    ):
        self.algebra = algebra
        self._d_gen: dict[int, Multivector] = {}
        for name, value in (differential or {}).items():
            idx = algebra.index_of(name)
            if isinstance(value, str):
                value = algebra.parse(value)
            if value.algebra != algebra:
                raise AlgebraError(f"d({name}) lives in a different algebra")
            if not value.is_zero():
                self._d_gen[idx] = value
        self._d_mono_cache: dict[Monomial, Multivector] = {}
        self._matrix_cache: dict[int, SparseMatrix] = {}
        self._cohomology_cache: dict[int, CohomologyBasis] = {}
        if check:
            self.validate()

    # -- validation ------------------------------------------------------

    def validate(self) -> CDGA:
        """Check degrees and d^2 = 0; returns self, raises otherwise."""
        alg = self.algebra
        for idx, value in self._d_gen.items():
            gen = alg.generators[idx]
            if value.degree != gen.degree + 1:
                raise DegreeError(
                    f"d({gen.name}) has degree {value.degree}, expected {gen.degree + 1}"
                )
        for idx in self._d_gen:
            gen = alg.generators[idx]
            residual = self.d(self._d_gen[idx])
            if not residual.is_zero():
                raise NotADifferential(gen.name, residual)
        return self

    @property
    def is_minimal(self) -> bool:
        """True when every differential value is a sum of products of generators."""
        return all(
            all(len(m) >= 2 for m in v.terms) for v in self._d_gen.values()
        )

    def differential(self) -> dict[str, Multivector]:
        """Nonzero generator images, keyed by name in declaration order."""
        return {
            self.algebra.generators[i].name: self._d_gen[i]
            for i in sorted(self._d_gen)
        }

    # -- the differential ------------------------------------------------

    def d_generator(self, name: str) -> Multivector:
        idx = self.algebra.index_of(name)
        return self._d_gen.get(idx, self.algebra.zero())

    def _d_monomial(self, mono: Monomial) -> Multivector:
        cached = self._d_mono_cache.get(mono)
        if cached is not None:
            return cached
        alg = self.algebra
        out = alg.zero()
        sign = 1
        for pos, idx in enumerate(mono):
            dg = self._d_gen.get(idx)
            if dg is not None:
                term = alg.monomial(mono[:pos]) * dg * alg.monomial(mono[pos + 1 :])
                out = out + (term if sign > 0 else -term)
            if alg._parity[idx]:
                sign = -sign
        self._d_mono_cache[mono] = out
        return out

    def d(self, v: Multivector) -> Multivector:
        """Leibniz extension of the generator differential."""
        out = self.algebra.zero()
        for mono, c in v.terms.items():
            out = out + self._d_monomial(mono).scale(c)
        return out

    def is_cocycle(self, v: Multivector) -> bool:
        return self.d(v).is_zero()

    # -- matrices and cohomology -----------------------------------------

    def differential_matrix(self, q: int) -> SparseMatrix:
        """Matrix of d from basis(q) to basis(q+1), column-major."""
        cached = self._matrix_cache.get(q)
        if cached is not None:
            return cached
        alg = self.algebra
        domain = alg.basis(q)
        target_index = alg.basis_index(q + 1)
        cols: list[Vec] = []
        for mono in domain:
            img = self._d_monomial(mono)
            cols.append({target_index[m]: c for m, c in img.terms.items()})
        mat = SparseMatrix(len(target_index), len(domain), cols)
        self._matrix_cache[q] = mat
        return mat

    def cohomology(self, q: int) -> CohomologyBasis:
        cached = self._cohomology_cache.get(q)
        if cached is not None:
            return cached
        basis = CohomologyBasis(self, q)
        self._cohomology_cache[q] = basis
        return basis

    def betti(self, q: int) -> int:
        return self.cohomology(q).dim

    def betti_numbers(self, q_max: int) -> list[int]:
        return [self.betti(q) for q in range(q_max + 1)]

    def is_coboundary(self, v: Multivector) -> Multivector | None:
        """A primitive u with d(u) = v, or None; v must be a cocycle."""
        if v.is_zero():
            return self.algebra.zero()
        if not self.is_cocycle(v):
            raise NotACocycle(f"{v} is not closed")
        q = v.degree
        coords = dict_coords(self.algebra, v, q)
        span = Span(self.algebra.dim(q))
        for col in self.differential_matrix(q - 1).cols:
            span.add(col)
        coeffs = span.express(coords)
        if coeffs is None:
            return None
        out = self.algebra.zero()
        for mono, c in zip(self.algebra.basis(q - 1), coeffs):
            if c:
                out = out + self.algebra.monomial(mono).scale(c)
        return out


def dict_coords(alg: Algebra, v: Multivector, q: int) -> Vec:
    """Sparse coordinate dict of a homogeneous element over basis(q)."""
    index = alg.basis_index(q)
    out: Vec = {}
    for mono, c in v.terms.items():
        pos = index.get(mono)
        if pos is None:
            raise DegreeError(f"term outside degree {q}")
        out[pos] = c
    return out


class CohomologyBasis:
    """Deterministic basis of H^q with exact reduction onto class coordinates.

    Representatives are cocycles in reduced echelon position modulo the
    coboundary space; ``reduction`` is the induced linear map sending a
    cocycle to its coordinates over them.
    """

    def __init__(self, cdga: CDGA, degree: int):
        self.cdga = cdga
        self.degree = degree
        alg = cdga.algebra
        n = alg.dim(degree)
        self._image = Echelon(n)
        for col in cdga.differential_matrix(degree - 1).cols:
            self._image.add(col)
        self._reps = Echelon(n)
        for z in cdga.differential_matrix(degree).kernel():
            self._reps.add(self._image.reduce_fraction(z))
        self.representatives = tuple(
            alg.from_coordinates(
                degree, [Fraction(row.get(j, 0)) for j in range(n)]
            )
            for row in self._reps.rows
        )

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def reduction(self, v: Multivector) -> list[Fraction]:
        """Class coordinates of a cocycle over the representatives."""
        if not self.cdga.is_cocycle(v):
            raise NotACocycle(f"{v} is not closed")
        if v.is_zero():
            return [Fraction(0)] * self.dim
        if v.degree != self.degree:
            raise DegreeError(f"expected degree {self.degree}, got {v.degree}")
        w = self._image.reduce_fraction(dict_coords(self.cdga.algebra, v, self.degree))
        coeffs = []
        for pivot, row in zip(self._reps.pivots, self._reps.rows):
            c = w.get(pivot, Fraction(0)) / row[pivot]
            coeffs.append(c)
            if c:
                for j, bv in row.items():
                    cur = w.get(j, Fraction(0)) - c * bv
                    if cur:
                        w[j] = cur
                    else:
                        w.pop(j, None)
        if w:
            raise RuntimeError("reduction did not terminate on a cocycle")
        return coeffs

    def class_of(self, coeffs: Sequence[Fraction | int]) -> Multivector:
        """Cocycle representative with the given class coordinates."""
        out = self.cdga.algebra.zero()
        for c, rep in zip(coeffs, self.representatives):
            if c:
                out = out + rep.scale(Fraction(c))
        return out


def hirsch_extend(
    base: CDGA,
    additions: Iterable[tuple[Generator | tuple | str, Multivector | str]],
) -> CDGA:
    """Adjoin free generators with closed transgressions from the base.

    Each addition is ``(generator, t)`` with ``d(new) = t`` and ``t`` a
    cocycle of the base whose degree exceeds the new generator's by one.
    A bare name infers the degree from the transgression.
    """
    alg = base.algebra
    new_gens: list[Generator] = []
    trans: list[Multivector] = []
    for spec, t in additions:
        if isinstance(t, str):
            t = alg.parse(t)
        if isinstance(spec, str):
            if t.is_zero():
                raise DegreeError(f"degree of {spec!r} cannot be inferred from a zero transgression")
            spec = Generator(spec, t.degree - 1)
        elif not isinstance(spec, Generator):
            spec = Generator(*spec)
        if not t.is_zero() and t.degree != spec.degree + 1:
            raise DegreeError(
                f"transgression of {spec.name!r} has degree {t.degree}, expected {spec.degree + 1}"
            )
        if not base.is_cocycle(t):
            raise NotACocycle(f"transgression of {spec.name!r} is not closed")
        new_gens.append(spec)
        trans.append(t)

    extended = Algebra(list(alg.generators) + new_gens)
    differential: dict[str, Multivector] = {
        alg.generators[i].name: Multivector(extended, dict(v.terms))
        for i, v in base._d_gen.items()
    }
    for gen, t in zip(new_gens, trans):
        differential[gen.name] = Multivector(extended, dict(t.terms))
    return CDGA(extended, differential)


def tensor(a: CDGA, b: CDGA) -> CDGA:
    """Tensor product CDGA; clashing names from the right factor gain primes."""
    taken = {g.name for g in a.algebra.generators}
    renamed: list[Generator] = []
    for g in b.algebra.generators:
        name = g.name
        while name in taken:
            name += "'"
        taken.add(name)
        renamed.append(Generator(name, g.degree, g.word))
    combined = Algebra(list(a.algebra.generators) + renamed)
    offset = len(a.algebra.generators)
    differential: dict[str, Multivector] = {
        a.algebra.generators[i].name: Multivector(combined, dict(v.terms))
        for i, v in a._d_gen.items()
    }
    for i, v in b._d_gen.items():
        shifted = {tuple(offset + j for j in mono): c for mono, c in v.terms.items()}
        differential[renamed[i].name] = Multivector(combined, shifted)
    return CDGA(combined, differential)
