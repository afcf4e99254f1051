"""Partial formality analysis for degree-1-generated minimal models.

The engine combines four independent mechanisms.  Necessary obstructions
come from degree-1 generation of the cohomology ring and from resonance
varieties; a sufficient certificate checks that the ideal of a chosen
complement of the closed generators meets cocycles only in coboundaries;
for 2-step models the generation test is a complete decision; and a
symbolic chain-map solver searches for (or refutes) normalized morphisms
from the degree-1 bigraded model of the cohomology into the model itself.
All verdicts are sound: a failed certificate never becomes a negative
verdict and an unverified search never becomes a positive one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cdga import CDGA, dict_coords, hirsch_extend
from .gca import Algebra, Generator, Monomial, Multivector
from .linalg import Span, SparseMatrix, Vec, intersect_spans
from .resonance import decide_r11_trivial, find_resonance_point
from .ring import (
    CutoffError,
    GenerationVerdict,
    RingElement,
    RingPresentation,
    from_cdga,
    generated_in_degree_one_upto,
)

FORMAL = "CertifiedKFormal"
NOT_FORMAL = "CertifiedNotKFormal"
INCONCLUSIVE = "Inconclusive"
OVERALL_FORMAL = "CertifiedFormal"
OVERALL_NOT_FORMAL = "CertifiedNotFormal"

RULES = (
    "generation",
    "resonance",
    "prop-art-certificate",
    "two-step-decision",
    "rationally-abelian",
    "prop-k+2",
    "morphism-solver",
)


class NotTwoStep(ValueError):
    """The differential is not valued in the closed degree-1 part squared."""


class EliminationBoundError(RuntimeError):
    """The symbolic solver refused a system with too many unknowns."""

    def __init__(self, unknowns: int, bound: int, residual: str):
        super().__init__(
            f"elimination over {unknowns} unknowns exceeds the bound {bound}"
        )
        self.unknowns = unknowns
        self.bound = bound
        self.residual = residual


# -- report ---------------------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    """One applied rule with the degree it speaks to and its payload."""

    rule: str
    k: int
    kind: str  # "formal" | "not_formal" | "info"
    detail: str
    data: dict | None = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.kind not in ("formal", "not_formal", "info"):
            raise ValueError(f"unknown evidence kind {self.kind!r}")


class FormalityReport:
    """Per-degree trichotomy verdicts with monotone, conflict-free merging."""

    def __init__(self, k_max: int):
        if k_max < 0:
            raise ValueError("k_max must be nonnegative")
        self.k_max = k_max
        self._verdicts = [INCONCLUSIVE] * (k_max + 1)
        self.evidence: list[Evidence] = []
        self.overall = INCONCLUSIVE

    def verdict(self, k: int) -> str:
        if not 0 <= k <= self.k_max:
            raise ValueError(f"degree {k} outside 0..{self.k_max}")
        return self._verdicts[k]

    def verdicts(self) -> list[str]:
        return list(self._verdicts)

    def mark_formal_upto(self, k: int, ev: Evidence) -> None:
        for j in range(0, min(k, self.k_max) + 1):
            if self._verdicts[j] == NOT_FORMAL:
                raise RuntimeError(
                    f"conflicting certificates: degree {j} is already not formal"
                )
            self._verdicts[j] = FORMAL
        self.evidence.append(ev)

    def mark_not_formal_from(self, k: int, ev: Evidence) -> None:
        for j in range(max(k, 0), self.k_max + 1):
            if self._verdicts[j] == FORMAL:
                raise RuntimeError(
                    f"conflicting certificates: degree {j} is already formal"
                )
            self._verdicts[j] = NOT_FORMAL
        self.evidence.append(ev)

    def add_info(self, ev: Evidence) -> None:
        self.evidence.append(ev)

    @property
    def best_formal(self) -> int | None:
        best = None
        for k, v in enumerate(self._verdicts):
            if v == FORMAL:
                best = k
        return best

    @property
    def least_not_formal(self) -> int | None:
        for k, v in enumerate(self._verdicts):
            if v == NOT_FORMAL:
                return k
        return None

    def sorted_evidence(self) -> list[Evidence]:
        return sorted(self.evidence, key=lambda e: (e.rule, e.k, e.kind, e.detail))


# -- model preconditions --------------------------------------------------


def _nilpotent_order(c: CDGA) -> list[int] | None:
    """A generator order where each differential uses earlier generators only."""
    n = len(c.algebra.generators)
    support: dict[int, set[int]] = {}
    for i, g in enumerate(c.algebra.generators):
        dv = c.d_generator(g.name)
        support[i] = {j for mono in dv.terms for j in mono}
    placed: set[int] = set()
    order: list[int] = []
    while len(order) < n:
        progress = False
        for i in range(n):
            if i in placed:
                continue
            if support[i] <= placed:
                order.append(i)
                placed.add(i)
                progress = True
        if not progress:
            return None
    return order


def _require_model(c: CDGA) -> None:
    """Reject inputs outside the engine's scope with a clear message."""
    if any(g.degree != 1 for g in c.algebra.generators):
        raise ValueError("model must be generated in degree 1")
    if not c.is_minimal:
        raise ValueError("model must be minimal (decomposable differential)")
    if _nilpotent_order(c) is None:
        raise ValueError(
            "model must be nilpotent: no generator order makes every "
            "differential depend on earlier generators only"
        )


# -- decompositions of the degree-1 part ----------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Closed part and chosen complement of the degree-1 generator space."""

    kernel: tuple[Vec, ...]
    complement: tuple[Vec, ...]

    def complement_names(self, alg: Algebra) -> tuple[str, ...] | None:
        """Generator names when every complement vector is a unit vector."""
        names = []
        for v in self.complement:
            items = [(j, c) for j, c in v.items() if c]
            if len(items) != 1 or items[0][1] != 1:
                return None
            names.append(alg.generators[items[0][0]].name)
        return tuple(names)


def default_decomposition(c: CDGA) -> Decomposition:
    """Closed kernel plus the unit-vector complement in declaration order."""
    span = Span(len(c.algebra.generators))
    for vec in c.differential_matrix(1).kernel():
        span.add(vec)
    pivots = set(span.pivot_columns())
    complement = tuple(
        {j: Fraction(1)}
        for j in range(len(c.algebra.generators))
        if j not in pivots
    )
    return Decomposition(tuple(span.basis_vectors()), complement)


def decomposition_from_names(c: CDGA, names: Sequence[str]) -> Decomposition:
    """Complement picked as a set of generators; validated against the kernel."""
    idx = [c.algebra.index_of(n) for n in names]
    dec = Decomposition(
        default_decomposition(c).kernel,
        tuple({j: Fraction(1)} for j in idx),
    )
    validate_decomposition(c, dec)
    return dec


def validate_decomposition(c: CDGA, dec: Decomposition) -> None:
    n = len(c.algebra.generators)
    nullity = n - c.differential_matrix(1).rank()
    kspan = Span(n)
    for vec in dec.kernel:
        v = c.algebra.from_coordinates(1, [vec.get(j, Fraction(0)) for j in range(n)])
        if not c.d(v).is_zero():
            raise ValueError("invalid decomposition: kernel vector is not closed")
        kspan.add(vec)
    if kspan.dim != nullity or len(dec.kernel) != nullity:
        raise ValueError("invalid decomposition: kernel part has wrong dimension")
    total = Span(n)
    for vec in dec.kernel + dec.complement:
        if not total.add(vec):
            raise ValueError("invalid decomposition: vectors are dependent")
    if total.dim != n:
        raise ValueError("invalid decomposition: parts do not span degree 1")


# -- rules ----------------------------------------------------------------


def full_formality(c: CDGA) -> str:
    """Formality of the whole model: exactly the vanishing differential."""
    _require_model(c)
    zero = all(v.is_zero() for v in c.differential().values())
    return OVERALL_FORMAL if zero else OVERALL_NOT_FORMAL


def obstruction_generation(c: CDGA, k: int) -> Evidence | None:
    """Failure of degree-1 generation below degree k+2, if any."""
    _require_model(c)
    if k < 0:
        raise ValueError("k must be nonnegative")
    r = from_cdga(c, k + 1)
    v = generated_in_degree_one_upto(r, k + 1)
    if v.generated:
        return None
    q = v.failure_degree
    return Evidence(
        "generation",
        q - 1,
        "not_formal",
        f"H^{q} is not generated by degree-one classes "
        f"(cokernel dimension {v.cokernel_dim})",
        {"failure_degree": q, "cokernel_dim": v.cokernel_dim},
    )


def obstruction_resonance(
    c: CDGA, s: int, *, seed: int = 0, budget: int = 60
) -> Evidence | None:
    """A nontrivial resonance point in some degree <= s, if one is found.

    Degree 1 runs the exact decision; higher degrees only sample, so absence
    of evidence there proves nothing.
    """
    _require_model(c)
    if s < 1:
        return None
    r = from_cdga(c, max(2, min(s + 1, _top_degree(c))))
    verdict = decide_r11_trivial(r, seed=seed)
    if verdict.kind == "witness":
        point = verdict.witness.point
        return Evidence(
            "resonance",
            1,
            "not_formal",
            "nonzero point of the degree-1 resonance variety",
            {"degree": 1, "point": [str(x) for x in point]},
        )
    if verdict.nontrivial_certified:
        return Evidence(
            "resonance",
            1,
            "not_formal",
            "degree-1 resonance variety is certified nontrivial over the "
            "algebraic closure",
            {"degree": 1},
        )
    for i in range(2, s + 1):
        if i + 1 > r.max_degree:
            break
        point = find_resonance_point(r, i, seed=seed, budget=budget)
        if point is not None:
            return Evidence(
                "resonance",
                i,
                "not_formal",
                f"nonzero point of the degree-{i} resonance variety",
                {"degree": i, "point": [str(x) for x in point]},
            )
    return None


def _top_degree(c: CDGA) -> int:
    top = c.algebra.top_degree()
    return top if top is not None else 10**9


def certify_prop_art(
    c: CDGA, k: int, dec: Decomposition | None = None
) -> Evidence | None:
    """Sufficient certificate: the complement ideal meets cocycles in exacts.

    Checks, for every degree q <= k+1, that each cocycle inside the ideal
    generated by the complement of the closed degree-1 part is a coboundary.
    Passing certifies k-formality; failing certifies nothing.
    """
    _require_model(c)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if dec is None:
        dec = default_decomposition(c)
    validate_decomposition(c, dec)
    alg = c.algebra
    n = len(alg.generators)
    complement_mvs = [
        alg.from_coordinates(1, [v.get(j, Fraction(0)) for j in range(n)])
        for v in dec.complement
    ]
    top = _top_degree(c)
    for q in range(1, min(k + 1, top) + 1):
        ideal_rows: list[Vec] = []
        for nv in complement_mvs:
            for mono in alg.basis(q - 1):
                w = nv * alg.monomial(mono)
                if not w.is_zero():
                    ideal_rows.append(dict_coords(alg, w, q))
        cocycle_rows = c.differential_matrix(q).kernel()
        inter = intersect_spans(ideal_rows, cocycle_rows, alg.dim(q))
        image = Span(alg.dim(q), c.differential_matrix(q - 1).cols)
        for vec in inter:
            if not image.contains(vec):
                return None
    names = dec.complement_names(alg)
    return Evidence(
        "prop-art-certificate",
        k,
        "formal",
        "every cocycle in the ideal of the chosen complement is exact "
        f"up to degree {k + 1}",
        {"complement": list(names) if names else "custom vectors"},
    )


def is_twostep(c: CDGA) -> bool:
    """Whether the differential lands in the square of the closed part."""
    _require_model(c)
    alg = c.algebra
    n = len(alg.generators)
    kernel = c.differential_matrix(1).kernel()
    closed = [
        alg.from_coordinates(1, [v.get(j, Fraction(0)) for j in range(n)])
        for v in kernel
    ]
    wedge = Span(alg.dim(2))
    for a in range(len(closed)):
        for b in range(a + 1, len(closed)):
            w = closed[a] * closed[b]
            if not w.is_zero():
                wedge.add(dict_coords(alg, w, 2))
    return all(
        wedge.contains(dict_coords(alg, dv, 2))
        for dv in c.differential().values()
        if not dv.is_zero()
    )


@dataclass(frozen=True)
class TwoStepDecision:
    """Exact formality decision available for 2-step models."""

    k: int
    verdict: str
    generation: GenerationVerdict


def decide_twostep(c: CDGA, k: int) -> TwoStepDecision:
    """k-formality of a 2-step model, equivalent to degree-1 generation."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not is_twostep(c):
        raise NotTwoStep(
            "differential leaves the square of the closed degree-1 part"
        )
    r = from_cdga(c, k + 1)
    v = generated_in_degree_one_upto(r, k + 1)
    return TwoStepDecision(k, FORMAL if v.generated else NOT_FORMAL, v)


def infer_prop_k2(
    report: FormalityReport, ring: RingPresentation, k: int
) -> Evidence | None:
    """Upgrade a certified k-formal report to formal when H^(>=k+2) vanishes."""
    if not 0 <= k <= report.k_max:
        raise ValueError(f"degree {k} outside 0..{report.k_max}")
    if report.verdict(k) != FORMAL:
        return None
    top = ring.source.algebra.top_degree()
    if top is None:
        return None
    if top > ring.max_degree:
        raise CutoffError(
            f"need cohomology up to degree {top} but cutoff is {ring.max_degree}"
        )
    if any(ring.dim(q) != 0 for q in range(k + 2, top + 1)):
        return None
    if report.overall == OVERALL_NOT_FORMAL:
        raise RuntimeError("conflicting certificates for overall formality")
    ev = Evidence(
        "prop-k+2",
        report.k_max,
        "formal",
        f"certified {k}-formal with H^q = 0 for every q >= {k + 2}",
        {"k": k, "top_degree": top},
    )
    report.mark_formal_upto(report.k_max, ev)
    report.overall = OVERALL_FORMAL
    return ev


# -- chain-map targets ----------------------------------------------------


class _CdgaTarget:
    """A CDGA viewed as the target of chain maps."""

    kind = "cdga"

    def __init__(self, c: CDGA):
        self.cdga = c
        self.alg = c.algebra

    def zero(self):
        return self.alg.zero()

    def unit(self):
        return self.alg.one()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a.scale(c)

    def equal(self, a, b):
        return (a - b).is_zero()

    def check_max(self, q: int) -> None:
        pass

    def h_dim(self, q: int) -> int:
        return self.cdga.cohomology(q).dim

    def class_coords(self, elem, q: int) -> list[Fraction]:
        if elem.is_zero():
            return [Fraction(0)] * self.h_dim(q)
        return self.cdga.cohomology(q).reduction(elem)

    def h_rep(self, q: int, i: int):
        return self.cdga.cohomology(q).representatives[i]

    def lift_exact(self, elem):
        return self.cdga.is_coboundary(elem)

    def d(self, elem):
        return self.cdga.d(elem)

    # polynomial-coefficient support
    def ambient_keys(self, q: int) -> list:
        return list(self.alg.basis(q))

    def key_label(self, key) -> str:
        return str(self.alg.monomial(key))

    def unit_key(self):
        return ()

    def pair_product(self, ka, kb):
        res = self.alg.monomial_product(ka, kb)
        if res is None:
            return []
        sign, mono = res
        return [(mono, Fraction(sign))]

    def d_key(self, key):
        dv = self.cdga._d_monomial(key)
        return list(dv.terms.items())

    def elem_terms(self, elem) -> dict:
        return dict(elem.terms)

    def elem_from_terms(self, terms: dict):
        out = self.alg.zero()
        for key, c in terms.items():
            if c:
                out = out + self.alg.monomial(key).scale(c)
        return out

    def exact_columns(self, q: int):
        """Pairs (primitive element, differential coordinates in degree q)."""
        out = []
        for mono in self.alg.basis(q - 1):
            dv = self.cdga._d_monomial(mono)
            if not dv.is_zero():
                out.append((self.alg.monomial(mono), dict(dv.terms)))
        return out

    def kernel_elements(self, q: int):
        basis = self.alg.basis(q)
        out = []
        for vec in self.cdga.differential_matrix(q).kernel():
            out.append(
                self.alg.from_coordinates(
                    q, [vec.get(i, Fraction(0)) for i in range(len(basis))]
                )
            )
        return out

    def gen_key(self, name: str):
        return (self.alg.index_of(name),)

    def describe(self) -> str:
        return f"CDGA on {len(self.alg.generators)} generators"


class _RingTarget:
    """A cohomology ring with zero differential as a chain-map target."""

    kind = "ring"

    def __init__(self, r: RingPresentation):
        self.ring = r

    def zero(self):
        return RingElement(self.ring, {})

    def unit(self):
        return self.ring.unit()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a.scale(c)

    def equal(self, a, b):
        return (a - b).is_zero()

    def check_max(self, q: int) -> None:
        if q > self.ring.max_degree:
            raise CutoffError(
                f"need ring degree {q} but cutoff is {self.ring.max_degree}"
            )

    def h_dim(self, q: int) -> int:
        return self.ring.dim(q)

    def class_coords(self, elem, q: int) -> list[Fraction]:
        part = elem.part(q)
        return [part.get(i, Fraction(0)) for i in range(self.ring.dim(q))]

    def h_rep(self, q: int, i: int):
        return self.ring.h_class(q, i)

    def lift_exact(self, elem):
        return self.zero() if elem.is_zero() else None

    def d(self, elem):
        return self.zero()

    def ambient_keys(self, q: int) -> list:
        return [(q, i) for i in range(self.ring.dim(q))]

    def key_label(self, key) -> str:
        q, i = key
        return f"[{self.ring.labels(q)[i]}]"

    def unit_key(self):
        return (0, 0)

    def pair_product(self, ka, kb):
        qa, ia = ka
        qb, ib = kb
        coords = self.ring.product_coords(qa, ia, qb, ib)
        return [((qa + qb, j), c) for j, c in sorted(coords.items())]

    def d_key(self, key):
        return []

    def elem_terms(self, elem) -> dict:
        out = {}
        for q, part in elem.parts.items():
            for i, c in part.items():
                out[(q, i)] = c
        return out

    def elem_from_terms(self, terms: dict):
        parts: dict[int, Vec] = {}
        for (q, i), c in terms.items():
            if c:
                parts.setdefault(q, {})[i] = c
        return RingElement(self.ring, parts)

    def exact_columns(self, q: int):
        return []

    def kernel_elements(self, q: int):
        return [self.ring.h_class(q, i) for i in range(self.ring.dim(q))]

    def gen_key(self, name: str):
        for i, lab in enumerate(self.ring.labels(1)):
            if lab == name:
                return (1, i)
        raise ValueError(f"no degree-1 class labeled {name!r}")

    def describe(self) -> str:
        return f"ring with Betti numbers {self.ring.dims()}"


def _wrap_target(target):
    if isinstance(target, CDGA):
        return _CdgaTarget(target)
    if isinstance(target, RingPresentation):
        return _RingTarget(target)
    raise TypeError(f"unsupported chain-map target {type(target).__name__}")


def apply_chain_map(images: Sequence, v: Multivector, target) -> object:
    """Multiplicative extension of generator images to a multivector."""
    tgt = _wrap_target(target) if not hasattr(target, "unit_key") else target
    out = tgt.zero()
    for mono, c in sorted(v.terms.items()):
        cur = tgt.unit()
        for i in mono:
            cur = tgt.mul(cur, images[i])
        out = tgt.add(out, tgt.scale(cur, c))
    return out


# -- minimal model extension ----------------------------------------------


@dataclass
class ExtensionResult:
    """A partial minimal model extended by one degree, wave by wave."""

    cdga: CDGA
    images: dict[str, object]
    waves: list[list[str]]
    truncated: bool
    snapshots: list[CDGA]


def _unique_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name = name + "_"
    taken.add(name)
    return name


def extend_minimal_model(
    stage: CDGA,
    images: Mapping[str, object],
    target: CDGA | RingPresentation,
    k: int,
    *,
    stage_cap: int = 8,
    namer=None,
) -> ExtensionResult:
    """Add degree-(k+1) generators making the map iso through k+1, mono at k+2.

    Wave 0 adds closed generators covering the cokernel in degree k+1; the
    following waves transgress kernel classes one degree higher until the
    kernel empties or the wave cap is hit (reported as truncation).  Every
    added generator keeps the chain-map property of the extended images.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    tgt = _wrap_target(target)
    tgt.check_max(k + 2)
    taken = {g.name for g in stage.algebra.generators}
    img_by_name = dict(images)
    missing = taken - set(img_by_name)
    if missing:
        raise ValueError(f"missing images for generators {sorted(missing)}")

    def img_list(c: CDGA) -> list:
        return [img_by_name[g.name] for g in c.algebra.generators]

    # precondition: iso below, mono at k+1
    for q in range(1, k + 2):
        coh = stage.cohomology(q)
        cols = [
            {
                i: c
                for i, c in enumerate(
                    tgt.class_coords(apply_chain_map(img_list(stage), rep, tgt), q)
                )
                if c
            }
            for rep in coh.representatives
        ]
        rank = SparseMatrix(tgt.h_dim(q), coh.dim, cols).rank()
        if q <= k and (rank < coh.dim or rank < tgt.h_dim(q)):
            raise ValueError(
                f"map is not a cohomology isomorphism in degree {q}"
            )
        if q == k + 1 and rank < coh.dim:
            raise ValueError(
                f"map is not injective on cohomology in degree {q}"
            )

    def default_namer(wave: int, idx: int) -> str:
        return f"v{k + 1}_{wave}_{idx}"

    name_for = namer or default_namer

    # wave 0: cover the cokernel in degree k+1 with closed generators
    coh = stage.cohomology(k + 1)
    image_span = Span(tgt.h_dim(k + 1))
    for rep in coh.representatives:
        image_span.add(
            {
                i: c
                for i, c in enumerate(
                    tgt.class_coords(apply_chain_map(img_list(stage), rep, tgt), k + 1)
                )
                if c
            }
        )
    pivots = set(image_span.pivot_columns())
    additions = []
    wave_names: list[str] = []
    for idx, j in enumerate(
        j for j in range(tgt.h_dim(k + 1)) if j not in pivots
    ):
        name = _unique_name(name_for(0, idx), taken)
        additions.append((Generator(name, k + 1, word=0), stage.algebra.zero()))
        img_by_name[name] = tgt.h_rep(k + 1, j)
        wave_names.append(name)
    cur = hirsch_extend(stage, additions)
    waves = [wave_names]
    snapshots = [cur]

    truncated = True
    for wave in range(1, stage_cap + 1):
        coh2 = cur.cohomology(k + 2)
        cols = [
            {
                i: c
                for i, c in enumerate(
                    tgt.class_coords(apply_chain_map(img_list(cur), rep, tgt), k + 2)
                )
                if c
            }
            for rep in coh2.representatives
        ]
        kern = SparseMatrix(tgt.h_dim(k + 2), coh2.dim, cols).kernel()
        if not kern:
            truncated = False
            break
        additions = []
        wave_names = []
        for idx, vec in enumerate(kern):
            trans = coh2.class_of([vec.get(t, Fraction(0)) for t in range(coh2.dim)])
            name = _unique_name(name_for(wave, idx), taken)
            val = apply_chain_map(img_list(cur), trans, tgt)
            lifted = tgt.lift_exact(val)
            if lifted is None:
                raise RuntimeError(
                    "kernel transgression image is not exact in the target"
                )
            additions.append((Generator(name, k + 1, word=wave), trans))
            img_by_name[name] = lifted
            wave_names.append(name)
        cur = hirsch_extend(cur, additions)
        waves.append(wave_names)
        snapshots.append(cur)

    return ExtensionResult(cur, img_by_name, waves, truncated, snapshots)


# -- bigraded tower -------------------------------------------------------


@dataclass
class BigradedTower:
    """Degree-1 stages of the bigraded model of a ring with zero differential."""

    ring: RingPresentation
    cdga: CDGA
    images: dict[str, RingElement]
    stages: list[list[str]]
    snapshots: list[CDGA]
    stabilized: bool

    @property
    def stage_dims(self) -> list[int]:
        return [len(s) for s in self.stages]

    @property
    def total_dim(self) -> int:
        return sum(self.stage_dims)


def bigraded_tower(r: RingPresentation, stage_cap: int = 4) -> BigradedTower:
    """Build degree-1 stages: closed classes first, then transgressed kernels.

    Stage 0 carries one closed generator per degree-1 class; stage i+1
    transgresses the kernel of the stage map on degree-2 cohomology.  The
    tower either stabilizes (empty kernel) or is truncated at the cap.
    """
    if r.max_degree < 2:
        raise CutoffError("bigraded tower needs a ring cutoff of at least 2")
    labels = r.labels(1)
    usable = len(set(labels)) == len(labels) and all(
        Generator("x", 1) and _valid_name(s) for s in labels
    )

    def namer(wave: int, idx: int) -> str:
        if wave == 0:
            return labels[idx] if usable else f"a{idx}"
        return f"w{wave}_{idx}"

    empty = CDGA(Algebra([]))
    ext = extend_minimal_model(
        empty, {}, r, 0, stage_cap=stage_cap, namer=namer
    )
    return BigradedTower(
        r, ext.cdga, ext.images, ext.waves, ext.snapshots, not ext.truncated
    )


def _valid_name(s: str) -> bool:
    import re

    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", s))


# -- sparse polynomials over the solver unknowns --------------------------

Poly = dict  # monomial (sorted tuple of unknown indices) -> Fraction


def _p_const(c) -> Poly:
    c = Fraction(c)
    return {(): c} if c else {}


def _p_var(i: int) -> Poly:
    return {(i,): Fraction(1)}


def _p_add_into(dst: Poly, src: Poly, factor: Fraction = Fraction(1)) -> None:
    for key, c in src.items():
        cur = dst.get(key, Fraction(0)) + c * factor
        if cur:
            dst[key] = cur
        else:
            dst.pop(key, None)


def _p_scale(p: Poly, c: Fraction) -> Poly:
    c = Fraction(c)
    if not c:
        return {}
    return {key: v * c for key, v in p.items()}


def _p_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(sorted(ka + kb))
            cur = out.get(key, Fraction(0)) + ca * cb
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
    return out


def _p_degree(p: Poly) -> int:
    return max((len(k) for k in p), default=0)


def _p_eval(p: Poly, vals: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for key, c in p.items():
        term = c
        for i in key:
            term *= vals[i]
        total += term
    return total


def _p_compose(p: Poly, subs: Sequence[Poly]) -> Poly:
    out: Poly = {}
    for key, c in p.items():
        term = _p_const(c)
        for i in key:
            term = _p_mul(term, subs[i])
        _p_add_into(out, term)
    return out


def _p_subst(p: Poly, var: int, value: Fraction) -> Poly:
    out: Poly = {}
    for key, c in p.items():
        count = sum(1 for i in key if i == var)
        rest = tuple(i for i in key if i != var)
        _p_add_into(out, {rest: c * value**count})
    return out


def _p_max_var_degree(p: Poly, var: int) -> int:
    return max((sum(1 for i in key if i == var) for key in p), default=0)


def _p_str(p: Poly, names: Sequence[str]) -> str:
    if not p:
        return "0"
    chunks = []
    for key in sorted(p, key=lambda k: (len(k), k)):
        c = p[key]
        mono = "*".join(names[i] for i in key) if key else "1"
        chunks.append(f"{c}*{mono}" if key else str(c))
    return " + ".join(chunks)


# -- the chain-map solver -------------------------------------------------


@dataclass(frozen=True)
class MapTemplate:
    """Affine family of candidate images: a base plus unknown directions."""

    base: object
    freedom: tuple = ()


@dataclass
class MapSolveResult:
    """Outcome of the symbolic search for a constrained chain map."""

    status: str  # "solution" | "unsatisfiable" | "unknown"
    assignment: dict[str, object] | None
    certificate: str | None
    unknowns: int
    equations: int
    detail: str = ""


class _ExactReducer:
    """Reduced echelon of the exact subspace in degree 2 with preimages."""

    def __init__(self, tgt):
        self.keys = tgt.ambient_keys(2)
        self.flat = {k: i for i, k in enumerate(self.keys)}
        self.rows: list[tuple[int, dict[int, Fraction], dict[int, Fraction]]] = []
        self.preimages: list[object] = []
        for col_id, (pre, coords) in enumerate(tgt.exact_columns(2)):
            row = {self.flat[k]: c for k, c in coords.items() if c}
            combo = {col_id: Fraction(1)}
            for pivot, prow, pcombo in self.rows:
                c = row.get(pivot)
                if c:
                    for j, v in prow.items():
                        cur = row.get(j, Fraction(0)) - c * v
                        if cur:
                            row[j] = cur
                        else:
                            row.pop(j, None)
                    for j, v in pcombo.items():
                        cur = combo.get(j, Fraction(0)) - c * v
                        if cur:
                            combo[j] = cur
                        else:
                            combo.pop(j, None)
            if not row:
                continue
            pivot = min(row)
            inv = Fraction(1) / row[pivot]
            row = {j: v * inv for j, v in row.items()}
            combo = {j: v * inv for j, v in combo.items()}
            for opivot, orow, ocombo in self.rows:
                c = orow.get(pivot)
                if c:
                    for j, v in row.items():
                        cur = orow.get(j, Fraction(0)) - c * v
                        if cur:
                            orow[j] = cur
                        else:
                            orow.pop(j, None)
                    for j, v in combo.items():
                        cur = ocombo.get(j, Fraction(0)) - c * v
                        if cur:
                            ocombo[j] = cur
                        else:
                            ocombo.pop(j, None)
            self.rows.append((pivot, row, combo))
            self.preimages.append(pre)
        self.rows.sort(key=lambda r: r[0])

    def reduce(self, pel: dict) -> tuple[dict[int, Poly], dict]:
        """Split a poly-vector into exact-lift coefficients and a residual."""
        residual: dict[int, Poly] = {}
        for key, p in pel.items():
            if p:
                residual[self.flat[key]] = dict(p)
        lift: dict[int, Poly] = {}
        for pivot, row, combo in self.rows:
            p = residual.pop(pivot, None)
            if not p:
                continue
            for col, c in combo.items():
                cur = lift.setdefault(col, {})
                _p_add_into(cur, p, c)
            for j, v in row.items():
                if j == pivot:
                    continue
                cur = residual.setdefault(j, {})
                _p_add_into(cur, p, -v)
        residual = {j: p for j, p in residual.items() if p}
        lift = {c: p for c, p in lift.items() if p}
        return lift, {self.keys[j]: p for j, p in residual.items()}


class _LinearSystem:
    """Incremental reduced row echelon over the unknowns plus a constant."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: list[tuple[int, dict[int, Fraction], str]] = []

    def add(self, poly: Poly, note: str) -> str | None:
        row: dict[int, Fraction] = {}
        for key, c in poly.items():
            if len(key) > 1:
                raise ValueError("non-linear equation in linear solver")
            col = key[0] if key else self.nvars
            row[col] = row.get(col, Fraction(0)) + c
        row = {j: c for j, c in row.items() if c}
        for pivot, prow, _ in self.rows:
            c = row.get(pivot)
            if c:
                for j, v in prow.items():
                    cur = row.get(j, Fraction(0)) - c * v
                    if cur:
                        row[j] = cur
                    else:
                        row.pop(j, None)
        if not row:
            return None
        if set(row) == {self.nvars}:
            return note
        pivot = min(j for j in row if j != self.nvars)
        inv = Fraction(1) / row[pivot]
        row = {j: v * inv for j, v in row.items()}
        for _, orow, _ in self.rows:
            c = orow.get(pivot)
            if c:
                for j, v in row.items():
                    cur = orow.get(j, Fraction(0)) - c * v
                    if cur:
                        orow[j] = cur
                    else:
                        orow.pop(j, None)
        self.rows.append((pivot, row, note))
        self.rows.sort(key=lambda r: r[0])
        return None

    def solutions(self) -> tuple[list[Fraction], list[list[Fraction]]]:
        """Particular solution (free unknowns zero) and null-space basis."""
        pivots = {pivot for pivot, _, _ in self.rows}
        particular = [Fraction(0)] * self.nvars
        for pivot, row, _ in self.rows:
            particular[pivot] = -row.get(self.nvars, Fraction(0))
        null = []
        for free in range(self.nvars):
            if free in pivots:
                continue
            vec = [Fraction(0)] * self.nvars
            vec[free] = Fraction(1)
            for pivot, row, _ in self.rows:
                vec[pivot] = -row.get(free, Fraction(0))
            null.append(vec)
        return particular, null


def _sparse_det(entries: list[list[Poly]]) -> Poly:
    """Determinant of a matrix of polynomials by sparse Laplace expansion."""
    n = len(entries)

    def rec(row: int, used: int) -> Poly:
        if row == n:
            return _p_const(1)
        out: Poly = {}
        sign = 1
        for col in range(n):
            bit = 1 << col
            if used & bit:
                continue
            entry = entries[row][col]
            if entry:
                sub = rec(row + 1, used | bit)
                if sub:
                    _p_add_into(out, _p_mul(entry, sub), Fraction(sign))
            sign = -sign
        return out

    return rec(0, 0)


def _nonvanishing_point(product: Poly, nfree: int) -> list[Fraction] | None:
    """A rational point where a nonzero polynomial does not vanish."""
    if not product:
        return None
    point: list[Fraction] = []
    cur = product
    for var in range(nfree):
        deg = _p_max_var_degree(cur, var)
        for v in range(deg + 1):
            cand = _p_subst(cur, var, Fraction(v))
            if cand:
                point.append(Fraction(v))
                cur = cand
                break
        else:
            return None
    if not cur or cur.get(()) in (None, Fraction(0)):
        return None
    return point


def _invert_matrix(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a small square matrix over the rationals."""
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _h1_reduction_rows(tgt) -> list[tuple[object, list[Fraction]]]:
    """Linear functionals turning ambient degree-1 coords into class coords.

    Returns pairs (ambient key, row) so that the class vector of a closed
    degree-1 element with ambient coefficients c is sum_key row * c[key].
    For a ring target the ambient basis is already the class basis.
    """
    keys = tgt.ambient_keys(1)
    n1 = tgt.h_dim(1)
    if tgt.kind == "ring":
        return [(keys[i], [Fraction(int(i == j)) for j in range(n1)]) for i in range(n1)]
    reps = [
        dict_coords(tgt.alg, tgt.h_rep(1, i), 1) for i in range(n1)
    ]
    span = Span(len(keys))
    for vec in reps:
        span.add(vec)
    pivots = span.pivot_columns()
    sub = [[reps[i].get(p, Fraction(0)) for i in range(n1)] for p in pivots]
    left = _invert_matrix(sub)
    return [
        (keys[p], [left[j][t] for j in range(n1)])
        for t, p in enumerate(pivots)
    ]


def _h1_class_matrix_polys(
    h1_kernel: Sequence[Vec],
    images_pel: Sequence[dict],
    reducer: Sequence[tuple[object, list[Fraction]]],
    n_src: int,
) -> list[list[Poly]]:
    """Symbolic matrix of the induced map on degree-1 cohomology."""
    entries = []
    for vec in h1_kernel:
        ambient: dict[object, Poly] = {}
        for i in range(n_src):
            c = vec.get(i)
            if not c:
                continue
            for key, p in images_pel[i].items():
                cur = ambient.setdefault(key, {})
                _p_add_into(cur, p, c)
        row = [dict() for _ in range(len(h1_kernel))]
        for key, lrow in reducer:
            p = ambient.get(key)
            if not p:
                continue
            for j, c in enumerate(lrow):
                if c:
                    _p_add_into(row[j], p, c)
        entries.append(row)
    return entries


def dga_map_solve(
    source: CDGA,
    target: CDGA | RingPresentation,
    constraints: Mapping[str, object] | None = None,
    *,
    nonzero: Sequence[tuple[str, str]] = (),
    require_h1_iso: bool = False,
    elimination_bound: int = 12,
    seed: int = 0,
) -> MapSolveResult:
    """Search for a chain map respecting constraints, exactly.

    Fixed images and affine templates pin some generators; the rest receive
    a particular lift of their transgression image plus free closed
    directions.  Compatibility with both differentials becomes a polynomial
    system in the unknown coefficients: linear systems are eliminated
    exactly, and non-vanishing side conditions (specific coefficients, or
    invertibility on degree one) are settled symbolically on the solution
    family.  Non-linear systems go through a Groebner basis when the
    unknown count stays within the elimination bound.
    """
    if any(g.degree != 1 for g in source.algebra.generators):
        raise ValueError("source must be generated in degree 1")
    order = _nilpotent_order(source)
    if order is None:
        raise ValueError("source differential admits no nilpotent order")
    tgt = _wrap_target(target)
    tgt.check_max(2)
    constraints = dict(constraints or {})
    for name in constraints:
        source.algebra.index_of(name)

    param_names: list[str] = []

    def fresh(label: str) -> int:
        param_names.append(label)
        return len(param_names) - 1

    def as_element(value):
        if isinstance(value, str):
            if tgt.kind != "cdga":
                raise TypeError("string images need a CDGA target")
            return tgt.alg.parse(value)
        return value

    def const_pel(elem) -> dict:
        return {k: _p_const(c) for k, c in tgt.elem_terms(elem).items() if c}

    reducer = _ExactReducer(tgt)
    kernel_elems = tgt.kernel_elements(1)
    n_src = len(source.algebra.generators)
    images_pel: list[dict | None] = [None] * n_src
    equations: list[tuple[Poly, str]] = []

    def pel_mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ka, pa in a.items():
            for kb, pb in b.items():
                for key, c in tgt.pair_product(ka, kb):
                    cur = out.setdefault(key, {})
                    _p_add_into(cur, _p_mul(pa, pb), c)
        return {k: p for k, p in out.items() if p}

    def pel_apply(v: Multivector) -> dict:
        out: dict = {}
        for mono, c in sorted(v.terms.items()):
            cur = {tgt.unit_key(): _p_const(1)}
            for i in mono:
                cur = pel_mul(cur, images_pel[i])
            for key, p in cur.items():
                dst = out.setdefault(key, {})
                _p_add_into(dst, p, c)
        return {k: p for k, p in out.items() if p}

    def pel_d(pel: dict) -> dict:
        out: dict = {}
        for key, p in pel.items():
            for key2, c in tgt.d_key(key):
                dst = out.setdefault(key2, {})
                _p_add_into(dst, p, c)
        return {k: p for k, p in out.items() if p}

    for i in order:
        gen = source.algebra.generators[i]
        dv = source.d_generator(gen.name)
        rhs = pel_apply(dv)
        if gen.name in constraints:
            spec = constraints[gen.name]
            if isinstance(spec, MapTemplate):
                img = const_pel(as_element(spec.base))
                for t, direction in enumerate(spec.freedom):
                    delem = as_element(direction)
                    p = fresh(f"{gen.name}[{t}]")
                    for key, c in tgt.elem_terms(delem).items():
                        cur = img.setdefault(key, {})
                        _p_add_into(cur, _p_var(p), c)
            else:
                img = const_pel(as_element(spec))
            img = {k: p for k, p in img.items() if p}
            lhs = pel_d(img)
            diff_keys = set(lhs) | set(rhs)
            for key in sorted(diff_keys):
                poly = dict(lhs.get(key, {}))
                _p_add_into(poly, rhs.get(key, {}), Fraction(-1))
                if poly:
                    note = (
                        f"chain condition at {gen.name!r}, "
                        f"coordinate {tgt.key_label(key)}"
                    )
                    equations.append((poly, note))
        else:
            lift, residual = reducer.reduce(rhs)
            for key in sorted(residual):
                note = (
                    f"exactness obstruction at {gen.name!r}, "
                    f"coordinate {tgt.key_label(key)}"
                )
                equations.append((residual[key], note))
            img: dict = {}
            for col, poly in sorted(lift.items()):
                for key, c in tgt.elem_terms(reducer.preimages[col]).items():
                    cur = img.setdefault(key, {})
                    _p_add_into(cur, poly, c)
            for t, kelem in enumerate(kernel_elems):
                p = fresh(f"{gen.name}<{t}>")
                for key, c in tgt.elem_terms(kelem).items():
                    cur = img.setdefault(key, {})
                    _p_add_into(cur, _p_var(p), c)
            img = {k: p for k, p in img.items() if p}
        images_pel[i] = img

    nparams = len(param_names)

    # side conditions: explicit non-vanishing coefficients, optional iso
    conditions: list[tuple[Poly, str]] = []
    for gen_name, target_name in nonzero:
        i = source.algebra.index_of(gen_name)
        key = tgt.gen_key(target_name)
        poly = dict(images_pel[i].get(key, {}))
        conditions.append(
            (poly, f"coefficient of {target_name} in the image of {gen_name!r}")
        )
    h1_kernel: list[Vec] = []
    h1_reducer: list[tuple[object, list[Fraction]]] = []
    if require_h1_iso:
        h1_kernel = source.differential_matrix(1).kernel()
        n1 = len(h1_kernel)
        if n1 != tgt.h_dim(1):
            return MapSolveResult(
                "unsatisfiable",
                None,
                f"closed degree-one dimensions differ: source {n1}, "
                f"target {tgt.h_dim(1)}",
                nparams,
                len(equations),
            )
        h1_reducer = _h1_reduction_rows(tgt)
        if n1 <= 7:
            entries = _h1_class_matrix_polys(
                h1_kernel, images_pel, h1_reducer, n_src
            )
            det = _sparse_det(entries)
            conditions.append(
                (det, "determinant of the induced degree-one cohomology map")
            )
        # beyond that size invertibility is only checked on the found map

    linear = all(_p_degree(p) <= 1 for p, _ in equations) and all(
        _p_degree(p) <= 1
        for i in range(n_src)
        for p in images_pel[i].values()
    )

    if linear:
        system = _LinearSystem(nparams)
        for poly, note in equations:
            bad = system.add(poly, note)
            if bad is not None:
                return MapSolveResult(
                    "unsatisfiable",
                    None,
                    f"inconsistent equation: {bad}",
                    nparams,
                    len(equations),
                )
        particular, null = system.solutions()
        subs = [
            {
                key: val
                for key, val in [((), particular[i])]
                if val
            }
            for i in range(nparams)
        ]
        for t, vec in enumerate(null):
            for i in range(nparams):
                if vec[i]:
                    _p_add_into(subs[i], {(t,): vec[i]})
        product = _p_const(1)
        for poly, _ in conditions:
            product = _p_mul(product, _p_compose(poly, subs))
        if conditions and not product:
            notes = "; ".join(note for _, note in conditions)
            return MapSolveResult(
                "unsatisfiable",
                None,
                "every solution of the linear system violates a "
                f"non-vanishing condition ({notes})",
                nparams,
                len(equations),
            )
        if conditions:
            point = _nonvanishing_point(product, len(null))
            if point is None:
                return MapSolveResult(
                    "unknown",
                    None,
                    None,
                    nparams,
                    len(equations),
                    "no rational point satisfying the side conditions was found",
                )
            point = point + [Fraction(0)] * (len(null) - len(point))
        else:
            point = [Fraction(0)] * len(null)
        values = list(particular)
        for t, vec in enumerate(null):
            for i in range(nparams):
                values[i] += point[t] * vec[i]
    else:
        if nparams > elimination_bound:
            residual = "; ".join(
                f"{_p_str(p, param_names)} = 0" for p, _ in equations[:6]
            )
            raise EliminationBoundError(nparams, elimination_bound, residual)
        values = _nonlinear_solve(
            equations, conditions, nparams, param_names, seed
        )
        if values == "unsat":
            return MapSolveResult(
                "unsatisfiable",
                None,
                "the polynomial system has no solution over any field "
                "extension compatible with the side conditions",
                nparams,
                len(equations),
            )
        if values is None:
            return MapSolveResult(
                "unknown",
                None,
                None,
                nparams,
                len(equations),
                "no rational solution found within the search bounds",
            )

    assignment: dict[str, object] = {}
    images_exact: list[object] = [None] * n_src
    for i in range(n_src):
        terms = {
            key: _p_eval(p, values) for key, p in images_pel[i].items()
        }
        elem = tgt.elem_from_terms({k: c for k, c in terms.items() if c})
        images_exact[i] = elem
        assignment[source.algebra.generators[i].name] = elem
    for i in range(n_src):
        gen = source.algebra.generators[i]
        lhs = tgt.d(images_exact[i])
        rhs = apply_chain_map(images_exact, source.d_generator(gen.name), tgt)
        if not tgt.equal(lhs, rhs):
            raise RuntimeError(f"chain-map verification failed at {gen.name!r}")
    for poly, note in conditions:
        if _p_eval(poly, values) == 0:
            return MapSolveResult(
                "unknown",
                None,
                None,
                nparams,
                len(equations),
                f"found solution violates: {note}",
            )
    if require_h1_iso and len(h1_kernel) > 7:
        n1 = len(h1_kernel)
        span = Span(n1)
        for vec in h1_kernel:
            ambient: dict[object, Fraction] = {}
            for i in range(n_src):
                c = vec.get(i)
                if not c:
                    continue
                for key, cc in tgt.elem_terms(images_exact[i]).items():
                    ambient[key] = ambient.get(key, Fraction(0)) + c * cc
            row: Vec = {}
            for key, lrow in h1_reducer:
                c = ambient.get(key)
                if not c:
                    continue
                for j, l in enumerate(lrow):
                    if l:
                        row[j] = row.get(j, Fraction(0)) + l * c
            span.add(row)
        if span.dim < n1:
            return MapSolveResult(
                "unknown",
                None,
                None,
                nparams,
                len(equations),
                "found chain map is not invertible on degree-one cohomology",
            )
    return MapSolveResult(
        "solution", assignment, None, nparams, len(equations)
    )


def _nonlinear_solve(equations, conditions, nparams, param_names, seed):
    """Groebner-based decision with a bounded rational point search."""
    import sympy

    syms = sympy.symbols(f"q0:{max(nparams, 1)}")

    def to_expr(poly: Poly):
        expr = sympy.Integer(0)
        for key, c in poly.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for i in key:
                term *= syms[i]
            expr += term
        return expr

    exprs = [to_expr(p) for p, _ in equations if p]
    cond_exprs = [to_expr(p) for p, _ in conditions]
    if any(e == 0 for e in cond_exprs):
        return "unsat"
    system = list(exprs)
    extra = []
    if cond_exprs:
        t = sympy.Symbol("t_rab")
        prod = sympy.Integer(1)
        for e in cond_exprs:
            prod *= e
        system = system + [t * prod - 1]
        extra = [t]
    if system:
        gb = sympy.groebner(system, *(list(syms[:nparams]) + extra), order="grevlex")
        if list(gb.exprs) == [sympy.Integer(1)]:
            return "unsat"
    # bounded deterministic search for a rational witness
    if nparams <= 6:
        grid = range(-2, 3)
        for cand in itertools.product(grid, repeat=nparams):
            vals = [Fraction(v) for v in cand]
            if all(_p_eval(p, vals) == 0 for p, _ in equations) and all(
                _p_eval(p, vals) != 0 for p, _ in conditions
            ):
                return vals
    try:
        sols = sympy.solve(exprs, list(syms[:nparams]), dict=True)
    except NotImplementedError:
        sols = []
    for sol in sols:
        vals = []
        ok = True
        for i in range(nparams):
            v = sol.get(syms[i], sympy.Integer(0))
            if not v.is_Rational:
                ok = False
                break
            vals.append(Fraction(int(v.p), int(v.q)))
        if ok and all(_p_eval(p, vals) == 0 for p, _ in equations) and all(
            _p_eval(p, vals) != 0 for p, _ in conditions
        ):
            return vals
    return None


# -- the aggregate report -------------------------------------------------


def formality_report(
    c: CDGA,
    k_max: int,
    *,
    seed: int = 0,
    decomposition: Decomposition | None = None,
    tower_cap: int = 6,
    elimination_bound: int = 12,
) -> FormalityReport:
    """Run all applicable rules and merge their evidence monotonically.

    A vanishing differential settles everything at once.  Two-step models
    get the exact generation decision.  Everything else collects sufficient
    certificates, generation and resonance obstructions, the vanishing-top
    upgrade, and, for degree one, a verdict from the normalized chain-map
    search out of the degree-1 tower of the cohomology.
    """
    _require_model(c)
    report = FormalityReport(k_max)
    report.bound_exceeded = False

    if full_formality(c) == OVERALL_FORMAL:
        report.overall = OVERALL_FORMAL
        report.mark_formal_upto(
            k_max,
            Evidence(
                "rationally-abelian",
                k_max,
                "formal",
                "the differential vanishes, so the model is its own cohomology",
            ),
        )
        return report
    report.overall = OVERALL_NOT_FORMAL
    report.add_info(
        Evidence(
            "rationally-abelian",
            k_max,
            "info",
            "nonzero differential: not formal as a whole, partial degrees "
            "decided separately",
        )
    )

    if is_twostep(c):
        r = from_cdga(c, k_max + 1)
        v = generated_in_degree_one_upto(r, k_max + 1)
        if v.generated:
            report.mark_formal_upto(
                k_max,
                Evidence(
                    "two-step-decision",
                    k_max,
                    "formal",
                    f"2-step model with H^q generated in degree one for "
                    f"q <= {k_max + 1}",
                ),
            )
        else:
            q = v.failure_degree
            if q - 2 >= 0:
                report.mark_formal_upto(
                    q - 2,
                    Evidence(
                        "two-step-decision",
                        q - 2,
                        "formal",
                        f"2-step model generated in degree one up to H^{q - 1}",
                    ),
                )
            report.mark_not_formal_from(
                q - 1,
                Evidence(
                    "two-step-decision",
                    q - 1,
                    "not_formal",
                    f"2-step model with H^{q} not generated in degree one "
                    f"(cokernel dimension {v.cokernel_dim})",
                    {"failure_degree": q, "cokernel_dim": v.cokernel_dim},
                ),
            )
        return report

    ev = obstruction_generation(c, k_max)
    if ev is not None:
        report.mark_not_formal_from(ev.k, ev)
    ev = obstruction_resonance(c, max(k_max, 1), seed=seed)
    if ev is not None and report.verdict(min(ev.k, k_max)) != NOT_FORMAL:
        report.mark_not_formal_from(ev.k, ev)
    elif ev is not None:
        report.add_info(ev)

    for k in range(k_max, -1, -1):
        if report.verdict(k) == NOT_FORMAL:
            continue
        cert = certify_prop_art(c, k, decomposition)
        if cert is not None:
            report.mark_formal_upto(k, cert)
            break

    if report.verdict(min(1, k_max)) == INCONCLUSIVE and k_max >= 1:
        try:
            tower = bigraded_tower(from_cdga(c, 2), stage_cap=tower_cap)
            coh1 = c.cohomology(1)
            constraints = {
                name: coh1.representatives[j]
                for j, name in enumerate(tower.stages[0])
            }
            res = dga_map_solve(
                tower.cdga,
                c,
                constraints,
                require_h1_iso=True,
                elimination_bound=elimination_bound,
                seed=seed,
            )
            if res.status == "unsatisfiable":
                report.mark_not_formal_from(
                    1,
                    Evidence(
                        "morphism-solver",
                        1,
                        "not_formal",
                        "no normalized chain map from the degree-1 tower of "
                        f"the cohomology exists: {res.certificate}",
                        {"unknowns": res.unknowns, "equations": res.equations},
                    ),
                )
            elif res.status == "solution" and tower.stabilized:
                report.mark_formal_upto(
                    1,
                    Evidence(
                        "morphism-solver",
                        1,
                        "formal",
                        "normalized isomorphism onto the degree-1 tower of "
                        "the cohomology found",
                        {"unknowns": res.unknowns},
                    ),
                )
            else:
                report.add_info(
                    Evidence(
                        "morphism-solver",
                        1,
                        "info",
                        f"chain-map search inconclusive: {res.detail or res.status}",
                    )
                )
        except EliminationBoundError as exc:
            report.bound_exceeded = True
            report.add_info(
                Evidence(
                    "morphism-solver",
                    1,
                    "info",
                    f"search skipped: {exc}",
                )
            )

    best = report.best_formal
    if best is not None and report.overall != OVERALL_FORMAL:
        top = c.algebra.top_degree()
        if top is not None:
            try:
                infer_prop_k2(report, from_cdga(c, max(top, 1)), best)
            except RuntimeError:
                raise
    return report
