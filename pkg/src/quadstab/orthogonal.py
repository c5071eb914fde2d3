"""Orthogonal and generalized orthogonal catalogs.

An orthogonal catalog is a subbundle catalog whose decoration is a
non-degenerate form with values in a line bundle of degree ``twist``.  Each
element F carries its orthogonal F-perp (an element of the same catalog),
and each non-isotropic element carries the isotropic part of its radical
F ∩ F-perp, or ``ZERO`` when that intersection vanishes.

The ordinary case has ``twist == 0`` and ambient degree 0.  In the
generalized case degrees are compared after normalising by the ambient
slope, which is what ``normalized_degree`` computes (times r).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .checker import (
    SubbundleCatalog,
    Verdict,
    chain_filtration,
    chain_pattern,
    critical_pairs,
    validate_catalog,
    verdict_reduced,
)
from .core import (
    CRITICAL_PATTERN,
    TOP,
    InvalidInstance,
    VanishingPattern,
    WeightedFiltration,
    as_fraction,
    is_critical,
)

ZERO = "ZERO"


@dataclass(frozen=True)
class OrthogonalCatalog:
    catalog: SubbundleCatalog
    perp: dict[str, str]
    twist: int = 0
    radical: dict[str, str] = field(default_factory=dict)

    @property
    def ordinary(self) -> bool:
        return self.twist == 0

    def normalized_degree(self, x: str) -> int:
        """r * deg(x) - d * rank(x); ZERO counts as 0."""
        if x == ZERO:
            return 0
        e = self.catalog[x]
        return self.catalog.rank * e.degree - self.catalog.degree * e.rank


def perp_data(r: int, d: int, r_f: int, d_f: int) -> tuple[int, int]:
    """Rank and degree of F-perp from those of F."""
    if not 1 <= r_f < r:
        raise InvalidInstance("subbundle rank out of range")
    degree = d_f + Fraction(d * (r - 2 * r_f), r)
    if degree.denominator != 1:
        raise InvalidInstance(f"perp degree {degree} is not an integer")
    return r - r_f, int(degree)


def is_isotropic(cat: SubbundleCatalog, f_id: str) -> bool:
    cat[f_id]  # raises for unknown ids
    return cat.m(f_id, f_id) == 0


def validate_orthogonal(oc: OrthogonalCatalog) -> list[str]:
    cat = oc.catalog
    problems = validate_catalog(cat)
    if problems:
        return problems
    r, d = cat.rank, cat.degree
    if oc.ordinary and d != 0:
        problems.append("ordinary orthogonal catalog needs ambient degree 0")
    if oc.twist * r != 2 * d:
        problems.append(f"twist {oc.twist} differs from twice the ambient slope {Fraction(2 * d, r)}")
    ids = set(cat.ids)
    for f in cat.ids:
        g = oc.perp.get(f)
        if g not in ids:
            problems.append(f"perp of {f} missing or not an element")
            continue
        if oc.perp.get(g) != f:
            problems.append(f"perp is not an involution at {f}")
        try:
            want = perp_data(r, d, cat[f].rank, cat[f].degree)
        except InvalidInstance as exc:
            problems.append(f"perp of {f}: {exc}")
            continue
        if (cat[g].rank, cat[g].degree) != want:
            problems.append(f"perp of {f} has (rank, degree) {(cat[g].rank, cat[g].degree)}, expected {want}")
    extra = set(oc.perp) - ids
    if extra:
        problems.append(f"perp given for unknown elements {sorted(extra)}")
    if problems:
        return problems

    for a, b in sorted(cat.containment):
        if (oc.perp[b], oc.perp[a]) not in cat.containment:
            problems.append(f"perp does not reverse containment {a} < {b}")
    for f in cat.ids:
        if cat.m(f, TOP) != 1:
            problems.append(f"k({f}) = 0 contradicts non-degeneracy")
        for g in cat.ids:
            if cat.m(f, g) == 0 and not cat.le(g, oc.perp[f]):
                problems.append(f"vanishing({f},{g}) = 0 but {g} is not below the perp of {f}")
            elif cat.m(f, g) == 1 and cat.le(g, oc.perp[f]):
                problems.append(f"{g} lies below the perp of {f} but vanishing({f},{g}) = 1")
        if is_isotropic(cat, f):
            if 2 * cat[f].rank > r:
                problems.append(f"isotropic {f} has rank above r/2")
            g = oc.perp[f]
            if g != f and not (cat.le(f, g) and cat.m(f, g) == 0 and cat.m(g, g) == 1):
                problems.append(f"isotropic {f} not placed below a non-isotropic perp")

    for f in cat.ids:
        n = oc.radical.get(f)
        if is_isotropic(cat, f):
            if n is not None:
                problems.append(f"radical given for isotropic {f}")
            continue
        if n is None:
            problems.append(f"radical of non-isotropic {f} missing")
            continue
        if n != ZERO:
            if n not in ids or not is_isotropic(cat, n):
                problems.append(f"radical of {f} must be an isotropic element or {ZERO}")
                continue
            if not (cat.le(n, f) and cat.le(n, oc.perp[f])):
                problems.append(f"radical {n} of {f} is not below both {f} and its perp")
        if oc.normalized_degree(f) != oc.normalized_degree(n):
            problems.append(f"degree of {f} does not match its radical {n}")
    extra = set(oc.radical) - ids
    if extra:
        problems.append(f"radical given for unknown elements {sorted(extra)}")
    return problems


def require_orthogonal(oc: OrthogonalCatalog) -> None:
    problems = validate_orthogonal(oc)
    if problems:
        raise InvalidInstance("; ".join(problems))


def ramanan_verdict(oc: OrthogonalCatalog) -> Verdict:
    """Slope condition over isotropic elements only: d*r_F - r*d_F >= 0."""
    require_orthogonal(oc)
    cat = oc.catalog
    return Verdict.from_candidates(
        (Fraction(-oc.normalized_degree(f)), (f,)) for f in cat.ids if is_isotropic(cat, f)
    )


def critical_triple(oc: OrthogonalCatalog, f_id: str) -> tuple[WeightedFiltration, VanishingPattern]:
    """The weight-one chain F < F-perp for an isotropic, non-Lagrangian F."""
    cat = oc.catalog
    if not is_isotropic(cat, f_id):
        raise InvalidInstance(f"{f_id} is not isotropic")
    g = oc.perp[f_id]
    if g == f_id:
        raise InvalidInstance(f"{f_id} equals its perp")
    f = chain_filtration(cat, (f_id, g))
    m = chain_pattern(cat, (f_id, g))
    if m.rows != CRITICAL_PATTERN or not is_critical(f, m):
        raise AssertionError(f"chain ({f_id}, {g}) is not critical")
    return f, m


def lagrangian_margin(r: int, d: int, r_f: int, d_f: int, delta) -> Fraction:
    """Subbundle margin of F = F-perp; the delta term cancels since 2 r_F = r."""
    if 2 * r_f != r:
        raise InvalidInstance("a Lagrangian subbundle has rank r/2")
    delta = as_fraction(delta)
    return d * r_f - r * d_f + delta * (2 * r_f - r)


def critical_pair_structure(oc: OrthogonalCatalog) -> list[str]:
    """Each critical pair (E_i, E_j) should have E_i isotropic and E_j below E_i-perp."""
    cat = oc.catalog
    out = []
    for a, b in critical_pairs(cat):
        if not is_isotropic(cat, a) or not cat.le(b, oc.perp[a]):
            out.append(f"critical pair ({a},{b}) not of the form isotropic < below-perp")
    return out


@dataclass(frozen=True)
class EquivalenceReport:
    delta: Fraction
    ramanan: Verdict
    reduced: Verdict

    @property
    def agree(self) -> bool:
        return self.ramanan.cls == self.reduced.cls


def equivalence_report(oc: OrthogonalCatalog, delta) -> EquivalenceReport:
    require_orthogonal(oc)
    delta = as_fraction(delta)
    return EquivalenceReport(delta, ramanan_verdict(oc), verdict_reduced(oc.catalog, delta))
