"""Catalogs over the normalisation of a curve with one simple node.

Each element F (and the ambient bundle) carries ``p_F``, the dimension of
the image of the fibres of F at the two preimages of the node under the
gluing map.  Stability is tested exactly as for ordinary catalogs after
replacing every degree by the parabolic degree ``deg - p``; the vanishing
table is left untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import (
    Element,
    SubbundleCatalog,
    Verdict,
    validate_catalog,
    verdict_full,
    verdict_reduced,
)
from .core import TOP, InvalidInstance

MODES = ("reduced", "full")


@dataclass(frozen=True)
class ParabolicCatalog:
    catalog: SubbundleCatalog
    p: dict[str, int]


def parabolic_degree(d_f: int, p_f: int) -> int:
    if p_f < 0:
        raise InvalidInstance("gluing dimension must be nonnegative")
    return d_f - p_f


def validate_parabolic(pc: ParabolicCatalog) -> list[str]:
    cat = pc.catalog
    problems = validate_catalog(cat)
    if problems:
        return problems
    r = cat.rank
    missing = [x for x in cat.ids + [TOP] if x not in pc.p]
    if missing:
        return [f"gluing dimension missing for {missing}"]
    unknown = set(pc.p) - set(cat.ids) - {TOP}
    if unknown:
        problems.append(f"gluing dimension given for unknown elements {sorted(unknown)}")
    if pc.p[TOP] != r:
        problems.append(f"gluing map must be onto: p({TOP}) = {pc.p[TOP]} but r = {r}")
    for e in cat.elements:
        bound = min(2 * e.rank, r)
        if not 0 <= pc.p[e.id] <= bound:
            problems.append(f"p({e.id}) = {pc.p[e.id]} outside 0..{bound}")
    for a, b in sorted(cat.containment):
        if pc.p[a] > pc.p[b]:
            problems.append(f"p not monotone along {a} < {b}")
    return problems


def require_parabolic(pc: ParabolicCatalog) -> None:
    problems = validate_parabolic(pc)
    if problems:
        raise InvalidInstance("; ".join(problems))


def with_parabolic_degrees(pc: ParabolicCatalog) -> SubbundleCatalog:
    """The same catalog with every degree replaced by its parabolic degree."""
    require_parabolic(pc)
    cat = pc.catalog
    return SubbundleCatalog(
        cat.rank,
        parabolic_degree(cat.degree, pc.p[TOP]),
        tuple(Element(e.id, e.rank, parabolic_degree(e.degree, pc.p[e.id])) for e in cat.elements),
        cat.containment,
        cat.vanishing,
    )


def parabolic_verdict(pc: ParabolicCatalog, delta, mode: str = "reduced") -> Verdict:
    if mode not in MODES:
        raise InvalidInstance(f"mode must be one of {MODES}")
    shifted = with_parabolic_degrees(pc)
    return verdict_reduced(shifted, delta) if mode == "reduced" else verdict_full(shifted, delta)
