"""Stability verdicts over finite synthetic subbundle catalogs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    TOP,
    InvalidInstance,
    VanishingPattern,
    WeightedFiltration,
    as_fraction,
    k_value,
    p_value,
    pattern_is_critical,
    stab_value,
)


class Stability(str, enum.Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    UNSTABLE = "unstable"

    @property
    def semistable(self) -> bool:
        return self is not Stability.UNSTABLE


def classify(margin: Fraction | None) -> Stability:
    if margin is None or margin > 0:
        return Stability.STABLE
    return Stability.STRICTLY_SEMISTABLE if margin == 0 else Stability.UNSTABLE


@dataclass(frozen=True)
class Verdict:
    cls: Stability
    witness: tuple[str, ...] | None
    margin: Fraction | None

    @classmethod
    def from_candidates(cls, candidates: Iterable[tuple[Fraction, tuple[str, ...]]]) -> "Verdict":
        best = min(candidates, default=None)
        if best is None:
            return cls(Stability.STABLE, None, None)
        return cls(classify(best[0]), best[1], best[0])


@dataclass(frozen=True)
class Element:
    id: str
    rank: int
    degree: int


@dataclass(frozen=True)
class SubbundleCatalog:
    """Finite poset of subbundle data with a monotone vanishing table.

    ``containment`` holds strict pairs (small, big) and is kept transitively
    closed; ``vanishing`` holds the nonzero unordered pairs, ambient spelled
    ``TOP``.
    """

    rank: int
    degree: int
    elements: tuple[Element, ...]
    containment: frozenset[tuple[str, str]]
    vanishing: frozenset[frozenset[str]]
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "containment", transitive_closure(self.containment))
        object.__setattr__(self, "vanishing", frozenset(frozenset(p) for p in self.vanishing))
        object.__setattr__(self, "_by_id", {e.id: e for e in self.elements})

    @classmethod
    def build(cls, rank, degree, elements, containment=(), vanishing=()) -> "SubbundleCatalog":
        elements = [e if isinstance(e, Element) else Element(*e) for e in elements]
        return cls(rank, degree, tuple(elements), frozenset(map(tuple, containment)),
                   frozenset(frozenset(p) for p in vanishing))

    def __getitem__(self, key: str) -> Element:
        try:
            return self._by_id[key]
        except KeyError:
            raise InvalidInstance(f"unknown element {key!r}") from None

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.elements]

    def le(self, a: str, b: str) -> bool:
        return a == b or b == TOP or (a, b) in self.containment

    def m(self, a: str, b: str) -> int:
        return int(frozenset((a, b)) in self.vanishing)

    def k(self, a: str) -> int:
        return k_value(self.m(a, a), self.m(a, TOP))

    @property
    def decorated(self) -> bool:
        """False for the zero decoration (only reachable by restriction)."""
        return bool(self.m(TOP, TOP))

    def below(self, a: str) -> list[str]:
        return [e.id for e in self.elements if (e.id, a) in self.containment]


def transitive_closure(pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    rel = {tuple(p) for p in pairs}
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return frozenset(rel)
        rel |= extra


def as_pair(entry: frozenset[str]) -> tuple[str, str]:
    """Ordered form of a vanishing entry; diagonal entries are 1-sets."""
    items = sorted(entry)
    return (items[0], items[-1])


def vanishing_closure(cat: SubbundleCatalog, seeds: Iterable[tuple[str, str]]) -> frozenset[frozenset[str]]:
    """Smallest monotone symmetric table containing ``seeds`` and (TOP, TOP)."""
    nodes = cat.ids + [TOP]
    seeds = list(seeds) + [(TOP, TOP)]
    out = set()
    for x in nodes:
        for y in nodes:
            if any(cat.le(a, x) and cat.le(b, y) or cat.le(a, y) and cat.le(b, x) for a, b in seeds):
                out.add(frozenset((x, y)))
    return frozenset(out)


def validate_catalog(cat: SubbundleCatalog, allow_zero_decoration: bool = False) -> list[str]:
    problems = []
    if cat.rank < 1:
        problems.append("ambient rank must be positive")
    ids = cat.ids
    if len(set(ids)) != len(ids):
        problems.append("duplicate element ids")
    if TOP in ids:
        problems.append(f"{TOP} is reserved for the ambient bundle")
    known = set(ids)
    for e in cat.elements:
        if not 1 <= e.rank <= cat.rank - 1:
            problems.append(f"element {e.id}: rank {e.rank} out of range 1..{cat.rank - 1}")
    for a, b in sorted(cat.containment):
        if a not in known or b not in known:
            problems.append(f"containment ({a},{b}) references unknown element")
            continue
        if a == b:
            problems.append(f"containment is not strict at {a} (cycle)")
        elif cat[a].rank >= cat[b].rank:
            problems.append(f"containment {a} < {b} does not increase rank")
    nodes = known | {TOP}
    for pair in cat.vanishing:
        if not pair <= nodes:
            problems.append(f"vanishing entry {sorted(pair)} references unknown element")
    if problems:
        return problems
    if not cat.decorated:
        if not allow_zero_decoration:
            problems.append("ambient entry must be 1")
        elif cat.vanishing:
            problems.append("zero decoration must have an empty vanishing table")
        return problems
    closed = vanishing_closure(cat, [as_pair(p) for p in cat.vanishing])
    for pair in sorted(closed - cat.vanishing, key=sorted):
        problems.append(f"vanishing table not monotone: missing {sorted(pair)}")
    return problems


def require_catalog(cat: SubbundleCatalog, allow_zero_decoration: bool = False) -> None:
    problems = validate_catalog(cat, allow_zero_decoration)
    if problems:
        raise InvalidInstance("; ".join(problems))


# -- margins -------------------------------------------------------------------

def subbundle_margin(r: int, d: int, r_f: int, d_f: int, k: int, delta, ambient_k: int = 2) -> Fraction:
    """Cleared slope condition for one subbundle; ``ambient_k`` is 0 for Q = 0."""
    if not 1 <= r_f < r:
        raise InvalidInstance("subbundle rank out of range")
    delta = as_fraction(delta)
    return (d * r_f - r * d_f) + delta * (r * k - ambient_k * r_f)


def critical_pair_margin(r: int, d: int, lo: tuple[int, int], hi: tuple[int, int], delta) -> Fraction:
    (r_i, d_i), (r_j, d_j) = lo, hi
    if not 1 <= r_i < r_j < r:
        raise InvalidInstance("need r_i < r_j < r")
    delta = as_fraction(delta)
    return (r_i + r_j) * d - r * (d_i + d_j) - 2 * delta * (r_i + r_j - r)


def _affine_subbundle(cat: SubbundleCatalog, e: Element) -> tuple[int, int]:
    ambient_k = 2 if cat.decorated else 0
    return cat.degree * e.rank - cat.rank * e.degree, cat.rank * cat.k(e.id) - ambient_k * e.rank


def _affine_pair(cat: SubbundleCatalog, a: Element, b: Element) -> tuple[int, int]:
    r = cat.rank
    return (a.rank + b.rank) * cat.degree - r * (a.degree + b.degree), -2 * (a.rank + b.rank - r)


def critical_pairs(cat: SubbundleCatalog) -> list[tuple[str, str]]:
    out = []
    for a, b in sorted(cat.containment):
        if cat.decorated and pattern_is_critical(chain_pattern(cat, (a, b))):
            out.append((a, b))
    return out


def reduced_margins(cat: SubbundleCatalog) -> list[tuple[tuple[int, int], tuple[str, ...]]]:
    """Affine margins (A, B) meaning A + delta*B, with their witnesses."""
    out = [(_affine_subbundle(cat, e), (e.id,)) for e in cat.elements]
    out += [(_affine_pair(cat, cat[a], cat[b]), (a, b)) for a, b in critical_pairs(cat)]
    return out


# -- chains ----------------------------------------------------------------------

def enumerate_chains(cat: SubbundleCatalog, max_len: int | None = None) -> list[tuple[str, ...]]:
    order = sorted(cat.elements, key=lambda e: (e.rank, e.id))
    limit = len(order) if max_len is None else max_len
    out: list[tuple[str, ...]] = []

    def extend(chain: tuple[str, ...], start: int):
        out.append(chain)
        if len(chain) == limit:
            return
        for n in range(start, len(order)):
            nxt = order[n].id
            if (chain[-1], nxt) in cat.containment:
                extend(chain + (nxt,), n + 1)

    if limit >= 1:
        for n, e in enumerate(order):
            extend((e.id,), n + 1)
    return out


def chain_pattern(cat: SubbundleCatalog, chain: Sequence[str]) -> VanishingPattern:
    nodes = list(chain) + [TOP]
    return VanishingPattern(tuple(tuple(cat.m(a, b) for b in nodes) for a in nodes))


def chain_filtration(cat: SubbundleCatalog, chain: Sequence[str], weights=None) -> WeightedFiltration:
    els = [cat[c] for c in chain]
    f = WeightedFiltration.unit(cat.rank, cat.degree, [e.rank for e in els], [e.degree for e in els])
    return f if weights is None else f.reweighted(weights)


def chain_value(cat: SubbundleCatalog, chain: Sequence[str], delta, weights=None) -> Fraction:
    f = chain_filtration(cat, chain, weights)
    if not cat.decorated:
        return p_value(f)
    return stab_value(f, chain_pattern(cat, chain), delta)


# -- verdicts --------------------------------------------------------------------

def _require_delta(delta) -> Fraction:
    delta = as_fraction(delta)
    if delta <= 0:
        raise InvalidInstance("delta must be positive")
    return delta


def verdict_full(cat: SubbundleCatalog, delta) -> Verdict:
    """Minimal P + delta*mu over every weight-one chain of the catalog."""
    require_catalog(cat, allow_zero_decoration=True)
    delta = _require_delta(delta)
    return Verdict.from_candidates((chain_value(cat, ch, delta), ch) for ch in enumerate_chains(cat))


def verdict_reduced(cat: SubbundleCatalog, delta) -> Verdict:
    """Subbundle conditions plus weight-one critical pairs only."""
    require_catalog(cat, allow_zero_decoration=True)
    delta = _require_delta(delta)
    return Verdict.from_candidates((a + delta * b, w) for (a, b), w in reduced_margins(cat))


def delta_walls(cat: SubbundleCatalog, lo, hi) -> list[Fraction]:
    """Values of delta in (lo, hi) where the reduced verdict changes class."""
    require_catalog(cat, allow_zero_decoration=True)
    lo, hi = as_fraction(lo), as_fraction(hi)
    if not 0 < lo < hi:
        raise InvalidInstance("need 0 < lo < hi")
    margins = [m for m, _ in reduced_margins(cat)]

    def cls_at(x: Fraction) -> Stability:
        return classify(min((a + x * b for a, b in margins), default=None))

    roots = sorted({Fraction(-a, b) for a, b in margins if b and lo < Fraction(-a, b) < hi})
    points = [lo] + roots + [hi]
    walls = []
    for n, x in enumerate(roots, start=1):
        left = cls_at((points[n - 1] + x) / 2)
        right = cls_at((x + points[n + 1]) / 2)
        here = cls_at(x)
        if here != left or here != right:
            walls.append(x)
    return walls


def restrict_to_subbundle(cat: SubbundleCatalog, f_id: str) -> SubbundleCatalog:
    """The catalog of F itself: elements below F, F playing the ambient."""
    top = cat[f_id]
    keep = cat.below(f_id)
    keep_set = set(keep)
    rename = {x: x for x in keep}
    rename[f_id] = TOP
    vanishing = set()
    for entry in cat.vanishing:
        a, b = as_pair(entry)
        if a in rename and b in rename:
            vanishing.add(frozenset((rename[a], rename[b])))
    return SubbundleCatalog(
        top.rank,
        top.degree,
        tuple(cat[x] for x in cat.ids if x in keep_set),
        frozenset((a, b) for a, b in cat.containment if a in keep_set and b in keep_set),
        frozenset(vanishing),
    )


def reduce_decorated(b: int, c: int, n_n: int, r: int, d: int) -> int:
    """Degree of N' = det(E)^c (x) N, which lets one assume c = 0.

    Neither b nor the twist enters any margin; the verdicts depend only on
    the vanishing data.
    """
    return c * d + n_n
