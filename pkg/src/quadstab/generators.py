"""Seeded random instances.

Every generator takes an explicit ``random.Random``; ``rng_for`` derives an
independent stream per (seed, label, index) so that instances can be
produced in any order, or in parallel, with identical results.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .checker import (
    Element,
    SubbundleCatalog,
    subbundle_margin,
    transitive_closure,
    vanishing_closure,
    verdict_full,
    verdict_reduced,
)
from .core import TOP, InvalidInstance, VanishingPattern, WeightedFiltration
from .fileformat import Instance
from .gfp import QuadraticSpace
from .orthogonal import ZERO, OrthogonalCatalog
from .parabolic import ParabolicCatalog

FAMILIES = ("generic", "orthogonal", "parabolic")


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    rank_bound: int = 10
    length_bound: int = 8
    degree_bound: int = 6
    den_bound: int = 16
    family: str = "generic"
    max_elements: int = 8

    def check(self) -> None:
        if self.rank_bound < 2:
            raise InvalidInstance("no proper subbundles possible with rank bound below 2")
        if self.length_bound < 1 or self.den_bound < 1 or self.degree_bound < 0 or self.max_elements < 0:
            raise InvalidInstance("generator bounds must be positive")
        if self.family not in FAMILIES:
            raise InvalidInstance(f"family must be one of {FAMILIES}")


def rng_for(seed: int, label: str, index: int = 0) -> random.Random:
    return random.Random(f"{seed}/{label}/{index}")


def _clamp(x: int, bound: int) -> int:
    return max(-bound, min(bound, x))


def random_weight(rng: random.Random, den_bound: int) -> Fraction:
    q = rng.randint(1, den_bound)
    return Fraction(rng.randint(1, 2 * q), q)


def random_pattern(rng: random.Random, length: int) -> VanishingPattern:
    """Monotone closure of a few random nonzero entries."""
    slots = list(range(1, length + 1)) + [TOP]
    seeds = [(rng.choice(slots), rng.choice(slots)) for _ in range(rng.randint(0, length))]
    return VanishingPattern.closure(length, seeds)


def random_filtration(rng: random.Random, cfg: GeneratorConfig, min_length: int = 1) -> WeightedFiltration:
    top_length = min(cfg.length_bound, cfg.rank_bound - 1)
    if min_length > top_length:
        raise InvalidInstance("length bound too small for the requested length")
    t = rng.randint(min_length, top_length)
    r = rng.randint(t + 1, cfg.rank_bound)
    ranks = sorted(rng.sample(range(1, r), t))
    d = rng.randint(-cfg.degree_bound, cfg.degree_bound)
    degrees = [_clamp(d * x // r + rng.randint(-3, 2), cfg.degree_bound) for x in ranks]
    weights = [random_weight(rng, cfg.den_bound) for _ in ranks]
    return WeightedFiltration(r, d, tuple(ranks), tuple(degrees), tuple(weights))


def random_catalog(rng: random.Random, cfg: GeneratorConfig, shift: int = 0) -> SubbundleCatalog:
    """Random poset of subbundles; ``shift`` lowers every element degree."""
    r = rng.randint(2, cfg.rank_bound)
    d = rng.randint(-cfg.degree_bound, cfg.degree_bound)
    n = rng.randint(0, cfg.max_elements)
    elements = []
    for i in range(1, n + 1):
        rk = rng.randint(1, r - 1)
        deg = _clamp(d * rk // r + rng.randint(-3, 2) - shift, cfg.degree_bound)
        elements.append(Element(f"e{i}", rk, deg))
    containment = {(a.id, b.id) for a in elements for b in elements if a.rank < b.rank and rng.random() < 0.5}
    base = SubbundleCatalog(r, d, tuple(elements), transitive_closure(containment), frozenset())
    nodes = base.ids + [TOP]
    seeds = [(rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(0, n + 1))]
    return SubbundleCatalog(r, d, base.elements, base.containment, vanishing_closure(base, seeds))


def semistable_catalog(rng: random.Random, cfg: GeneratorConfig, delta, tries: int = 10_000) -> SubbundleCatalog:
    """Rejection sampler for catalogs that pass the weight-one check at ``delta``."""
    for _ in range(tries):
        cat = random_catalog(rng, cfg, shift=rng.randint(0, 2))
        if verdict_full(cat, delta).cls.semistable:
            return cat
    raise InvalidInstance("no semistable catalog found; loosen the bounds")


def _witness_shapes(r: int) -> list[tuple[int, int]]:
    """(k, r_F) for which a margin-zero subbundle exists with delta < 1/r."""
    shapes = []
    for r_f in range(1, r):
        if 2 * r_f < r:
            shapes.append((2, r_f))
        if 2 * r_f == r:
            shapes.append((1, r_f))
        if 2 * r_f > r:
            shapes.append((0, r_f))
    return shapes


def strictly_semistable_catalog(rng: random.Random, cfg: GeneratorConfig, tries: int = 10_000):
    """A strictly semistable catalog, an equality witness F and delta < 1/r.

    Returns ``(catalog, F, delta)``.  The witness F is planted with the
    degree that makes its subbundle margin vanish; the remaining elements
    are random and the sample is rejected unless the whole catalog is
    semistable at ``delta`` and something lies below F.
    """
    for _ in range(tries):
        r = rng.randint(2, cfg.rank_bound)
        k, r_f = rng.choice(_witness_shapes(r))
        if k == 1:
            d = 2 * rng.randint(-cfg.degree_bound // 2, cfg.degree_bound // 2)
            d_f = d // 2
            delta = Fraction(1, rng.randint(r + 1, 4 * r))
        else:
            # r d_F - d r_F = 1 when k = 2 and -1 when k = 0: pick d_F and
            # solve for d with d r_F = r d_F -+ 1 (needs gcd(r, r_F) = 1).
            sols = [
                (dd, df)
                for df in range(-cfg.degree_bound, cfg.degree_bound + 1)
                for dd in range(-cfg.degree_bound, cfg.degree_bound + 1)
                if r * df - dd * r_f == (1 if k == 2 else -1)
            ]
            if not sols:
                continue
            d, d_f = rng.choice(sols)
            delta = Fraction(1, 2 * (r - r_f)) if k == 2 else Fraction(1, 2 * r_f)
        witness = Element("f", r_f, d_f)
        if subbundle_margin(r, d, r_f, d_f, k, delta) != 0:
            raise AssertionError("planted witness does not have zero margin")
        others = []
        for i in range(1, rng.randint(0, cfg.max_elements - 1) + 1):
            # half of the extra elements go below F so the restriction is not empty
            rk = rng.randint(1, r_f - 1) if r_f > 1 and rng.random() < 0.5 else rng.randint(1, r - 1)
            deg = _clamp(d * rk // r + rng.randint(-3, 1), cfg.degree_bound)
            others.append(Element(f"e{i}", rk, deg))
        elements = (witness, *others)
        containment = {
            (a.id, b.id)
            for a in elements
            for b in elements
            if a.rank < b.rank and rng.random() < (0.8 if b.id == "f" else 0.5)
        }
        base = SubbundleCatalog(r, d, elements, transitive_closure(containment), frozenset())
        nodes = base.ids + [TOP]
        seeds = [(rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(0, len(elements)))]
        seeds += {2: [("f", "f")], 1: [("f", TOP)], 0: []}[k]
        cat = SubbundleCatalog(r, d, elements, base.containment, vanishing_closure(base, seeds))
        if cat.k("f") != k or not cat.below("f"):
            continue
        verdict = verdict_reduced(cat, delta)
        if verdict.cls.semistable and verdict.margin == 0:
            return cat, "f", delta
    raise InvalidInstance("no strictly semistable catalog found; loosen the bounds")


def _target_degrees(rng: random.Random, count: int, bound: int) -> list[int]:
    """Degrees for isotropic elements, spread over the three verdict classes."""
    target = rng.choice(("stable", "strict", "unstable"))
    if target == "stable":
        return [rng.randint(-bound, -1) for _ in range(count)]
    if target == "strict":
        degs = [rng.randint(-bound, 0) for _ in range(count)]
        if count:
            degs[rng.randrange(count)] = 0
        return degs
    return [rng.randint(-bound, 2) for _ in range(count)]


def random_orthogonal(
    rng: random.Random, cfg: GeneratorConfig, generalized: bool = False, max_size: int = 14, tries: int = 1000
) -> OrthogonalCatalog:
    """Orthogonal catalog read off from subspaces of GF(5)^r with a split form."""
    for _ in range(tries):
        n = rng.randint(2, min(cfg.rank_bound, 8))
        space = QuadraticSpace(n)
        found = set()
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.6:
                s = space.random_isotropic(rng, rng.randint(1, n // 2))
            else:
                s = space.random_subspace(rng, rng.randint(1, n - 1))
            if 0 < len(s) < n:
                found.add(s)
        frontier = list(found)
        while frontier and len(found) <= max_size:
            x = frontier.pop()
            for y in (space.perp(x), space.radical(x)):
                if 0 < len(y) < n and y not in found:
                    found.add(y)
                    frontier.append(y)
        if not found or len(found) > max_size:
            continue
        subspaces = sorted(found, key=lambda s: (len(s), s))
        ids = {s: f"u{i}" for i, s in enumerate(subspaces, start=1)}
        iso = [s for s in subspaces if not space.pairs_nonzero(s, s)]
        base = dict(zip(iso, _target_degrees(rng, len(iso), min(cfg.degree_bound, 3))))
        rad = {}
        for s in subspaces:
            if s in base:
                continue
            nrad = space.radical(s)
            rad[ids[s]] = ids[nrad] if nrad else ZERO
            base[s] = base[nrad] if nrad else 0
        m = rng.choice([x for x in range(-2, 3) if x]) if generalized else 0
        elements = tuple(Element(ids[s], len(s), base[s] + m * len(s)) for s in subspaces)
        containment = {(ids[a], ids[b]) for a in subspaces for b in subspaces if a != b and space.contains(b, a)}
        vanishing = {frozenset((ids[a], ids[b])) for a in subspaces for b in subspaces if space.pairs_nonzero(a, b)}
        vanishing |= {frozenset((ids[a], TOP)) for a in subspaces} | {frozenset((TOP,))}
        cat = SubbundleCatalog(n, m * n, elements, frozenset(containment), frozenset(vanishing))
        perp = {ids[s]: ids[space.perp(s)] for s in subspaces}
        return OrthogonalCatalog(cat, perp, 2 * m, rad)
    raise InvalidInstance("could not build an orthogonal catalog within the size bound")


def random_parabolic(rng: random.Random, cfg: GeneratorConfig) -> ParabolicCatalog:
    """Random catalog with gluing dimensions, mostly close to the rank."""
    cat = random_catalog(rng, cfg)
    p: dict[str, int] = {}
    for e in sorted(cat.elements, key=lambda e: (e.rank, e.id)):
        lo = max((p[b] for b in cat.below(e.id)), default=0)
        hi = min(2 * e.rank, cat.rank)
        p[e.id] = rng.randint(max(lo, min(e.rank - 1, hi)), hi) if rng.random() < 0.7 else rng.randint(lo, hi)
    p[TOP] = cat.rank
    return ParabolicCatalog(cat, p)


def generate(cfg: GeneratorConfig, index: int) -> Instance:
    cfg.check()
    rng = rng_for(cfg.seed, cfg.family, index)
    if cfg.family == "orthogonal":
        return Instance("orthogonal", random_orthogonal(rng, cfg, generalized=index % 2 == 1))
    if cfg.family == "parabolic":
        return Instance("parabolic", random_parabolic(rng, cfg))
    if index % 2:
        f = random_filtration(rng, cfg)
        return Instance("filtration", (f, random_pattern(rng, f.length)))
    return Instance("catalog", random_catalog(rng, cfg))


def stream(cfg: GeneratorConfig, count: int) -> Iterator[Instance]:
    cfg.check()
    for index in range(count):
        yield generate(cfg, index)
