"""Hypothesis strategies shared by the unit tests."""

from fractions import Fraction

from hypothesis import strategies as st

from quadstab.checker import Element, SubbundleCatalog, transitive_closure, vanishing_closure
from quadstab.core import TOP, VanishingPattern, WeightedFiltration

weights = st.builds(Fraction, st.integers(1, 40), st.integers(1, 16))


@st.composite
def filtrations(draw, min_length=1, max_length=7, max_rank=12):
    t = draw(st.integers(min_length, max_length))
    r = draw(st.integers(t + 1, max(t + 1, max_rank)))
    ranks = sorted(draw(st.lists(st.integers(1, r - 1), min_size=t, max_size=t, unique=True)))
    degrees = draw(st.lists(st.integers(-8, 8), min_size=t, max_size=t))
    ws = draw(st.lists(weights, min_size=t, max_size=t))
    return WeightedFiltration(r, draw(st.integers(-8, 8)), tuple(ranks), tuple(degrees), tuple(ws))


@st.composite
def patterns(draw, length):
    slots = st.sampled_from(list(range(1, length + 1)) + [TOP])
    seeds = draw(st.lists(st.tuples(slots, slots), max_size=length + 1))
    return VanishingPattern.closure(length, seeds)


@st.composite
def filtration_pairs(draw, min_length=1, max_length=7):
    f = draw(filtrations(min_length, max_length))
    return f, draw(patterns(f.length))


@st.composite
def catalogs(draw, max_elements=6, max_rank=8):
    r = draw(st.integers(2, max_rank))
    d = draw(st.integers(-6, 6))
    n = draw(st.integers(0, max_elements))
    elements = tuple(
        Element(f"e{i}", draw(st.integers(1, r - 1)), draw(st.integers(-6, 6))) for i in range(1, n + 1)
    )
    pairs = [(a.id, b.id) for a in elements for b in elements if a.rank < b.rank]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    base = SubbundleCatalog(r, d, elements, transitive_closure(chosen), frozenset())
    nodes = st.sampled_from(base.ids + [TOP])
    seeds = draw(st.lists(st.tuples(nodes, nodes), max_size=n + 1))
    return SubbundleCatalog(r, d, elements, base.containment, vanishing_closure(base, seeds))


deltas = st.builds(Fraction, st.integers(1, 24), st.integers(1, 8))
