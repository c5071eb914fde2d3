from fractions import Fraction

import pytest
from hypothesis import given, settings

from quadstab.checker import (
    Element,
    Stability,
    SubbundleCatalog,
    Verdict,
    classify,
    critical_pair_margin,
    critical_pairs,
    delta_walls,
    enumerate_chains,
    reduce_decorated,
    restrict_to_subbundle,
    subbundle_margin,
    transitive_closure,
    validate_catalog,
    vanishing_closure,
    verdict_full,
    verdict_reduced,
)
from quadstab.core import TOP, InvalidInstance
from strategies import catalogs, deltas


def catalog(r, d, elements, containment=(), seeds=()):
    base = SubbundleCatalog.build(r, d, elements, containment)
    return SubbundleCatalog(r, d, base.elements, base.containment, vanishing_closure(base, seeds))


def test_subbundle_margin_example():
    assert subbundle_margin(2, 0, 1, 0, 2, 1) == 2
    assert subbundle_margin(2, 0, 1, 1, 1, 1) == -2
    assert subbundle_margin(4, 0, 2, 0, 0, 1, ambient_k=0) == 0


def test_critical_pair_margin_example():
    assert critical_pair_margin(4, 0, (1, 1), (2, 0), 1) == -2
    with pytest.raises(InvalidInstance):
        critical_pair_margin(4, 0, (2, 0), (2, 0), 1)


def test_classify():
    assert classify(None) is Stability.STABLE
    assert classify(Fraction(1, 3)) is Stability.STABLE
    assert classify(Fraction(0)) is Stability.STRICTLY_SEMISTABLE
    assert classify(Fraction(-1)) is Stability.UNSTABLE
    assert Verdict.from_candidates([]).cls is Stability.STABLE


def test_enumerate_chains_counts():
    anti = catalog(5, 0, [("a", 1, 0), ("b", 2, 0), ("c", 3, 0)])
    assert len(enumerate_chains(anti, max_len=2)) == 3
    chain4 = catalog(5, 0, [("a", 1, 0), ("b", 2, 0), ("c", 3, 0), ("d", 4, 0)],
                     [("a", "b"), ("b", "c"), ("c", "d")])
    assert len(enumerate_chains(chain4)) == 15
    assert enumerate_chains(catalog(3, 0, [])) == []


def test_transitive_closure():
    assert transitive_closure([("a", "b"), ("b", "c")]) == {("a", "b"), ("b", "c"), ("a", "c")}


def test_validation_messages():
    bad_rank = SubbundleCatalog.build(3, 0, [("a", 3, 0)], vanishing=[(TOP, TOP)])
    assert any("out of range" in p for p in validate_catalog(bad_rank))
    cyc = SubbundleCatalog.build(4, 0, [("a", 1, 0), ("b", 2, 0)], [("a", "b"), ("b", "a")], [(TOP, TOP)])
    assert any("cycle" in p for p in validate_catalog(cyc))
    zero = SubbundleCatalog.build(4, 0, [("a", 1, 0)])
    assert "ambient entry must be 1" in validate_catalog(zero)
    assert validate_catalog(zero, allow_zero_decoration=True) == []
    nonmono = SubbundleCatalog.build(4, 0, [("a", 1, 0)], vanishing=[(TOP, TOP), ("a", "a")])
    assert any("not monotone" in p for p in validate_catalog(nonmono))


def test_critical_pair_decides():
    # a < b with m(a,TOP)=1 and m(b,b)=1 is a critical pair; only the pair is negative
    cat = catalog(4, 0, [("a", 1, 0), ("b", 2, 1)], [("a", "b")], [("a", TOP), ("b", "b")])
    assert critical_pairs(cat) == [("a", "b")]
    red = verdict_reduced(cat, 1)
    full = verdict_full(cat, 1)
    assert red.cls is full.cls is Stability.UNSTABLE
    assert red.margin == full.margin == -2
    assert red.witness == ("a", "b")


def test_single_subbundle_verdicts():
    cat = catalog(2, 0, [("L", 1, 0)], seeds=[("L", "L")])
    assert verdict_full(cat, 1).margin == 2
    assert verdict_reduced(cat, 1).cls is Stability.STABLE


def test_delta_must_be_positive():
    cat = catalog(2, 0, [("L", 1, 0)])
    with pytest.raises(InvalidInstance):
        verdict_reduced(cat, 0)


def test_walls_example():
    cat = catalog(4, 0, [("a", 1, 1), ("b", 3, -1)], [("a", "b")], [("a", TOP), ("b", "b")])
    assert delta_walls(cat, Fraction(1, 10), 10) == [2]


def test_reduce_decorated():
    assert reduce_decorated(0, 2, 1, 4, 3) == 7
    assert reduce_decorated(5, 0, -2, 4, 3) == -2


def test_restriction_uses_zero_decoration():
    cat = catalog(5, 0, [("a", 1, 0), ("f", 3, 0)], [("a", "f")], [("f", TOP)])
    sub = restrict_to_subbundle(cat, "f")
    assert (sub.rank, sub.ids) == (3, ["a"])
    assert not sub.decorated
    assert validate_catalog(sub, allow_zero_decoration=True) == []
    assert verdict_reduced(sub, 1).margin == 0


@settings(max_examples=200)
@given(catalogs(), deltas)
def test_reduced_equals_full(cat, delta):
    assert validate_catalog(cat) == []
    full, red = verdict_full(cat, delta), verdict_reduced(cat, delta)
    assert full.cls is red.cls
    # every reduced candidate is a weight-one chain, so the full minimum is lower
    if red.margin is not None:
        assert full.margin <= red.margin


@given(catalogs(), deltas)
def test_adding_an_element_never_helps(cat, delta):
    extra = Element("zz", 1, cat.degree + 3)
    bigger = SubbundleCatalog(
        cat.rank, cat.degree, cat.elements + (extra,), cat.containment, cat.vanishing
    )
    before, after = verdict_reduced(cat, delta), verdict_reduced(bigger, delta)
    if before.margin is not None:
        assert after.margin <= before.margin


@given(catalogs(max_elements=5))
def test_walls_separate_classes(cat):
    lo, hi = Fraction(1, 8), Fraction(8)
    walls = delta_walls(cat, lo, hi)
    points = [lo] + walls + [hi]
    for a, b in zip(points, points[1:]):
        # the class is constant strictly between consecutive walls
        mid1, mid2 = a + (b - a) / 3, a + 2 * (b - a) / 3
        assert verdict_reduced(cat, mid1).cls is verdict_reduced(cat, mid2).cls
