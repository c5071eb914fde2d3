from collections import Counter
from fractions import Fraction

import pytest

from quadstab.checker import restrict_to_subbundle, subbundle_margin, verdict_full, verdict_reduced
from quadstab.core import InvalidInstance, validate_filtration
from quadstab.fileformat import dumps, validate_instance
from quadstab.generators import (
    GeneratorConfig,
    generate,
    random_filtration,
    random_orthogonal,
    random_parabolic,
    random_weight,
    rng_for,
    semistable_catalog,
    strictly_semistable_catalog,
    stream,
)
from quadstab.orthogonal import ramanan_verdict
from quadstab.parabolic import parabolic_verdict


def test_rank_bound_below_two_is_rejected():
    with pytest.raises(InvalidInstance, match="rank bound below 2"):
        GeneratorConfig(rank_bound=1).check()
    with pytest.raises(InvalidInstance):
        GeneratorConfig(family="symplectic").check()


def test_streams_are_reproducible():
    cfg = GeneratorConfig(seed=42)
    first = [dumps(i) for i in stream(cfg, 20)]
    assert first == [dumps(i) for i in stream(cfg, 20)]
    assert dumps(generate(cfg, 7)) == first[7]
    assert first != [dumps(i) for i in stream(GeneratorConfig(seed=43), 20)]


def test_rng_streams_are_independent():
    assert rng_for(0, "a", 1).random() != rng_for(0, "a", 2).random()
    assert rng_for(0, "a", 1).random() == rng_for(0, "a", 1).random()


def test_weights_respect_bound():
    rng = rng_for(1, "w")
    for _ in range(500):
        w = random_weight(rng, 5)
        assert 0 < w <= 2 and w.denominator <= 5


def test_filtrations_within_bounds():
    cfg = GeneratorConfig(rank_bound=9, length_bound=4, degree_bound=3)
    rng = rng_for(2, "f")
    for _ in range(300):
        f = random_filtration(rng, cfg)
        assert validate_filtration(f) == []
        assert f.rank <= 9 and f.length <= 4
        assert all(abs(d) <= 3 for d in f.degrees + (f.degree,))


@pytest.mark.parametrize("family", ["generic", "orthogonal", "parabolic"])
def test_stream_is_valid(family):
    for inst in stream(GeneratorConfig(seed=5, family=family), 40):
        assert validate_instance(inst) == []


def test_semistable_sampler():
    rng = rng_for(3, "semi")
    for delta in (Fraction(1, 2), Fraction(2)):
        cat = semistable_catalog(rng, GeneratorConfig(), delta)
        assert verdict_full(cat, delta).cls.semistable


def test_strictly_semistable_sampler():
    cfg = GeneratorConfig(rank_bound=8, max_elements=6)
    shapes = Counter()
    for i in range(60):
        cat, f, delta = strictly_semistable_catalog(rng_for(4, "strict", i), cfg)
        e = cat[f]
        assert delta < Fraction(1, cat.rank)
        assert subbundle_margin(cat.rank, cat.degree, e.rank, e.degree, cat.k(f), delta) == 0
        assert verdict_reduced(cat, delta).margin == 0
        assert cat.below(f)
        assert verdict_reduced(restrict_to_subbundle(cat, f), delta).cls.semistable
        shapes[cat.k(f)] += 1
    assert set(shapes) == {0, 1, 2}


def test_orthogonal_classes_are_mixed():
    cfg = GeneratorConfig(rank_bound=8)
    seen = Counter(ramanan_verdict(random_orthogonal(rng_for(6, "o", i), cfg)).cls for i in range(150))
    assert len(seen) == 3


def test_parabolic_classes_are_mixed():
    cfg = GeneratorConfig(rank_bound=8)
    seen = Counter(parabolic_verdict(random_parabolic(rng_for(7, "p", i), cfg), 1).cls for i in range(300))
    assert len(seen) == 3
