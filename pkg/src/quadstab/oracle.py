"""Differential test battery.

Each suite checks one structural property on seeded instances; a trial
returns the list of failures it found (empty on success), so a run can be
split across processes and merged back in index order.  ``FAULTS`` name
deliberate bugs that can be switched on to make sure the suites notice.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .checker import (
    SubbundleCatalog,
    Verdict,
    _affine_subbundle,
    enumerate_chains,
    chain_value,
    restrict_to_subbundle,
    subbundle_margin,
    verdict_full,
    verdict_reduced,
)
from .core import (
    CRITICAL_PATTERN,
    TOP,
    VanishingPattern,
    WeightedFiltration,
    gamma_vector,
    is_critical,
    mu_len2_critical,
    mu_value,
    p_value,
    singleton_mus,
)
from .generators import (
    GeneratorConfig,
    random_catalog,
    random_filtration,
    random_orthogonal,
    random_parabolic,
    random_pattern,
    random_weight,
    rng_for,
    semistable_catalog,
    strictly_semistable_catalog,
)
from .orthogonal import critical_pair_structure, critical_triple, equivalence_report, is_isotropic, ramanan_verdict
from .parabolic import parabolic_verdict, with_parabolic_degrees
from .splitter import Piece, split_full, verify_decomposition

FAULTS = ("split-drift", "drop-critical")
DELTAS = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3))
ORTHOGONAL_DELTAS = (Fraction(1, 4), Fraction(1), Fraction(2))

EXAMPLE_PATTERN = VanishingPattern(
    (
        (0, 0, 0, 0, 1),
        (0, 0, 0, 1, 1),
        (0, 0, 1, 1, 1),
        (0, 1, 1, 1, 1),
        (1, 1, 1, 1, 1),
    )
)


def example_filtration(weights) -> WeightedFiltration:
    return WeightedFiltration(5, 0, (1, 2, 3, 4), (0, 0, 0, 0), tuple(Fraction(w) for w in weights))


# Frozen expectations for the r = 5 example, one weight vector per maximum.
EXAMPLE_CASES = (
    ("A", (2, 1, 1, 1), ["C3", "C3-pair"], [((1, 3), (1, 1)), ((1, 4), (1, 1)), ((2,), (1,))], 3),
    ("B", (1, 2, 1, 2), ["C2"], [((1, 4), (1, 2)), ((2, 3), (2, 1))], 3),
    ("C", (1, 1, 2, 1), ["C3-mirror", "C3"], [((1, 3), (1, 1)), ((2, 3), (1, 1)), ((4,), (1,))], 4),
)


def brute_mu(f: WeightedFiltration, m: VanishingPattern) -> Fraction:
    """mu straight from the gamma vector, independent of the suffix-sum form."""
    gamma = gamma_vector(f)
    ranks = list(f.ranks) + [f.rank]
    n = m.size
    return -min(gamma[ranks[i] - 1] + gamma[ranks[j] - 1] for i in range(n) for j in range(n) if m.rows[i][j])


def weight_grid(den_bound: int = 8) -> list[Fraction]:
    return sorted({Fraction(p, q) for q in range(1, den_bound + 1) for p in range(1, q + 1)})


def _reduced(cat: SubbundleCatalog, delta, fault: str | None) -> Verdict:
    if fault == "drop-critical":
        return Verdict.from_candidates(
            (a + delta * b, (e.id,)) for e in cat.elements for a, b in [_affine_subbundle(cat, e)]
        )
    return verdict_reduced(cat, delta)


# -- trials --------------------------------------------------------------------

def trial_split(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "split", i)
    cfg = GeneratorConfig(rank_bound=14, length_bound=8, den_bound=16)
    f = random_filtration(rng, cfg, min_length=3)
    m = random_pattern(rng, f.length)
    dec = split_full(f, m)
    if fault == "split-drift":
        first = dec.pieces[0]
        dec.pieces[0] = Piece(first.indices, (first.weights[0] + Fraction(1, 7),) + first.weights[1:])
    out = [f"#{i} {msg}" for msg in verify_decomposition(f, m, dec)]
    if len(dec.trace) > f.length ** 2:
        out.append(f"#{i} {len(dec.trace)} steps exceed t^2 = {f.length ** 2}")
    return out


def trial_example(seed: int, i: int, fault: str | None) -> list[str]:
    label, weights, trace, pieces, mu = EXAMPLE_CASES[i]
    f = example_filtration(weights)
    dec = split_full(f, EXAMPLE_PATTERN)
    out = [f"max {label}: {msg}" for msg in verify_decomposition(f, EXAMPLE_PATTERN, dec)]
    got = [(p.indices, tuple(int(w) if w.denominator == 1 else w for w in p.weights)) for p in dec.pieces]
    if dec.trace != trace:
        out.append(f"max {label}: trace {dec.trace} != {trace}")
    if sorted(got) != sorted(pieces):
        out.append(f"max {label}: pieces {got} != {pieces}")
    if not mu_value(f, EXAMPLE_PATTERN) == brute_mu(f, EXAMPLE_PATTERN) == mu:
        out.append(f"max {label}: mu {mu_value(f, EXAMPLE_PATTERN)} != {mu}")
    parts = sum((brute_mu(f.subfiltration(p.indices, p.weights), EXAMPLE_PATTERN.restrict(p.indices)) for p in dec.pieces), Fraction(0))
    if parts != mu:
        out.append(f"max {label}: brute-force mu of the pieces sums to {parts}, not {mu}")
    return out


def trial_equivalence(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "equivalence", i)
    cat = random_catalog(rng, GeneratorConfig(rank_bound=10, degree_bound=6, max_elements=8))
    out = []
    for delta in DELTAS:
        full, red = verdict_full(cat, delta), _reduced(cat, delta, fault)
        if full.cls != red.cls:
            out.append(f"#{i} delta={delta}: full {full.cls.value} {full.witness} vs reduced {red.cls.value} {red.witness}")
    return out


def trial_weight_one(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "weight-one", i)
    delta = rng.choice(DELTAS)
    cfg = GeneratorConfig(rank_bound=10, degree_bound=6, max_elements=8)
    while True:
        cat = semistable_catalog(rng, cfg, delta)
        chains = enumerate_chains(cat)
        if chains:
            break
    out = []
    for _ in range(100):
        chain = rng.choice(chains)
        weights = [random_weight(rng, 16) for _ in chain]
        value = chain_value(cat, chain, delta, weights)
        if value < 0:
            out.append(f"#{i} delta={delta}: chain {chain} weights {weights} value {value}")
    return out


def _len2_cases() -> list[tuple[int, int, int]]:
    return [(r, a, b) for r in range(3, 13) for a in range(1, r) for b in range(a + 1, r)]


def trial_len2(seed: int, i: int, fault: str | None) -> list[str]:
    r, r_i, r_j = _len2_cases()[i]
    pattern = VanishingPattern(CRITICAL_PATTERN)
    out = []
    for a, b in itertools.product(weight_grid(), repeat=2):
        f = WeightedFiltration(r, 0, (r_i, r_j), (0, 0), (a, b))
        closed, brute = mu_len2_critical(r, r_i, r_j, a, b), mu_value(f, pattern)
        if closed != brute:
            out.append(f"r={r} ranks=({r_i},{r_j}) weights=({a},{b}): {closed} != {brute}")
    return out


def trial_criticality(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "criticality", i)
    f = random_filtration(rng, GeneratorConfig(rank_bound=14, length_bound=8, den_bound=16))
    m = random_pattern(rng, f.length)
    crit = is_critical(f, m)
    out = []
    for _ in range(10):
        g = f.reweighted([random_weight(rng, 16) for _ in f.weights])
        if is_critical(g, m) != crit:
            out.append(f"#{i} criticality changed under reweighting {g.weights}")
    if mu_value(f, m) > sum(singleton_mus(f, m)):
        out.append(f"#{i} mu {mu_value(f, m)} exceeds the singleton sum {sum(singleton_mus(f, m))}")
    return out


def trial_orthogonal(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "orthogonal", i)
    oc = random_orthogonal(rng, GeneratorConfig(rank_bound=8, degree_bound=3))
    out = []
    for delta in ORTHOGONAL_DELTAS:
        ram, red = ramanan_verdict(oc), _reduced(oc.catalog, delta, fault)
        if ram.cls != red.cls:
            out.append(f"#{i} delta={delta}: ramanan {ram.cls.value} {ram.witness} vs reduced {red.cls.value} {red.witness}")
    for f in oc.catalog.ids:
        if is_isotropic(oc.catalog, f) and oc.perp[f] != f:
            try:
                critical_triple(oc, f)
            except AssertionError as exc:
                out.append(f"#{i} {exc}")
    out += [f"#{i} {msg}" for msg in critical_pair_structure(oc)]
    return out


def trial_restriction(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "restriction", i)
    cat, f, delta = strictly_semistable_catalog(rng, GeneratorConfig(rank_bound=10, degree_bound=6, max_elements=8))
    out = []
    if not (delta < Fraction(1, cat.rank) and verdict_reduced(cat, delta).margin == 0):
        out.append(f"#{i} generator broke its contract")
    if subbundle_margin(cat.rank, cat.degree, cat[f].rank, cat[f].degree, cat.k(f), delta) != 0:
        out.append(f"#{i} witness {f} is not an equality case")
    sub = restrict_to_subbundle(cat, f)
    for verdict in (verdict_reduced(sub, delta), verdict_full(sub, delta)):
        if not verdict.cls.semistable:
            out.append(f"#{i} restriction to {f} unstable at delta={delta}: witness {verdict.witness} margin {verdict.margin}")
    return out


def trial_parabolic(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "parabolic", i)
    pc = random_parabolic(rng, GeneratorConfig(rank_bound=10, degree_bound=6, max_elements=8))
    out = []
    for delta in DELTAS:
        full = parabolic_verdict(pc, delta, "full")
        red = _reduced(with_parabolic_degrees(pc), delta, fault) if fault else parabolic_verdict(pc, delta, "reduced")
        if full.cls != red.cls:
            out.append(f"#{i} delta={delta}: full {full.cls.value} vs reduced {red.cls.value} {red.witness}")
    return out


def trial_heredity(seed: int, i: int, fault: str | None) -> list[str]:
    rng = rng_for(seed, "heredity", i)
    cfg = GeneratorConfig(rank_bound=14, length_bound=6, den_bound=16)
    while True:
        f = random_filtration(rng, cfg, min_length=2)
        m = random_pattern(rng, f.length)
        if not is_critical(f, m):
            break
    out = []
    positions = range(1, f.length + 1)
    for size in range(1, f.length):
        for subset in itertools.combinations(positions, size):
            if is_critical(f.subfiltration(subset), m.restrict(subset)):
                out.append(f"#{i} subset {subset} of a non-critical filtration is critical")
    return out


# -- suites --------------------------------------------------------------------

@dataclass(frozen=True)
class Suite:
    number: int
    name: str
    default_trials: int
    trial: Callable[[int, int, str | None], list[str]]
    fixed: bool = False


SUITES = (
    Suite(1, "split conservation", 10_000, trial_split),
    Suite(2, "r=5 example regression", len(EXAMPLE_CASES), trial_example, fixed=True),
    Suite(3, "full vs reduced verdicts", 1_000, trial_equivalence),
    Suite(4, "weight-one sufficiency", 1_000, trial_weight_one),
    Suite(5, "length-two critical closed form", len(_len2_cases()), trial_len2, fixed=True),
    Suite(6, "criticality weight independence and mu subadditivity", 10_000, trial_criticality),
    Suite(7, "orthogonal equivalence", 500, trial_orthogonal),
    Suite(8, "maximal destabilizing restriction", 200, trial_restriction),
    Suite(9, "parabolic transport", 500, trial_parabolic),
    Suite(10, "non-critical heredity", 1_000, trial_heredity),
)


@dataclass
class SuiteResult:
    number: int
    name: str
    trials: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _run_chunk(args) -> list[list[str]]:
    number, seed, indices, fault = args
    suite = SUITES[number - 1]
    return [suite.trial(seed, i, fault) for i in indices]


def run_suite(number: int, trials: int | None = None, seed: int = 0, fault: str | None = None, jobs: int = 1) -> SuiteResult:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"fault must be one of {FAULTS}")
    suite = SUITES[number - 1]
    if trials is None or (suite.fixed and trials > 0):
        trials = suite.default_trials
    indices = list(range(trials))
    if jobs > 1 and trials > 1:
        size = -(-trials // (4 * jobs))
        chunks = [(number, seed, indices[k:k + size], fault) for k in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_trial = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    else:
        per_trial = _run_chunk((number, seed, indices, fault))
    result = SuiteResult(number, suite.name, trials)
    for failures in per_trial:
        result.failures.extend(failures)
    return result


def run_all(trials: int | None = None, seed: int = 0, fault: str | None = None, jobs: int = 1, only=None) -> list[SuiteResult]:
    numbers = only or [s.number for s in SUITES]
    return [run_suite(n, trials, seed, fault, jobs) for n in numbers]
