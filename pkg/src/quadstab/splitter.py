"""Reduce weighted filtrations to subbundles and critical length-two pieces.

Every allowed index pair (a, b), a <= b, contributes the "profile"
``[x >= a] + [x >= b]`` at each position x, and ``R_max`` is the largest
weighted profile.  A set of pieces whose weight vectors add up to the
original one conserves ``R_max`` (hence mu, hence P + delta mu) exactly when
one pair maximises every piece simultaneously.  Each case below is built so
that the pair maximising the whole filtration keeps maximising every piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import (
    TOP,
    InvalidInstance,
    VanishingPattern,
    WeightedFiltration,
    _slot,
    is_critical,
    mu_value,
    p_value,
    pattern_is_critical,
    require_valid,
)

CASES = ("A", "B", "C1", "C2", "C3", "C3-pair", "C3-mirror", "C3-mirror-pair", "NC-split")


@dataclass(frozen=True)
class Piece:
    indices: tuple[int, ...]
    weights: tuple[Fraction, ...]


@dataclass
class SplitDecomposition:
    pieces: list[Piece] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)


class Step(NamedTuple):
    case: str
    parts: list[tuple[tuple[int, ...], tuple[Fraction, ...]]]


def induced_pattern(m: VanishingPattern, subset: Sequence[int]) -> VanishingPattern:
    if not subset:
        raise InvalidInstance("empty subset")
    if any(b <= a for a, b in zip(subset, subset[1:])):
        raise InvalidInstance("subset must be strictly increasing")
    return m.restrict(subset)


def min_partner(m: VanishingPattern, i):
    """Least j (1..t, then TOP) with m[i][j] = 1, or None for a zero row."""
    t = m.length
    row = m.rows[_slot(t, i)]
    for j, bit in enumerate(row):
        if bit:
            return TOP if j == t else j + 1
    return None


def corner_pairs(m: VanishingPattern) -> list[tuple[int, int]]:
    """Pareto-minimal allowed pairs (a, b), a <= b, ambient spelled t+1.

    Returned with a increasing and b strictly decreasing.
    """
    rows, n = m.rows, m.size
    out = []
    for a in range(n):
        b = next((j for j in range(a, n) if rows[a][j]), None)
        if b is None:
            continue
        if not out or b < out[-1][1]:
            out.append((a + 1, b + 1))
    return out


def _profile(pair: tuple[int, int], t: int) -> list[int]:
    a, b = pair
    return [(x >= a) + (x >= b) for x in range(1, t + 1)]


def _part(f: WeightedFiltration, positions) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    positions = tuple(positions)
    return positions, tuple(f.weights[p - 1] for p in positions)


def _transport(supply: dict[int, Fraction], demand: list[tuple[int, Fraction, object]]):
    """Greedy fill of nested prefix constraints.

    ``demand`` is (sink, amount, allowed) in order of decreasing restriction,
    ``allowed(source)`` tells which sources may feed the sink.  Sources are
    consumed in dict order.  Raises if the constraints are infeasible.
    """
    left = dict(supply)
    flows: dict[int, dict[int, Fraction]] = {s: {} for s in supply}
    for sink, amount, allowed in demand:
        for source in left:
            if amount == 0:
                break
            if not allowed(source) or left[source] == 0:
                continue
            take = min(left[source], amount)
            flows[source][sink] = take
            left[source] -= take
            amount -= take
        if amount:
            raise AssertionError(f"redistribution infeasible at index {sink}")
    return flows


def split_step(f: WeightedFiltration, m: VanishingPattern) -> Step:
    require_valid(f, m)
    t = f.length
    if t < 3:
        raise InvalidInstance("split_step needs a filtration of length >= 3")
    alpha = f.weights
    first = min_partner(m, 1)
    if first is None:
        return Step("A", [_part(f, [1]), _part(f, range(2, t + 1))])
    if first != TOP:
        return Step("B", [_part(f, range(1, t)), _part(f, [t])])

    corners = corner_pairs(m)
    profiles = [_profile(c, t) for c in corners]
    values = [sum((w * p for w, p in zip(alpha, prof)), Fraction(0)) for prof in profiles]
    q = values.index(max(values))
    best = profiles[q]

    missing = [x for x in range(1, t + 1) if all(p[x - 1] == best[x - 1] for p in profiles)]
    if missing:
        x = missing[0]
        return Step("C1", [_part(f, [y for y in range(1, t + 1) if y != x]), _part(f, [x])])

    n = len(corners)
    c, c_top = corners[-1]
    if c != c_top:
        raise AssertionError("innermost corner off the diagonal although no index is missing")

    if 0 < q < n - 1:
        outer = {x for p in profiles[:q] for x in range(1, t + 1) if p[x - 1] != best[x - 1]}
        inner = {x for p in profiles[q + 1:] for x in range(1, t + 1) if p[x - 1] != best[x - 1]}
        if outer & inner or len(outer | inner) != t:
            raise AssertionError("index groups of the inequality system overlap")
        return Step("C2", [_part(f, sorted(outer)), _part(f, sorted(inner))])

    head = list(range(1, c))
    tail = list(range(c, t + 1))

    if q == 0:
        # (1, TOP) wins: every tail index is fed by head indices; tail j may
        # only use heads below the smallest a over corners with b <= j.
        if len(head) == 1:
            beta = sum((alpha[j - 1] for j in tail), Fraction(0))
            parts = [((1, j), (alpha[j - 1], alpha[j - 1])) for j in tail]
            if alpha[0] > beta:
                parts.append(((1,), (alpha[0] - beta,)))
            return Step("C3-pair", parts)
        limits = {j: min(a for a, b in corners if b <= j) for j in tail}
        demand = [(j, alpha[j - 1], (lambda s, lim=limits[j]: s < lim)) for j in reversed(tail)]
        flows = _transport({s: alpha[s - 1] for s in head}, demand)
        parts = []
        for s in head:
            idx = (s,) + tuple(sorted(flows[s]))
            parts.append((idx, (alpha[s - 1],) + tuple(flows[s][j] for j in idx[1:])))
        return Step("C3", parts)

    # (c, c) wins: mirror image, head weights are absorbed by tail indices.
    if len(tail) == 1:
        absorbed = sum((alpha[s - 1] for s in head), Fraction(0))
        parts = [((s, t), (alpha[s - 1], alpha[s - 1])) for s in head]
        if alpha[t - 1] > absorbed:
            parts.append(((t,), (alpha[t - 1] - absorbed,)))
        return Step("C3-mirror-pair", parts)
    limits = {s: min(b for a, b in corners if a <= s) for s in head}
    demand = [(s, alpha[s - 1], (lambda j, lim=limits[s]: j < lim)) for s in reversed(head)]
    flows = _transport({j: alpha[j - 1] for j in tail}, demand)
    parts = []
    for j in tail:
        idx = tuple(sorted(flows[j])) + (j,)
        parts.append((idx, tuple(flows[j][s] for s in idx[:-1]) + (alpha[j - 1],)))
    return Step("C3-mirror", parts)


def split_full(f: WeightedFiltration, m: VanishingPattern) -> SplitDecomposition:
    require_valid(f, m)
    dec = SplitDecomposition()
    stack = [(tuple(range(1, f.length + 1)), f.weights)]
    while stack:
        positions, weights = stack.pop()
        sub = f.subfiltration(positions, weights)
        pattern = m.restrict(positions)
        if len(positions) == 1:
            dec.pieces.append(Piece(positions, weights))
            continue
        if len(positions) == 2:
            if pattern_is_critical(pattern):
                dec.pieces.append(Piece(positions, weights))
            else:
                dec.trace.append("NC-split")
                dec.pieces.extend(Piece((p,), (w,)) for p, w in zip(positions, weights))
            continue
        step = split_step(sub, pattern)
        dec.trace.append(step.case)
        for local, ws in reversed(step.parts):
            stack.append((tuple(positions[i - 1] for i in local), ws))
    return dec


def verify_decomposition(f: WeightedFiltration, m: VanishingPattern, dec: SplitDecomposition) -> list[str]:
    """List every way ``dec`` fails to be an exact decomposition of (f, m)."""
    try:
        require_valid(f, m)
    except InvalidInstance as exc:
        return [f"invalid input: {exc}"]
    failures = []
    t = f.length
    totals = [Fraction(0)] * t
    p_sum = mu_sum = Fraction(0)
    for n, piece in enumerate(dec.pieces):
        idx = piece.indices
        if len(idx) != len(piece.weights) or not idx:
            failures.append(f"piece {n}: malformed")
            continue
        if any(not 1 <= i <= t for i in idx) or any(b <= a for a, b in zip(idx, idx[1:])):
            failures.append(f"piece {n}: bad index subset {idx}")
            continue
        if any(w <= 0 for w in piece.weights):
            failures.append(f"piece {n}: nonpositive weight")
            continue
        for i, w in zip(idx, piece.weights):
            totals[i - 1] += w
        sub = f.subfiltration(idx, piece.weights)
        pattern = m.restrict(idx)
        p_sum += p_value(sub)
        mu_sum += mu_value(sub, pattern)
        if len(idx) > 2:
            failures.append(f"piece {n}: length {len(idx)} > 2")
        elif len(idx) == 2 and not is_critical(sub, pattern):
            failures.append(f"piece {n}: length-2 piece {idx} is not critical")
    for i, (got, want) in enumerate(zip(totals, f.weights), start=1):
        if got != want:
            failures.append(f"weight conservation failed at index {i}: {got} != {want}")
    if p_sum != p_value(f):
        failures.append(f"P conservation failed: {p_sum} != {p_value(f)}")
    if mu_sum != mu_value(f, m):
        failures.append(f"mu conservation failed: {mu_sum} != {mu_value(f, m)}")
    return failures
