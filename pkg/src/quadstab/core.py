"""Exact invariants of weighted filtrations and vanishing patterns.

Positions of a filtration are 1..t; the ambient bundle is addressed with
``TOP``.  All arithmetic is done with ``Fraction`` (or integers scaled by a
common denominator), never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

TOP = "AMBIENT"
Index = Union[int, str]

CRITICAL_PATTERN = ((0, 0, 1), (0, 1, 1), (1, 1, 1))


class InvalidInstance(ValueError):
    """Raised when a filtration, pattern or catalog violates its invariants."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction or 'p/q' strings")
    return Fraction(value)


def _label(slot: int, t: int) -> str:
    return TOP if slot == t else str(slot + 1)


def _slot(t: int, i: Index) -> int:
    """Map a public index (1..t or TOP) to a 0-based slot, TOP -> t."""
    if i == TOP:
        return t
    if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= t:
        raise InvalidInstance(f"index {i!r} out of range 1..{t} or {TOP}")
    return i - 1


@dataclass(frozen=True)
class WeightedFiltration:
    rank: int
    degree: int
    ranks: tuple[int, ...]
    degrees: tuple[int, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(x) for x in self.ranks))
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        object.__setattr__(self, "weights", tuple(as_fraction(x) for x in self.weights))

    @classmethod
    def unit(cls, rank: int, degree: int, ranks: Sequence[int], degrees: Sequence[int]):
        return cls(rank, degree, tuple(ranks), tuple(degrees), (Fraction(1),) * len(ranks))

    @property
    def length(self) -> int:
        return len(self.ranks)

    def subfiltration(self, positions: Sequence[int], weights: Sequence | None = None):
        """Keep the given 1-based positions, optionally with new weights."""
        if weights is None:
            weights = [self.weights[p - 1] for p in positions]
        return WeightedFiltration(
            self.rank,
            self.degree,
            tuple(self.ranks[p - 1] for p in positions),
            tuple(self.degrees[p - 1] for p in positions),
            tuple(weights),
        )

    def reweighted(self, weights: Sequence) -> "WeightedFiltration":
        return WeightedFiltration(self.rank, self.degree, self.ranks, self.degrees, tuple(weights))

    def scaled(self, factor) -> "WeightedFiltration":
        factor = as_fraction(factor)
        return self.reweighted([w * factor for w in self.weights])


@dataclass(frozen=True)
class VanishingPattern:
    """Symmetric 0/1 matrix over positions 1..t plus the ambient (last row)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in row) for row in self.rows))

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def length(self) -> int:
        return len(self.rows) - 1

    def entry(self, i: Index, j: Index) -> int:
        t = self.length
        return self.rows[_slot(t, i)][_slot(t, j)]

    def restrict(self, positions: Sequence[int]) -> "VanishingPattern":
        t = self.length
        keep = [_slot(t, p) for p in positions] + [t]
        return VanishingPattern(tuple(tuple(self.rows[a][b] for b in keep) for a in keep))

    @classmethod
    def closure(cls, length: int, generators: Iterable[tuple[Index, Index]] = ()) -> "VanishingPattern":
        """Smallest valid pattern containing the given nonzero entries.

        The ambient entry is always switched on.
        """
        size = length + 1
        m = [[0] * size for _ in range(size)]
        seeds = [(length, length)] + [(_slot(length, a), _slot(length, b)) for a, b in generators]
        for a, b in seeds:
            for x in range(a, size):
                for y in range(b, size):
                    m[x][y] = m[y][x] = 1
        return cls(tuple(tuple(row) for row in m))


def validate_filtration(f: WeightedFiltration) -> list[str]:
    problems = []
    if f.rank < 1:
        problems.append("ambient rank must be positive")
    if f.length < 1:
        problems.append("filtration must have at least one proper subbundle")
    if not (len(f.ranks) == len(f.degrees) == len(f.weights)):
        problems.append("length mismatch between ranks, degrees and weights")
    if any(b <= a for a, b in zip(f.ranks, f.ranks[1:])):
        problems.append("ranks not strictly increasing")
    if any(not 1 <= x <= f.rank - 1 for x in f.ranks):
        problems.append(f"rank out of range 1..{f.rank - 1}")
    if f.length > max(f.rank - 1, 0):
        problems.append("length exceeds r - 1")
    if any(w <= 0 for w in f.weights):
        problems.append("nonpositive weight")
    return problems


def validate_pattern(m: VanishingPattern) -> list[str]:
    problems = []
    n = m.size
    if n == 0 or any(len(row) != n for row in m.rows):
        return ["pattern must be a nonempty square matrix"]
    t = n - 1
    rows = m.rows
    if (
        rows[t][t] == 1
        and rows == tuple(zip(*rows))
        and all(x in (0, 1) for row in rows for x in row)
        and all(a <= b for row in rows for a, b in zip(row, row[1:]))
    ):
        # symmetric 0/1 rows that are non-decreasing are monotone in both arguments
        return problems
    if any(x not in (0, 1) for row in m.rows for x in row):
        problems.append("entries must be 0 or 1")
    for i in range(n):
        for j in range(i + 1, n):
            if m.rows[i][j] != m.rows[j][i]:
                problems.append(f"symmetry violated at ({_label(i, t)},{_label(j, t)})")
    for i in range(n):
        for j in range(n):
            if not m.rows[i][j]:
                continue
            if i + 1 < n and not m.rows[i + 1][j] or j + 1 < n and not m.rows[i][j + 1]:
                problems.append(f"monotonicity violated above ({_label(i, t)},{_label(j, t)})")
    if m.rows[t][t] != 1:
        problems.append("ambient entry must be 1")
    return problems


def require_valid(f: WeightedFiltration, m: VanishingPattern | None = None) -> None:
    problems = validate_filtration(f)
    if m is not None:
        problems += validate_pattern(m)
        if m.size != f.length + 1:
            problems.append(f"pattern size {m.size} does not match filtration length {f.length}")
    if problems:
        raise InvalidInstance("; ".join(problems))


# -- scaled integer kernels -------------------------------------------------
# Weights are multiplied by the lcm of their denominators so the inner loops
# run on ints; results are divided back out at the end.

def _scale(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(w.denominator for w in weights)) if weights else 1
    return [w.numerator * (den // w.denominator) for w in weights], den


def _suffix_sums(ws: Sequence[int]) -> list[int]:
    out = [0] * (len(ws) + 1)
    for i in range(len(ws) - 1, -1, -1):
        out[i] = out[i + 1] + ws[i]
    return out


def _r_max_scaled(ws: Sequence[int], rows) -> tuple[int, tuple[int, int]]:
    """Largest R(i)+R(j) over allowed slot pairs, with the first pair attaining it."""
    big_r = _suffix_sums(ws)
    best, arg = None, None
    n = len(rows)
    for i in range(n):
        row = rows[i]
        for j in range(i, n):
            if row[j]:
                v = big_r[i] + big_r[j]
                if best is None or v > best:
                    best, arg = v, (i, j)
                break  # R is decreasing, so the first allowed j in this row wins
    return best, arg


def _mu_scaled(f: WeightedFiltration, rows) -> tuple[int, int]:
    ws, den = _scale(f.weights)
    r = f.rank
    total = sum(w * x for w, x in zip(ws, f.ranks))
    big_r = _suffix_sums(ws)
    gamma = [total - r * x for x in big_r]
    n = len(rows)
    gmin = min(gamma[i] + gamma[j] for i in range(n) for j in range(i, n) if rows[i][j])
    rmax, _ = _r_max_scaled(ws, rows)
    via_gamma, via_r = -gmin, r * rmax - 2 * total
    if via_gamma != via_r:
        raise AssertionError(f"mu mismatch: {via_gamma} vs {via_r} (scaled by {den})")
    return via_gamma, den


def _p_scaled(f: WeightedFiltration) -> tuple[int, int]:
    ws, den = _scale(f.weights)
    return sum(w * (f.degree * x - f.rank * y) for w, x, y in zip(ws, f.ranks, f.degrees)), den


# -- public operations -------------------------------------------------------

def gamma_vector(f: WeightedFiltration) -> list[Fraction]:
    require_valid(f)
    r = f.rank
    out = []
    for p in range(1, r + 1):
        out.append(sum((a * (ri - r if p <= ri else ri) for a, ri in zip(f.weights, f.ranks)), Fraction(0)))
    return out


def big_r(f: WeightedFiltration, l: Index) -> Fraction:
    """Suffix weight sum from position ``l``; zero at the ambient."""
    require_valid(f)
    start = _slot(f.length, l)
    return sum(f.weights[start:], Fraction(0))


def gamma_component(f: WeightedFiltration, i: Index) -> Fraction:
    require_valid(f)
    total = sum((a * x for a, x in zip(f.weights, f.ranks)), Fraction(0))
    return total - f.rank * big_r(f, i)


def p_value(f: WeightedFiltration) -> Fraction:
    require_valid(f)
    num, den = _p_scaled(f)
    return Fraction(num, den)


def mu_value(f: WeightedFiltration, m: VanishingPattern) -> Fraction:
    """Decoration term of the stability function.

    Computed both as minus the least allowed gamma-sum and as
    ``r * R_max - 2 * sum(alpha_s r_s)``; the two must agree.
    """
    require_valid(f, m)
    num, den = _mu_scaled(f, m.rows)
    return Fraction(num, den)


def r_max(f: WeightedFiltration, m: VanishingPattern) -> Fraction:
    require_valid(f, m)
    ws, den = _scale(f.weights)
    value, _ = _r_max_scaled(ws, m.rows)
    return Fraction(value, den)


def c_coeff(f: WeightedFiltration, k: int, delta) -> Fraction:
    require_valid(f)
    s = _slot(f.length, k)
    if s == f.length:
        raise InvalidInstance("c_coeff is defined for proper positions only")
    delta = as_fraction(delta)
    return f.ranks[s] * f.degree - f.degrees[s] * f.rank - 2 * delta * f.ranks[s]


def stab_value(f: WeightedFiltration, m: VanishingPattern, delta) -> Fraction:
    """P + delta * mu, cross-checked against sum(alpha_k c_k) + delta r R_max."""
    require_valid(f, m)
    delta = as_fraction(delta)
    a, b = delta.numerator, delta.denominator
    ws, den = _scale(f.weights)
    p_num, _ = _p_scaled(f)
    mu_num, _ = _mu_scaled(f, m.rows)
    rmax, _ = _r_max_scaled(ws, m.rows)
    # both sides multiplied by den * b
    lhs = b * p_num + a * mu_num
    rhs = sum(w * (b * x * f.degree - b * y * f.rank - 2 * a * x) for w, x, y in zip(ws, f.ranks, f.degrees))
    rhs += a * f.rank * rmax
    if lhs != rhs:
        raise AssertionError(f"stability identity failed: {Fraction(lhs, den * b)} != {Fraction(rhs, den * b)}")
    return Fraction(lhs, den * b)


def k_value(m_ff: int, m_ft: int) -> int:
    if m_ff not in (0, 1) or m_ft not in (0, 1):
        raise InvalidInstance("vanishing bits must be 0 or 1")
    if m_ff and not m_ft:
        raise InvalidInstance("monotonicity violation: Q nonzero on FF but zero on FE")
    return 2 if m_ff else m_ft


def _singleton_mu(w, r_i: int, r: int, m_ii: int, m_it: int):
    """mu of (E_i, w) alone: r * max allowed R-sum over {i, TOP} minus 2 w r_i."""
    best = max(2 * w if m_ii else 0, w if m_it else 0)
    return r * best - 2 * w * r_i


def singleton_mus(f: WeightedFiltration, m: VanishingPattern) -> list[Fraction]:
    require_valid(f, m)
    t = f.length
    return [
        _singleton_mu(w, x, f.rank, m.rows[i][i], m.rows[i][t])
        for i, (w, x) in enumerate(zip(f.weights, f.ranks))
    ]


def _critical_scaled(weights: Sequence[Fraction], rows) -> bool:
    ws, _ = _scale(weights)
    t = len(ws)
    rmax, _ = _r_max_scaled(ws, rows)
    ks = [2 if rows[i][i] else rows[i][t] for i in range(t)]
    return rmax != sum(w * k for w, k in zip(ws, ks))


def is_critical(f: WeightedFiltration, m: VanishingPattern) -> bool:
    """True when mu differs from the sum of the singleton mu values."""
    require_valid(f, m)
    ws, _ = _scale(f.weights)
    t, rows = f.length, m.rows
    num, _ = _mu_scaled(f, rows)
    singles = sum(_singleton_mu(w, x, f.rank, rows[i][i], rows[i][t]) for i, (w, x) in enumerate(zip(ws, f.ranks)))
    critical = num != singles
    if critical != pattern_is_critical(m):
        raise AssertionError("criticality depends on the weights")
    return critical


def pattern_is_critical(m: VanishingPattern) -> bool:
    """Criticality at unit weights (it does not depend on the weights)."""
    return _critical_scaled([Fraction(1)] * m.length, m.rows)


def mu_len2_critical(r: int, r_i: int, r_j: int, a_i, a_j) -> Fraction:
    if not 1 <= r_i < r_j < r:
        raise InvalidInstance("need 1 <= r_i < r_j < r")
    a_i, a_j = as_fraction(a_i), as_fraction(a_j)
    if a_i <= 0 or a_j <= 0:
        raise InvalidInstance("nonpositive weight")
    return r * max(a_i + a_j, 2 * a_j) - 2 * (a_i * r_i + a_j * r_j)
