"""Subspaces of GF(p)^n with a split symmetric form.

Used only to manufacture orthogonal catalogs whose perp, containment and
vanishing data are mutually consistent by construction.  Subspaces are
represented by their reduced row echelon basis, so equal subspaces compare
equal.
"""

from __future__ import annotations

import random

Vector = tuple[int, ...]
Subspace = tuple[Vector, ...]


def rref(vectors, p: int) -> Subspace:
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    n = len(rows[0])
    lead = 0
    for col in range(n):
        pivot = next((i for i in range(lead, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        inv = pow(rows[lead][col], -1, p)
        rows[lead] = [x * inv % p for x in rows[lead]]
        for i in range(len(rows)):
            if i != lead and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    return tuple(tuple(r) for r in rows[:lead])


def annihilator(space: Subspace, n: int, p: int) -> Subspace:
    """Vectors x with v . x = 0 for every basis vector v (plain dot product)."""
    basis = rref(space, p)
    pivots = [next(c for c, x in enumerate(row) if x) for row in basis]
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, pc in zip(basis, pivots):
            x[pc] = (-row[f]) % p
        out.append(tuple(x))
    return rref(out, p)


def split_form(n: int) -> list[list[int]]:
    """Gram matrix of sum x_i y_i (plus z^2 when n is odd)."""
    m = n // 2
    g = [[0] * n for _ in range(n)]
    for i in range(m):
        g[i][m + i] = g[m + i][i] = 1
    if n % 2:
        g[n - 1][n - 1] = 1
    return g


def bilinear(u: Vector, v: Vector, g, p: int) -> int:
    return sum(u[i] * g[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if g[i][j]) % p


class QuadraticSpace:
    def __init__(self, n: int, p: int = 5):
        self.n, self.p = n, p
        self.g = split_form(n)

    def span(self, *spaces) -> Subspace:
        return rref([v for s in spaces for v in s], self.p)

    def perp(self, space: Subspace) -> Subspace:
        if not space:
            return self.span(_identity(self.n))
        images = [tuple(sum(v[i] * self.g[i][j] for i in range(self.n)) % self.p for j in range(self.n)) for v in space]
        return annihilator(images, self.n, self.p)

    def meet(self, a: Subspace, b: Subspace) -> Subspace:
        ann = self.span(annihilator(a, self.n, self.p), annihilator(b, self.n, self.p))
        return annihilator(ann, self.n, self.p) if ann else self.span(_identity(self.n))

    def contains(self, big: Subspace, small: Subspace) -> bool:
        return self.span(big, small) == big

    def pairs_nonzero(self, a: Subspace, b: Subspace) -> bool:
        return any(bilinear(u, v, self.g, self.p) for u in a for v in b)

    def radical(self, space: Subspace) -> Subspace:
        return self.meet(space, self.perp(space))

    def random_vector(self, rng: random.Random) -> Vector:
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    def random_subspace(self, rng: random.Random, dim: int) -> Subspace:
        vectors = [self.random_vector(rng) for _ in range(dim)]
        return rref(vectors, self.p)

    def random_isotropic(self, rng: random.Random, dim: int, tries: int = 200) -> Subspace:
        """Totally isotropic subspace of dimension at most ``dim``."""
        space: Subspace = ()
        for _ in range(tries):
            if len(space) >= dim:
                break
            v = self.random_vector(rng)
            if bilinear(v, v, self.g, self.p) or any(bilinear(v, u, self.g, self.p) for u in space):
                continue
            bigger = self.span(space, (v,))
            if len(bigger) > len(space):
                space = bigger
        return space


def _identity(n: int) -> list[Vector]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]
