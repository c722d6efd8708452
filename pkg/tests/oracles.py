"""Slow, independent reference computations used to cross-check the library.

Nothing here imports matgeom.  Field elements are coefficient lists
(index = sum c_i p^i), ranks come from counting the row span, and graph
distances come from plain breadth-first search.
"""

from __future__ import annotations

import itertools
from collections import deque


class Field:
    def __init__(self, p: int, k: int, poly: tuple[int, ...]):
        self.p, self.k, self.poly = p, k, poly
        self.q = p**k

    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def index(self, c) -> int:
        return sum(x * self.p**i for i, x in enumerate(c))

    def add(self, a: int, b: int) -> int:
        return self.index([(x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self.index([(-x) % self.p for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        x, y = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = (prod[i + j] + u * v) % self.p
        # reduce by the monic modulus, highest degree first
        for d in range(2 * self.k - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for i, f in enumerate(self.poly):
                    prod[d - self.k + i] = (prod[d - self.k + i] - c * f) % self.p
        return self.index(prod[: self.k])

    def inv(self, a: int) -> int:
        return next(b for b in range(1, self.q) if self.mul(a, b) == 1)


GF = {
    2: Field(2, 1, (0, 1)),
    3: Field(3, 1, (0, 1)),
    4: Field(2, 2, (1, 1, 1)),
    8: Field(2, 3, (1, 1, 0, 1)),
    16: Field(2, 4, (1, 1, 0, 0, 1)),
}


def field_hom_count(a: int, b: int) -> int:
    """Brute force over every map GF(a) -> GF(b)."""
    A, B = GF[a], GF[b]
    count = 0
    for rest in itertools.product(range(B.q), repeat=A.q - 2):
        f = (0, 1) + rest
        if all(f[A.add(x, y)] == B.add(f[x], f[y]) and f[A.mul(x, y)] == B.mul(f[x], f[y])
               for x in range(A.q) for y in range(A.q)):
            count += 1
    return count


def span_size(F: Field, rows) -> int:
    span = {tuple([0] * len(rows[0]))}
    for r in rows:
        span = {tuple(F.add(s, F.mul(c, x)) for s, x in zip(v, r)) for v in span for c in range(F.q)}
    return len(span)


def rank(F: Field, m: int, n: int, entries) -> int:
    rows = [entries[i * n:(i + 1) * n] for i in range(m)]
    size, r = span_size(F, rows), 0
    while F.q**r < size:
        r += 1
    return r


def decode(F: Field, m: int, n: int, code: int) -> tuple[int, ...]:
    out = []
    for _ in range(m * n):
        code, d = divmod(code, F.q)
        out.append(d)
    return tuple(reversed(out))


def matrices(F: Field, m: int, n: int) -> list[tuple[int, ...]]:
    return [decode(F, m, n, c) for c in range(F.q ** (m * n))]


def sub(F: Field, a, b) -> tuple[int, ...]:
    return tuple(F.sub(x, y) for x, y in zip(a, b))


def rank_table(F: Field, m: int, n: int) -> dict:
    return {A: rank(F, m, n, A) for A in matrices(F, m, n)}


def bfs(F: Field, m: int, n: int, source) -> dict:
    ranks = rank_table(F, m, n)
    ones = [A for A, r in ranks.items() if r == 1]
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for d in ones:
            v = tuple(F.add(x, y) for x, y in zip(u, d))
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def additive_counts() -> dict[str, int]:
    """Additive homomorphisms GF(2)^{2x2} -> GF(2)^{2x2}, split by type.

    A non-colouring hom is "standard" when the images of E11 and E21 share
    their nonzero row, "transpose" otherwise.
    """
    F = GF[2]
    mats = matrices(F, 2, 2)
    ranks = rank_table(F, 2, 2)
    edges = [(A, B) for A, B in itertools.combinations(mats, 2) if ranks[sub(F, A, B)] == 1]
    basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    counts = {"maps": 0, "homs": 0, "colourings": 0, "standard": 0, "transpose": 0}
    for imgs in itertools.product(mats, repeat=4):
        counts["maps"] += 1

        def f(X, imgs=imgs):
            acc = (0, 0, 0, 0)
            for x, Y in zip(X, imgs):
                if x:
                    acc = tuple(a ^ y for a, y in zip(acc, Y))
            return acc

        if not all(ranks[sub(F, f(A), f(B))] == 1 for A, B in edges):
            continue
        counts["homs"] += 1
        image = {f(X) for X in mats}
        if all(ranks[sub(F, Y, Z)] == 1 for Y, Z in itertools.combinations(image, 2)):
            counts["colourings"] += 1
            continue
        a, b = f(basis[0]), f(basis[2])
        row_a = next(a[i:i + 2] for i in (0, 2) if any(a[i:i + 2]))
        row_b = next(b[i:i + 2] for i in (0, 2) if any(b[i:i + 2]))
        counts["standard" if row_a == row_b else "transpose"] += 1
    return counts


def det2(F: Field, A) -> int:
    return F.sub(F.mul(A[0], A[3]), F.mul(A[1], A[2]))


def valid_L_count_embedding() -> int:
    """L in GF(4)^{2x2} with det(I + X L) != 0 for every X in GF(2)^{2x2} (0, 1 embed as 0, 1)."""
    F = GF[4]
    count = 0
    for L in matrices(F, 2, 2):
        ok = True
        for X in matrices(GF[2], 2, 2):
            XL = [F.add(F.mul(X[2 * i], L[j]), F.mul(X[2 * i + 1], L[2 + j])) for i in range(2) for j in range(2)]
            M = (F.add(1, XL[0]), XL[1], XL[2], F.add(1, XL[3]))
            if det2(F, M) == 0:
                ok = False
                break
        count += ok
    return count


def maximal_cliques(F: Field, m: int, n: int) -> set[frozenset]:
    """Bron-Kerbosch over the rank-one adjacency graph (small spaces only)."""
    mats = matrices(F, m, n)
    adj = {A: {B for B in mats if B != A and rank(F, m, n, sub(F, A, B)) == 1} for A in mats}
    out: set[frozenset] = set()

    def expand(R, P, X):
        if not P and not X:
            out.add(frozenset(R))
            return
        pivot = max(P | X, key=lambda u: len(adj[u] & P))
        for v in list(P - adj[pivot]):
            expand(R | {v}, P & adj[v], X & adj[v])
            P = P - {v}
            X = X | {v}

    expand(set(), set(mats), set())
    return out
