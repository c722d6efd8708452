"""Maximal adjacent sets, lines, unit balls and the matrix graph itself.

A row-type maximal set is ``{c x + A0 : x a 1 x n row}`` for a nonzero
column ``c``; a column-type set is ``{y r + A0 : y an m x 1 column}``.
Directions are projectively normalized (first nonzero coordinate 1) and the
offset has the pivot row (row type) or pivot column (column type) zeroed,
so structural equality of :class:`MaximalSet` values is set equality.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidWitness,
    NotAdjacent,
    NotAdjacentSet,
    ShapeMismatch,
    TheoremViolation,
)
from .fields import FieldSpec
from .matrices import (
    Mat,
    check_cap,
    encode,
    is_adjacent,
    outer,
    projective_vectors,
    rank,
    rank_one_factors,
    stack_rank,
)
from .space import space


class Kind(str, enum.Enum):
    ROW = "RowType"
    COL = "ColType"


def _pivot(v) -> int:
    return next(i for i, x in enumerate(v) if x)


@dataclass(frozen=True)
class MaximalSet:
    kind: Kind
    direction: tuple[int, ...]
    offset: Mat

    @classmethod
    def make(cls, kind: Kind, direction, through: Mat) -> MaximalSet:
        """The maximal set of the given kind and direction containing ``through``."""
        F = through.field
        direction = tuple(direction)
        t = _pivot(direction)
        s = F.inv_table[direction[t]]
        direction = tuple(F.mul_table[s][x] for x in direction)
        if kind is Kind.ROW:
            if len(direction) != through.m:
                raise ShapeMismatch("row-type direction must have m coordinates")
            offset = through - outer(F, direction, through.row(t))
        else:
            if len(direction) != through.n:
                raise ShapeMismatch("column-type direction must have n coordinates")
            offset = through - outer(F, through.col(t), direction)
        return cls(kind, direction, offset)

    @property
    def field(self) -> FieldSpec:
        return self.offset.field

    @property
    def shape(self) -> tuple[int, int]:
        return self.offset.shape

    @property
    def size(self) -> int:
        q = self.field.q
        return q ** (self.offset.n if self.kind is Kind.ROW else self.offset.m)

    def param(self, X: Mat) -> tuple[int, ...] | None:
        """The row ``x`` (or column ``y``) with ``X = c x + A0`` (or ``y r + A0``); None if X is outside."""
        if X.shape != self.shape or X.field != self.field:
            raise ShapeMismatch("matrix does not live in the ambient space of this maximal set")
        D = X - self.offset
        t = _pivot(self.direction)
        if self.kind is Kind.ROW:
            x = D.row(t)
            return x if outer(self.field, self.direction, x) == D else None
        y = D.col(t)
        return y if outer(self.field, y, self.direction) == D else None

    def point(self, param) -> Mat:
        F = self.field
        if self.kind is Kind.ROW:
            return outer(F, self.direction, param) + self.offset
        return outer(F, param, self.direction) + self.offset

    def points(self) -> list[Mat]:
        """All members, sorted by encoding."""
        F = self.field
        k = self.offset.n if self.kind is Kind.ROW else self.offset.m
        pts = [self.point(v) for v in itertools.product(range(F.q), repeat=k)]
        return sorted(pts, key=encode)

    def translate(self, R: Mat) -> MaximalSet:
        return MaximalSet.make(self.kind, self.direction, self.offset + R)

    def __contains__(self, X: Mat) -> bool:
        return self.param(X) is not None

    def describe(self) -> str:
        return f"{self.kind.value} dir={','.join(map(str, self.direction))} offset={self.offset.to_csv()}"


@dataclass(frozen=True)
class Line:
    carrier: MaximalSet
    points: tuple[Mat, ...]

    def __contains__(self, X: Mat) -> bool:
        return X in self.points

    def __len__(self) -> int:
        return len(self.points)


def contains(M: MaximalSet, X: Mat) -> bool:
    return X in M


def row_directions(field: FieldSpec, m: int) -> list[tuple[int, ...]]:
    return projective_vectors(field, m)


def maximal_sets_through(X: Mat) -> list[MaximalSet]:
    """Every maximal set containing ``X``: row types first, then column types."""
    F = X.field
    rows = [MaximalSet.make(Kind.ROW, c, X) for c in projective_vectors(F, X.m)]
    cols = [MaximalSet.make(Kind.COL, r, X) for r in projective_vectors(F, X.n)]
    return rows + cols


def maximal_sets_containing_pair(A: Mat, B: Mat) -> tuple[MaximalSet, MaximalSet]:
    """The two maximal sets through adjacent ``A`` and ``B`` (row type, column type)."""
    if not is_adjacent(A, B):
        raise NotAdjacent(f"rank(A - B) = {rank(A - B)}")
    c, r = rank_one_factors(B - A)
    return MaximalSet.make(Kind.ROW, c, A), MaximalSet.make(Kind.COL, r, A)


def all_maximal_sets(field: FieldSpec, m: int, n: int) -> list[MaximalSet]:
    """Every maximal set of the space, each exactly once."""
    sp = space(field, m, n)
    check_cap(sp.size)
    seen: set[MaximalSet] = set()
    out = []
    for X in sp.mats:
        for M in maximal_sets_through(X):
            if M not in seen:
                seen.add(M)
                out.append(M)
    return out


def intersect(M: MaximalSet, N: MaximalSet) -> frozenset[Mat]:
    if M.shape != N.shape or M.field != N.field:
        raise ShapeMismatch("maximal sets live in different spaces")
    return frozenset(X for X in M.points() if X in N)


def line_through(M: MaximalSet, X: Mat, Y: Mat) -> Line:
    """The q points ``lambda (Y - X) + X`` inside ``M``."""
    if X == Y:
        raise InvalidWitness("a line needs two distinct points")
    if X not in M or Y not in M:
        raise InvalidWitness("points are not members of the carrier")
    D = Y - X
    pts = sorted((D.scale(lam) + X for lam in X.field.elements()), key=encode)
    return Line(M, tuple(pts))


def lines_of(M: MaximalSet) -> list[Line]:
    """All lines of the affine geometry on ``M``."""
    pts = M.points()
    seen, out = set(), []
    for X, Y in itertools.combinations(pts, 2):
        L = line_through(M, X, Y)
        if L.points not in seen:
            seen.add(L.points)
            out.append(L)
    return out


def are_collinear(M: MaximalSet, P1: Mat, P2: Mat, P3: Mat) -> bool:
    return P3 in line_through(M, P1, P2)


def membership_by_three_points(X: Mat, P1: Mat, P2: Mat, P3: Mat, M: MaximalSet) -> bool:
    """Decide ``X in M`` given three noncollinear witnesses of ``M``.

    A matrix adjacent to all three witnesses must lie in ``M``; the direct
    containment test is returned and any disagreement with that implication
    raises :class:`TheoremViolation`.
    """
    wit = (P1, P2, P3)
    if len(set(wit)) < 3 or any(P not in M for P in wit):
        raise InvalidWitness("witnesses must be three distinct members of M")
    if are_collinear(M, P1, P2, P3):
        raise InvalidWitness("witnesses are collinear")
    member = X in M
    if all(is_adjacent(X, P) for P in wit) and not member:
        raise TheoremViolation(f"{X!r} is adjacent to three noncollinear points of {M.describe()} but not in it")
    return member


def containing_maximal_set(S: Iterable[Mat]) -> MaximalSet:
    """A maximal set through ``0`` containing the adjacent set ``S`` (row type preferred)."""
    S = list(S)
    if not S:
        raise NotAdjacentSet("empty set")
    Z = Mat.zeros(S[0].field, S[0].m, S[0].n)
    if Z not in S:
        raise NotAdjacentSet("the set must contain 0")
    nz = [X for X in S if X != Z]
    if not nz:
        raise NotAdjacentSet("the set needs at least two points")
    c, r = rank_one_factors(nz[0]) if rank(nz[0]) == 1 else (None, None)
    if c is None:
        raise NotAdjacentSet("a nonzero member is not adjacent to 0")
    for M in (MaximalSet.make(Kind.ROW, c, Z), MaximalSet.make(Kind.COL, r, Z)):
        if all(X in M for X in S):
            return M
    raise NotAdjacentSet("the set is not contained in a maximal set")


def adjacent_set_dim(S: Iterable[Mat]) -> int:
    """Size of a maximal linearly independent subset of the normalized parameters of ``S``."""
    S = list(dict.fromkeys(S))
    for X, Y in itertools.combinations(S, 2):
        if rank(X - Y) != 1:
            raise NotAdjacentSet("members are not pairwise adjacent")
    M = containing_maximal_set(S)
    return stack_rank(M.field, (M.param(X) for X in S))


def ball(A: Mat) -> frozenset[Mat]:
    sp = space(A.field, A.m, A.n)
    check_cap(len(sp.ball_codes), what="unit ball")
    return frozenset(A + sp.mat(c) for c in sp.ball_codes)


def neighborhood(A: Mat) -> frozenset[Mat]:
    return ball(A) - {A}


def bfs_distance(A: Mat, B: Mat) -> int:
    """Shortest-path length in the matrix graph (explicit BFS)."""
    A._same(B)
    sp = space(A.field, A.m, A.n)
    check_cap(sp.size, what="BFS")
    return int(bfs_layers(sp, encode(A))[encode(B)])


def bfs_layers(sp, source: int) -> np.ndarray:
    dist = np.full(sp.size, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in sp.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(int(v))
    return dist


def graph_export(field: FieldSpec, m: int, n: int, fmt: str = "dot") -> str:
    """Serialize the matrix graph as DOT or as an edge list (vertex = encoding)."""
    sp = space(field, m, n)
    check_cap(sp.size, what="graph export")
    edges = sp.edges
    if fmt == "edgelist":
        return "".join(f"{a} {b}\n" for a, b in edges)
    if fmt != "dot":
        raise ValueError(f"unknown graph format {fmt!r}")
    lines = [f"graph bilinear_q{field.q}_{m}x{n} {{"]
    lines += [f'  {c} [label="{sp.mat(c).to_csv()}"];' for c in range(sp.size)]
    lines += [f"  {a} -- {b};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def support_dichotomy_holds(A: Mat, rows_alpha: set[int], cols_beta: set[int], B1: Mat, B2: Mat) -> bool:
    """Whether ``A`` (adjacent to distinct ``B1``, ``B2`` supported on rows alpha x columns beta)
    vanishes off the rows alpha or off the columns beta."""
    off_rows = all(A[i, j] == 0 for i in range(A.m) if i not in rows_alpha for j in range(A.n))
    off_cols = all(A[i, j] == 0 for i in range(A.m) for j in range(A.n) if j not in cols_beta)
    return off_rows or off_cols

