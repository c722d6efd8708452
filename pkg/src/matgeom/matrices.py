"""Dense matrices over a finite field.

Entries are field element indices (see :mod:`matgeom.fields`), stored
row-major in a tuple.  Everything here is exact; ranks come from Gaussian
elimination with a fixed pivot rule (first nonzero entry of the current
column at or below the current row, scanning columns left to right).
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from . import config
from .errors import CapExceeded, DivisionByZero, FieldMismatch, ShapeMismatch
from .fields import FieldHom, FieldSpec


@dataclass(frozen=True)
class Mat:
    field: FieldSpec
    m: int
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.m * self.n:
            raise ShapeMismatch(f"{len(self.entries)} entries for a {self.m}x{self.n} matrix")

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> Mat:
        return cls(field, m, n, (0,) * (m * n))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Mat:
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def unit(cls, field: FieldSpec, m: int, n: int, i: int, j: int, value: int = 1) -> Mat:
        """``value`` at (i, j) (zero-based), zeros elsewhere."""
        entries = [0] * (m * n)
        entries[i * n + j] = value
        return cls(field, m, n, tuple(entries))

    @classmethod
    def diag_identity(cls, field: FieldSpec, m: int, n: int, r: int) -> Mat:
        """diag(I_r, 0) of shape m x n."""
        return cls(field, m, n, tuple(1 if i == j and i < r else 0 for i in range(m) for j in range(n)))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]]) -> Mat:
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(field, m, n, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_csv(cls, field: FieldSpec, m: int, n: int, text: str) -> Mat:
        try:
            entries = tuple(int(tok) for tok in text.strip().split(","))
        except ValueError as exc:
            raise ShapeMismatch(f"malformed matrix text {text!r}") from exc
        if any(not 0 <= e < field.q for e in entries):
            raise ShapeMismatch(f"entry out of range for GF({field.q}) in {text!r}")
        return cls(field, m, n, entries)

    def to_csv(self) -> str:
        return ",".join(map(str, self.entries))

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def rows(self) -> list[tuple[int, ...]]:
        n = self.n
        return [self.entries[i * n:(i + 1) * n] for i in range(self.m)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.n:(i + 1) * self.n]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.n]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(map(str, r)) for r in self.rows())
        return f"Mat[GF({self.field.q}) {self.m}x{self.n}: {body}]"

    # -- arithmetic ---------------------------------------------------
    def _same(self, other: Mat) -> None:
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.q}) vs GF({other.field.q})")
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: Mat) -> Mat:
        self._same(other)
        add = self.field.add_table
        return Mat(self.field, self.m, self.n, tuple(add[a][b] for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: Mat) -> Mat:
        self._same(other)
        sub = self.field.sub_table
        return Mat(self.field, self.m, self.n, tuple(sub[a][b] for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> Mat:
        neg = self.field.neg_table
        return Mat(self.field, self.m, self.n, tuple(neg[a] for a in self.entries))

    def scale(self, c: int) -> Mat:
        mul = self.field.mul_table[c]
        return Mat(self.field, self.m, self.n, tuple(mul[a] for a in self.entries))

    def __matmul__(self, other: Mat) -> Mat:
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.q}) vs GF({other.field.q})")
        if self.n != other.m:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        add, mul = self.field.add_table, self.field.mul_table
        m, k, n = self.m, self.n, other.n
        a, b = self.entries, other.entries
        out = []
        for i in range(m):
            arow = a[i * k:(i + 1) * k]
            for j in range(n):
                acc = 0
                for t in range(k):
                    x = arow[t]
                    if x:
                        y = b[t * n + j]
                        if y:
                            acc = add[acc][mul[x][y]]
                out.append(acc)
        return Mat(self.field, m, n, tuple(out))

    @property
    def T(self) -> Mat:
        return Mat(self.field, self.n, self.m, tuple(self.entries[i * self.n + j] for j in range(self.n) for i in range(self.m)))

    def apply(self, hom: FieldHom) -> Mat:
        """Entrywise image A^tau."""
        if hom.src != self.field:
            raise FieldMismatch("homomorphism source does not match the matrix field")
        t = hom.table
        return Mat(hom.dst, self.m, self.n, tuple(t[a] for a in self.entries))

    def padded(self, m: int, n: int) -> Mat:
        """Embed as the top-left block of an m x n zero matrix."""
        if m < self.m or n < self.n:
            raise ShapeMismatch(f"cannot pad {self.shape} into {(m, n)}")
        entries = [0] * (m * n)
        for i in range(self.m):
            entries[i * n:i * n + self.n] = self.entries[i * self.n:(i + 1) * self.n]
        return Mat(self.field, m, n, tuple(entries))

    def block(self, m: int, n: int) -> Mat:
        """Top-left m x n block."""
        return Mat(self.field, m, n, tuple(self.entries[i * self.n + j] for i in range(m) for j in range(n)))

    def rank(self) -> int:
        return rank(self)


def _echelon(A: Mat, aug: Mat | None = None) -> tuple[list[list[int]], list[list[int]] | None, list[int]]:
    """Reduced row echelon form of ``A``; the same row operations are applied to ``aug``."""
    F = A.field
    add, mul, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    R = [list(r) for r in A.rows()]
    X = [list(r) for r in aug.rows()] if aug is not None else None
    m, n = A.m, A.n
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        piv = next((i for i in range(row, m) if R[i][col]), None)
        if piv is None:
            continue
        if piv != row:
            R[row], R[piv] = R[piv], R[row]
            if X is not None:
                X[row], X[piv] = X[piv], X[row]
        s = inv[R[row][col]]
        if s != 1:
            R[row] = [mul[s][v] for v in R[row]]
            if X is not None:
                X[row] = [mul[s][v] for v in X[row]]
        for i in range(m):
            c = R[i][col]
            if i != row and c:
                f = neg[c]
                mf = mul[f]
                R[i] = [add[a][mf[b]] for a, b in zip(R[i], R[row])]
                if X is not None:
                    X[i] = [add[a][mf[b]] for a, b in zip(X[i], X[row])]
        pivots.append(col)
        row += 1
    return R, X, pivots


def rank(A: Mat) -> int:
    if A.is_zero():
        return 0
    return len(_echelon(A)[2])


def rref(A: Mat) -> tuple[Mat, list[int]]:
    R, _, piv = _echelon(A)
    return Mat.from_rows(A.field, R) if A.m else A, piv


def inverse(A: Mat) -> Mat:
    if A.m != A.n:
        raise ShapeMismatch("inverse of a non-square matrix")
    _, X, piv = _echelon(A, Mat.identity(A.field, A.m))
    if len(piv) != A.m:
        raise DivisionByZero("matrix is singular")
    return Mat.from_rows(A.field, X)


def is_invertible(A: Mat) -> bool:
    return A.m == A.n and rank(A) == A.m


def normal_form(A: Mat) -> tuple[Mat, Mat, int]:
    """Invertible ``P``, ``Q`` and ``r = rank(A)`` with ``A = P diag(I_r, 0) Q``.

    ``P`` undoes the row reduction of ``A``; ``Q`` stacks the nonzero rows of
    the reduced echelon form over unit rows for the non-pivot columns.
    """
    F, m, n = A.field, A.m, A.n
    R, X, piv = _echelon(A, Mat.identity(F, m))
    r = len(piv)
    P = inverse(Mat.from_rows(F, X)) if m else Mat.identity(F, 0)
    free = [j for j in range(n) if j not in piv]
    qrows = [R[i] for i in range(r)] + [[1 if t == j else 0 for t in range(n)] for j in free]
    Q = Mat.from_rows(F, qrows) if n else Mat.identity(F, 0)
    return P, Q, r


def g_inverse(A: Mat) -> Mat:
    """The canonical g-inverse ``Q^-1 diag(I_r, 0) P^-1`` (so ``A G A = A``)."""
    P, Q, r = normal_form(A)
    return inverse(Q) @ Mat.diag_identity(A.field, A.n, A.m, r) @ inverse(P)


def _check_pair(A: Mat, B: Mat) -> None:
    A._same(B)


def is_adjacent(A: Mat, B: Mat) -> bool:
    _check_pair(A, B)
    return rank(A - B) == 1


def distance(A: Mat, B: Mat) -> int:
    _check_pair(A, B)
    return rank(A - B)


def minus_le(A: Mat, B: Mat) -> bool:
    """The minus partial order: rank(B - A) = rank(B) - rank(A)."""
    _check_pair(A, B)
    return rank(B - A) == rank(B) - rank(A)


def all_g_inverses(A: Mat, cap: int | None = None) -> list[Mat]:
    """Every n x m matrix G with A G A = A (exhaustive)."""
    cap = config.get().enumeration_cap if cap is None else cap
    return [G for G in iter_matrices(A.field, A.n, A.m, cap=cap) if A @ G @ A == A]


def minus_le_via_ginverse(A: Mat, B: Mat, cap: int | None = None) -> bool:
    """Decide A <= B by searching all g-inverses G of A for A G = B G and G A = G B."""
    _check_pair(A, B)
    ginvs = all_g_inverses(A, cap)
    D = A - B
    left = any((D @ G).is_zero() for G in ginvs)
    return left and any((G @ D).is_zero() for G in ginvs)


def simultaneous_normal_form(A: Mat, B: Mat) -> tuple[Mat, Mat, int, int] | None:
    """Invertible ``P``, ``Q`` with ``A = P diag(I_r,0) Q`` and ``B = P diag(I_{r+s},0) Q``.

    Built from rank factorizations of ``A`` and ``B - A``; returns ``None``
    when the stacked factors are rank deficient.  A returned pair is always
    verified by multiplication.
    """
    _check_pair(A, B)
    F, m, n = A.field, A.m, A.n
    C = B - A
    U1, V1, r = rank_factor(A)
    U2, V2, s = rank_factor(C)
    U = hstack(U1, U2) if r + s else None
    V = vstack(V1, V2) if r + s else None
    if r + s and (rank(U) != r + s or rank(V) != r + s):
        return None
    P = complete_columns(U, m) if r + s else Mat.identity(F, m)
    Q = complete_rows(V, n) if r + s else Mat.identity(F, n)
    if P @ Mat.diag_identity(F, m, n, r) @ Q != A or P @ Mat.diag_identity(F, m, n, r + s) @ Q != B:
        return None
    return P, Q, r, s


def rank_factor(A: Mat) -> tuple[Mat, Mat, int]:
    """``A = U V`` with ``U`` m x r and ``V`` r x n of full rank r."""
    P, Q, r = normal_form(A)
    U = Mat(A.field, A.m, r, tuple(P[i, j] for i in range(A.m) for j in range(r)))
    V = Mat(A.field, r, A.n, Q.entries[:r * A.n])
    return U, V, r


def hstack(A: Mat, B: Mat) -> Mat:
    if A.m != B.m:
        raise ShapeMismatch("hstack row mismatch")
    return Mat.from_rows(A.field, [ra + rb for ra, rb in zip(A.rows(), B.rows())]) if A.m else Mat(A.field, 0, A.n + B.n, ())


def vstack(A: Mat, B: Mat) -> Mat:
    if A.n != B.n:
        raise ShapeMismatch("vstack column mismatch")
    return Mat(A.field, A.m + B.m, A.n, A.entries + B.entries)


def complete_rows(V: Mat, n: int) -> Mat:
    """Extend the independent rows of ``V`` by unit rows to an invertible n x n matrix."""
    rows = list(V.rows())
    r = rank(V)
    for j in range(n):
        if len(rows) == n:
            break
        cand = rows + [tuple(1 if t == j else 0 for t in range(n))]
        rk = rank(Mat.from_rows(V.field, cand))
        if rk > r:
            rows, r = cand, rk
    return Mat.from_rows(V.field, rows)


def complete_columns(U: Mat, m: int) -> Mat:
    return complete_rows(U.T, m).T


def null_space(A: Mat) -> list[tuple[int, ...]]:
    """Basis of {x : A x = 0} as column vectors (tuples of length n)."""
    F = A.field
    R, _, piv = _echelon(A)
    neg = F.neg_table
    free = [j for j in range(A.n) if j not in piv]
    basis = []
    for fj in free:
        v = [0] * A.n
        v[fj] = 1
        for i, pj in enumerate(piv):
            v[pj] = neg[R[i][fj]]
        basis.append(tuple(v))
    return basis


def solve(A: Mat, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some x with A x = b, or None."""
    F = A.field
    aug = Mat.from_rows(F, [[v] for v in b])
    _, X, piv = _echelon(A, aug)
    r = len(piv)
    if any(X[i][0] for i in range(r, A.m)):
        return None
    x = [0] * A.n
    for i, pj in enumerate(piv):
        x[pj] = X[i][0]
    return tuple(x)


# -- encoding and enumeration ----------------------------------------------

def encode(A: Mat) -> int:
    """Base-q integer of the row-major entry sequence, first entry most significant."""
    q = A.field.q
    code = 0
    for e in A.entries:
        code = code * q + e
    return code


def decode(field: FieldSpec, m: int, n: int, code: int) -> Mat:
    q = field.q
    entries = [0] * (m * n)
    for t in range(m * n - 1, -1, -1):
        code, entries[t] = divmod(code, q)
    return Mat(field, m, n, tuple(entries))


def check_cap(count: int, cap: int | None = None, what: str = "enumeration") -> None:
    cap = config.get().enumeration_cap if cap is None else cap
    if count > cap:
        raise CapExceeded(f"{what} of {count} states exceeds cap {cap}")


def iter_matrices(field: FieldSpec, m: int, n: int, cap: int | None = None) -> Iterator[Mat]:
    """All m x n matrices in encoding order."""
    check_cap(field.q ** (m * n), cap)
    for entries in itertools.product(range(field.q), repeat=m * n):
        yield Mat(field, m, n, entries)


def enumerate_rank(field: FieldSpec, m: int, n: int, r: int, cap: int | None = None) -> Iterator[Mat]:
    """Every rank-r matrix exactly once, in encoding order."""
    if not 0 <= r <= min(m, n):
        raise ValueError(f"rank {r} impossible for {m}x{n}")
    for A in iter_matrices(field, m, n, cap):
        if rank(A) == r:
            yield A


def invertible_matrices(field: FieldSpec, n: int, cap: int | None = None) -> list[Mat]:
    return [A for A in iter_matrices(field, n, n, cap) if rank(A) == n]


def projective_vectors(field: FieldSpec, length: int) -> list[tuple[int, ...]]:
    """Nonzero vectors whose first nonzero coordinate is 1, in lexicographic order."""
    out = []
    for v in itertools.product(range(field.q), repeat=length):
        nz = next((x for x in v if x), 0)
        if nz == 1:
            out.append(v)
    return out


def outer(field: FieldSpec, col: Sequence[int], row: Sequence[int]) -> Mat:
    mul = field.mul_table
    return Mat(field, len(col), len(row), tuple(mul[c][r] for c in col for r in row))


def rank_one_factors(A: Mat) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(c, r)`` with ``A = c r`` and the first nonzero entry of ``c`` equal to 1."""
    t = next((i for i in range(A.m) if any(A.row(i))), None)
    if t is None or rank(A) != 1:
        raise ValueError("matrix is not of rank one")
    r = A.row(t)
    j = next(j for j in range(A.n) if r[j])
    F = A.field
    inv_rj = F.inv_table[r[j]]
    col = tuple(F.mul_table[A[i, j]][inv_rj] for i in range(A.m))
    return col, r


def stack_rank(field: FieldSpec, vectors: Iterable[Sequence[int]]) -> int:
    rows = [tuple(v) for v in vectors]
    if not rows:
        return 0
    return rank(Mat.from_rows(field, rows))
