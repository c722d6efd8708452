"""Integer-coded view of a matrix space for exhaustive sweeps.

Every matrix of ``GF(q)^{m x n}`` is identified with its encoding (see
:func:`matgeom.matrices.encode`).  Sweeps work on numpy arrays of codes:
entrywise differences are taken digit by digit through the field's
subtraction table and ranks are looked up (and memoized) per code.
"""

from __future__ import annotations

from functools import cache, cached_property

import numpy as np

from .fields import FieldSpec
from .matrices import Mat, check_cap, decode, encode, projective_vectors, rank

PAIRWISE_LIMIT = 4096


class MatrixSpace:
    def __init__(self, field: FieldSpec, m: int, n: int):
        self.field, self.m, self.n = field, m, n
        self.q = field.q
        self.size = field.q ** (m * n)
        self._weights = np.array([self.q ** (m * n - 1 - t) for t in range(m * n)], dtype=np.int64)
        self._sub = np.array(field.sub_table, dtype=np.int64)
        self._add = np.array(field.add_table, dtype=np.int64)
        self._rank_cache: dict[int, int] = {}

    def __repr__(self) -> str:
        return f"MatrixSpace(GF({self.q}), {self.m}x{self.n})"

    def mat(self, code: int) -> Mat:
        return decode(self.field, self.m, self.n, int(code))

    def code(self, A: Mat) -> int:
        return encode(A)

    @cached_property
    def mats(self) -> list[Mat]:
        check_cap(self.size)
        return [self.mat(c) for c in range(self.size)]

    def digits(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._weights) % self.q

    def from_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self._weights

    def diff_codes(self, a, b) -> np.ndarray:
        """Codes of ``A - B`` for broadcastable code arrays ``a``, ``b``."""
        return self.from_digits(self._sub[self.digits(a), self.digits(b)])

    def sum_codes(self, a, b) -> np.ndarray:
        return self.from_digits(self._add[self.digits(a), self.digits(b)])

    def rank_of(self, code: int) -> int:
        code = int(code)
        r = self._rank_cache.get(code)
        if r is None:
            r = self._rank_cache[code] = rank(self.mat(code))
        return r

    @cached_property
    def rank_table(self) -> np.ndarray:
        check_cap(self.size)
        return np.array([rank(A) for A in self.mats], dtype=np.int8)

    def ranks(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        if self.size <= 1 << 16:
            return self.rank_table[codes]
        uniq, inv = np.unique(codes, return_inverse=True)
        vals = np.array([self.rank_of(c) for c in uniq], dtype=np.int8)
        return vals[inv].reshape(codes.shape)

    @cached_property
    def rank1_codes(self) -> np.ndarray:
        """Codes of all rank-one matrices ``c r`` (``c`` projectively normalized), sorted."""
        F = self.field
        mul = F.mul_table
        out = []
        rows = [v for v in projective_vectors(F, self.n)]
        scalars = range(1, self.q)
        for c in projective_vectors(F, self.m):
            for r in rows:
                for s in scalars:
                    entries = tuple(mul[ci][mul[s][rj]] for ci in c for rj in r)
                    out.append(encode(Mat(F, self.m, self.n, entries)))
        return np.array(sorted(out), dtype=np.int64)

    @cached_property
    def ball_codes(self) -> np.ndarray:
        """Codes of ``D_{<=1}`` (zero first)."""
        return np.concatenate([np.zeros(1, dtype=np.int64), self.rank1_codes])

    def neighbors(self, code: int) -> np.ndarray:
        return self.sum_codes(np.full(len(self.rank1_codes), code), self.rank1_codes)

    @cached_property
    def dist(self) -> np.ndarray:
        """Pairwise rank distances (only for small spaces)."""
        check_cap(self.size, PAIRWISE_LIMIT, "pairwise distance table")
        codes = np.arange(self.size, dtype=np.int64)
        return self.ranks(self.diff_codes(codes[:, None], codes[None, :]))

    @cached_property
    def edges(self) -> np.ndarray:
        """Each edge ``(a, b)`` with ``a < b`` exactly once, lexicographic order."""
        if self.size <= PAIRWISE_LIMIT:
            a, b = np.nonzero(np.triu(self.dist == 1))
            return np.stack([a, b], axis=1).astype(np.int64)
        check_cap(self.size * len(self.rank1_codes))
        codes = np.arange(self.size, dtype=np.int64)
        nb = self.sum_codes(codes[:, None], self.rank1_codes[None, :])
        a = np.repeat(codes, len(self.rank1_codes))
        b = nb.ravel()
        keep = a < b
        e = np.stack([a[keep], b[keep]], axis=1)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    @cached_property
    def degree(self) -> int:
        return len(self.rank1_codes)


@cache
def space(field: FieldSpec, m: int, n: int) -> MatrixSpace:
    return MatrixSpace(field, m, n)
