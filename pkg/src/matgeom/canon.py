"""Canonical homomorphism forms between matrix spaces.

Additive forms ``P X^t Q`` and ``P tX^s Q``; the fractional forms
``P[(I + X^t L)^-1 X^t (+) 0]Q`` and ``P[tX^s (I + L tX^s)^-1 (+) 0]Q``;
their shifted versions; and a tower-field colouring builder.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cache

import numpy as np

from .errors import (
    ImproperColouring,
    InvalidL,
    PreconditionError,
    ShapeMismatch,
    TargetTooSmall,
)
from .fields import FieldHom, FieldSpec
from .geometry import MaximalSet
from .maptable import MapTable
from .matrices import Mat, check_cap, inverse, is_invertible, rank
from .space import space


class Variant(str, enum.Enum):
    ADDITIVE = "AdditiveStandard"
    ADDITIVE_T = "AdditiveTranspose"
    SEMRL = "SemrlStandard"
    SEMRL_T = "SemrlTranspose"
    SHIFTED = "ShiftedSemrlStandard"
    SHIFTED_T = "ShiftedSemrlTranspose"

    @property
    def transpose(self) -> bool:
        return self in (Variant.ADDITIVE_T, Variant.SEMRL_T, Variant.SHIFTED_T)

    @property
    def additive(self) -> bool:
        return self in (Variant.ADDITIVE, Variant.ADDITIVE_T)

    @property
    def shifted(self) -> bool:
        return self in (Variant.SHIFTED, Variant.SHIFTED_T)


@dataclass(frozen=True)
class CanonicalForm:
    variant: Variant
    P: Mat
    Q: Mat
    tau: FieldHom
    L: Mat | None = None
    A0: Mat | None = None
    offset: Mat | None = None

    @property
    def src_field(self) -> FieldSpec:
        return self.tau.src

    @property
    def dst_field(self) -> FieldSpec:
        return self.tau.dst

    @property
    def src_shape(self) -> tuple[int, int]:
        if self.variant is Variant.ADDITIVE:
            return self.P.n, self.Q.m
        if self.variant is Variant.ADDITIVE_T:
            return self.Q.m, self.P.n
        return self.L.m, self.L.m

    @property
    def dst_shape(self) -> tuple[int, int]:
        return self.P.m, self.Q.n

    def validate(self, check_L: bool = True) -> CanonicalForm:
        """Check shapes, ranks and (optionally, exhaustively) the validity of ``L``."""
        F = self.dst_field
        for M in (self.P, self.Q) + ((self.L,) if self.L is not None else ()):
            if M.field != F:
                raise PreconditionError("P, Q and L must live over the target field")
        if self.variant.additive:
            if rank(self.P) < 2 or rank(self.Q) < 2:
                raise PreconditionError("additive forms need rank(P) >= 2 and rank(Q) >= 2")
            return self
        if self.L is None or self.L.m != self.L.n:
            raise PreconditionError("fractional forms need a square L")
        n = self.L.n
        if self.P.m != self.P.n or self.Q.m != self.Q.n or not (is_invertible(self.P) and is_invertible(self.Q)):
            raise PreconditionError("fractional forms need invertible P and Q")
        if self.P.m < n or self.Q.n < n:
            raise ShapeMismatch("target shape must be at least n x n")
        if self.variant.shifted:
            if self.A0 is None or self.offset is None:
                raise PreconditionError("shifted forms need A0 and offset")
            if self.A0.shape != (n, n) or self.A0.field != self.src_field or self.offset.shape != self.dst_shape:
                raise ShapeMismatch("A0 or offset has the wrong shape")
        if check_L and self.L not in valid_Ls(self.tau, n):
            raise InvalidL("I + X^tau L is singular for some X")
        return self


def additive(P: Mat, tau: FieldHom, Q: Mat, transpose: bool = False) -> CanonicalForm:
    return CanonicalForm(Variant.ADDITIVE_T if transpose else Variant.ADDITIVE, P, Q, tau).validate()


def semrl(P: Mat, tau: FieldHom, L: Mat, Q: Mat, transpose: bool = False) -> CanonicalForm:
    return CanonicalForm(Variant.SEMRL_T if transpose else Variant.SEMRL, P, Q, tau, L).validate()


def shifted_semrl(P: Mat, tau: FieldHom, L: Mat, Q: Mat, A0: Mat, offset: Mat,
                  transpose: bool = False) -> CanonicalForm:
    v = Variant.SHIFTED_T if transpose else Variant.SHIFTED
    return CanonicalForm(v, P, Q, tau, L, A0, offset).validate()


def eval(form: CanonicalForm, X: Mat) -> Mat:
    """Apply the form's formula literally to ``X``."""
    if X.field != form.src_field or X.shape != form.src_shape:
        raise ShapeMismatch(f"{X!r} is not in the source space")
    v = form.variant
    Y = (X.T if v.transpose else X).apply(form.tau)
    if v.additive:
        return form.P @ Y @ form.Q
    n = form.L.n
    F = form.dst_field
    I = Mat.identity(F, n)
    L = form.L
    try:
        if v.transpose:
            W = inverse(I + L @ Y)
        else:
            W = inverse(I + Y @ L)
    except ZeroDivisionError as exc:
        raise InvalidL(f"I + X^tau L is singular at {X.to_csv()}") from exc
    if v.shifted:
        Y0 = (form.A0.T if v.transpose else form.A0).apply(form.tau)
        B = (Y - Y0) @ W if v.transpose else W @ (Y - Y0)
    else:
        B = Y @ W if v.transpose else W @ Y
    out = form.P @ B.padded(*form.dst_shape) @ form.Q
    return out + form.offset if v.shifted else out


def tabulate(form: CanonicalForm) -> MapTable:
    m, n = form.src_shape
    dm, dn = form.dst_shape
    return MapTable.from_function(form.src_field, m, n, form.dst_field, dm, dn, lambda X: eval(form, X))


# -- valid L ------------------------------------------------------------------

def _digit_matmul(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched matrix product of digit arrays (..., m, k) @ (..., k, n) over ``F``."""
    add = np.array(F.add_table, dtype=np.int64)
    mul = np.array(F.mul_table, dtype=np.int64)
    k = a.shape[-1]
    acc = mul[a[..., :, 0, None], b[..., None, 0, :]]
    for t in range(1, k):
        acc = add[acc, mul[a[..., :, t, None], b[..., None, t, :]]]
    return acc


@cache
def _valid_Ls(tau: FieldHom, n: int) -> tuple[Mat, ...]:
    F = tau.dst
    sp = space(F, n, n)
    check_cap(sp.size * len(set(tau.table)) ** (n * n), what="valid-L search")
    image = sorted(set(tau.table))
    ys = np.array(list(itertools.product(image, repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    Ls = sp.digits(np.arange(sp.size)).reshape(-1, n, n)
    eye = np.eye(n, dtype=np.int64)
    add = np.array(F.add_table, dtype=np.int64)
    ok = np.ones(sp.size, dtype=bool)
    for Y in ys:
        prod = _digit_matmul(F, np.broadcast_to(Y, Ls.shape), Ls)
        M = add[prod, eye]
        codes = sp.from_digits(M.reshape(len(Ls), -1))
        ok &= sp.ranks(codes) == n
    return tuple(sp.mat(c) for c in np.nonzero(ok)[0])


def valid_Ls(tau: FieldHom, n: int) -> list[Mat]:
    """Every n x n ``L`` over the target field with ``I + X^tau L`` invertible for all ``X``."""
    return list(_valid_Ls(tau, n))


# -- colourings ------------------------------------------------------------------

def _poly_divmod_zero(F: FieldSpec, a: list[int], b: list[int]) -> bool:
    """Whether monic ``b`` divides ``a`` (coefficients low to high)."""
    a = list(a)
    while len(a) >= len(b):
        c = a[-1]
        if c:
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        a.pop()
    return not any(a)


def tower_modulus(F: FieldSpec, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``m`` over ``F`` (coefficients low to high)."""
    for tail in itertools.product(range(F.q), repeat=m):
        f = list(tail) + [1]
        if m == 1 or (f[0] and not any(
                _poly_divmod_zero(F, f, list(g) + [1])
                for d in range(1, m // 2 + 1)
                for g in itertools.product(range(F.q), repeat=d))):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


def _tower_mul(F: FieldSpec, f: tuple[int, ...], a, b) -> tuple[int, ...]:
    m = len(f) - 1
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = F.add(prod[i + j], F.mul(x, y))
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i in range(m + 1):
                prod[d - m + i] = F.sub(prod[d - m + i], F.mul(c, f[i]))
    return tuple(prod[:m])


def make_colouring(src: FieldSpec, m: int, n: int, target: MaximalSet,
                   weights=None) -> MapTable:
    """A colouring of GF(q)^{m x n} with colours the points of ``target``.

    Columns (rows when n > m) are read as elements of GF(q^m) and combined
    with weights independent over GF(q), so rank-one differences give
    nonzero colour differences.  The result is verified before returning.
    """
    from .classify import is_colouring, is_graph_hom

    k, s = (m, n) if n <= m else (n, m)
    if target.size < src.q ** k:
        raise TargetTooSmall(f"{target.size} points cannot hold {src.q ** k} colours")
    f = tower_modulus(src, k)
    if weights is None:
        weights = [tuple(1 if i == j else 0 for i in range(k)) for j in range(s)]
    weights = [tuple(w) for w in weights]
    if len(weights) != s or any(len(w) != k for w in weights):
        raise PreconditionError(f"need {s} weights of length {k}")
    pts = target.points()
    dm, dn = target.shape

    def colour(X: Mat) -> Mat:
        vecs = X.rows() if n > m else [X.col(j) for j in range(n)]
        acc = (0,) * k
        for w, v in zip(weights, vecs):
            acc = tuple(src.add(a, b) for a, b in zip(acc, _tower_mul(src, f, w, v)))
        return pts[_tower_index(src, acc)]

    table = MapTable.from_function(src, m, n, target.field, dm, dn, colour)
    if is_graph_hom(table) is not True or not is_colouring(table):
        raise ImproperColouring("the weights do not give a proper colouring")
    return table


def _tower_index(F: FieldSpec, coeffs) -> int:
    idx = 0
    for c in reversed(coeffs):
        idx = idx * F.q + c
    return idx


def colour_target(dst: FieldSpec, dm: int, dn: int) -> MaximalSet:
    """The row-type maximal set through 0 with direction e_1 (the first-row matrices)."""
    from .geometry import Kind

    return MaximalSet.make(Kind.ROW, (1,) + (0,) * (dm - 1), Mat.zeros(dst, dm, dn))
