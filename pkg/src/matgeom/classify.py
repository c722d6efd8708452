"""Decide what an explicit map between matrix spaces is, and recover its parameters.

Every parametric verdict is verified by re-tabulating the recovered form and
comparing it with the input table entry by entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import canon
from .canon import CanonicalForm, Variant
from .errors import CapExceeded, PreconditionError
from .fields import FieldHom, FieldSpec, enumerate_field_homs
from .geometry import Kind, MaximalSet
from .maptable import MapTable
from .matrices import (
    Mat,
    check_cap,
    complete_columns,
    complete_rows,
    inverse,
    is_invertible,
    null_space,
    projective_vectors,
    rank,
    rank_factor,
    rank_one_factors,
)
from .space import PAIRWISE_LIMIT, MatrixSpace

# -- basic predicates -----------------------------------------------------------

def hom_witness(f: MapTable) -> tuple[Mat, Mat] | None:
    """The lowest-encoded edge ``(A, B)`` whose images are not adjacent, or None."""
    sp, dsp = f.src_space, f.dst_space
    e = sp.edges
    if not len(e):
        return None
    c = f.code_array
    r = dsp.ranks(dsp.diff_codes(c[e[:, 0]], c[e[:, 1]]))
    bad = np.flatnonzero(r != 1)
    if not len(bad):
        return None
    a, b = e[bad[0]]
    return sp.mat(a), sp.mat(b)


def is_graph_hom(f: MapTable) -> bool:
    return hom_witness(f) is None


def _pairwise_image_dist(f: MapTable, codes: np.ndarray | None = None) -> np.ndarray:
    dsp = f.dst_space
    c = f.code_array if codes is None else codes
    check_cap(len(c) ** 2, what="pairwise image distances")
    return dsp.ranks(dsp.diff_codes(c[:, None], c[None, :]))


def image_codes(f: MapTable) -> np.ndarray:
    return np.unique(f.code_array)


def is_colouring(f: MapTable) -> bool:
    """Whether distinct images are pairwise adjacent (image diameter at most one)."""
    u = image_codes(f)
    if len(u) < 2:
        return True
    d = _pairwise_image_dist(f, u)
    return bool(np.all((d == 1) | np.eye(len(u), dtype=bool)))


def is_additive(f: MapTable) -> bool:
    """Exact additivity test: ``f(A + G) = f(A) + f(G)`` for every A and each generator G.

    The generators ``g E_ij`` (g running over a basis of the field over its
    prime field) generate the additive group, so these equations imply
    additivity for all pairs by induction on word length.
    """
    sp, dsp = f.src_space, f.dst_space
    c = f.code_array
    if c[0] != 0:
        return False
    F = f.src
    gens = [sp.code(Mat.unit(F, f.m, f.n, i, j, F.index([1 if t == s else 0 for t in range(F.k)])))
            for i in range(f.m) for j in range(f.n) for s in range(F.k)]
    allc = np.arange(sp.size, dtype=np.int64)
    for g in gens:
        moved = sp.sum_codes(allc, g)
        if not np.array_equal(c[moved], dsp.sum_codes(c, c[g])):
            return False
    return True


def is_additive_exhaustive(f: MapTable) -> bool:
    """Additivity over all pairs (reference implementation for small spaces)."""
    sp, dsp = f.src_space, f.dst_space
    check_cap(sp.size ** 2, what="additivity pairs")
    allc = np.arange(sp.size, dtype=np.int64)
    s = sp.sum_codes(allc[:, None], allc[None, :])
    c = f.code_array
    return bool(np.array_equal(c[s], dsp.sum_codes(c[:, None], c[None, :])))


def is_distance_preserving(f: MapTable) -> bool:
    sp = f.src_space
    check_cap(sp.size ** 2, what="distance-preservation pairs")
    return bool(np.array_equal(sp.dist if sp.size <= PAIRWISE_LIMIT else _src_dist(sp), _pairwise_image_dist(f)))


def _src_dist(sp: MatrixSpace) -> np.ndarray:
    c = np.arange(sp.size, dtype=np.int64)
    return sp.ranks(sp.diff_codes(c[:, None], c[None, :]))


# -- degeneracy -----------------------------------------------------------------

def _normalize(F: FieldSpec, v) -> tuple[int, ...]:
    s = F.inv_table[next(x for x in v if x)]
    return tuple(F.mul_table[s][x] for x in v)


@lru_cache(maxsize=1 << 16)
def _classes(dsp: MatrixSpace, code: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Projective (column, row) classes of a rank-one matrix; None if rank > 1."""
    A = dsp.mat(code)
    if rank(A) != 1:
        return None
    c, r = rank_one_factors(A)
    return c, _normalize(dsp.field, r)


def _cover(dsp: MatrixSpace, rel_codes) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First (row-type direction, column-type direction) covering the relative points.

    A relative point ``D`` lies in the row-type set with direction ``c0`` when
    its column class is ``c0`` and in the column-type set with direction
    ``r0`` when its row class is ``r0``; the zero matrix lies in both.
    """
    pairs = set()
    for code in {int(x) for x in rel_codes}:
        if code == 0:
            continue
        cls = _classes(dsp, code)
        if cls is None:
            return None
        pairs.add(cls)
    rows0 = projective_vectors(dsp.field, dsp.n)
    for c0 in projective_vectors(dsp.field, dsp.m):
        rest = {r for c, r in pairs if c != c0}
        if len(rest) <= 1:
            return c0, (next(iter(rest)) if rest else rows0[0])
    return None


@dataclass(frozen=True)
class DegenerateWitness:
    A: Mat
    M: MaximalSet
    N: MaximalSet


def is_degenerate(f: MapTable) -> DegenerateWitness | None:
    """The first ``(A, M, N)`` with rank A <= 1 and ``f(ball(A))`` inside ``M u N``, both through ``f(A)``."""
    sp, dsp = f.src_space, f.dst_space
    c = f.code_array
    ball = sp.ball_codes
    for a in sorted(int(x) for x in ball):
        pts = sp.sum_codes(np.full(len(ball), a), ball)
        rel = dsp.diff_codes(c[pts], c[a])
        cov = _cover(dsp, rel)
        if cov is not None:
            Y = dsp.mat(c[a])
            return DegenerateWitness(sp.mat(a), MaximalSet.make(Kind.ROW, cov[0], Y),
                                     MaximalSet.make(Kind.COL, cov[1], Y))
    return None


@dataclass(frozen=True)
class RangeDecomposition:
    M: MaximalSet
    N: MaximalSet
    R: Mat


def range_contained(f: MapTable, M: MaximalSet, N: MaximalSet, R: Mat) -> bool:
    """Whether every image lies in ``(M + R) u (N + R)``."""
    MR, NR = M.translate(R), N.translate(R)
    return all(Y in MR or Y in NR for Y in f.image_set())


def find_range_decomposition(f: MapTable) -> RangeDecomposition | None:
    """Row- and column-type maximal sets ``M``, ``N`` through 0 and a matrix ``R``
    with ``image(f)`` inside ``(M + R) u (N + R)``; the lowest-encoded ``R`` wins."""
    dsp = f.dst_space
    u = image_codes(f)
    d = dsp.ranks(dsp.diff_codes(u[0], u))
    if d.max() > 2:
        return None
    cand = dsp.sum_codes(np.full(len(dsp.ball_codes), u[0]), dsp.ball_codes)
    far = np.flatnonzero(d == 2)
    if len(far):
        other = u[far[0]]
        cand = cand[dsp.ranks(dsp.diff_codes(cand, other)) <= 1]
    Z = Mat.zeros(dsp.field, dsp.m, dsp.n)
    for r in sorted(int(x) for x in cand):
        rel = dsp.diff_codes(u, r)
        if dsp.ranks(rel).max() > 1:
            continue
        cov = _cover(dsp, rel)
        if cov is not None:
            dec = RangeDecomposition(MaximalSet.make(Kind.ROW, cov[0], Z),
                                     MaximalSet.make(Kind.COL, cov[1], Z), dsp.mat(r))
            assert range_contained(f, dec.M, dec.N, dec.R)
            return dec
    return None


# -- parameter recovery ----------------------------------------------------------------

def _col(A: Mat, j: int, scale: int) -> tuple[int, ...]:
    F = A.field
    return tuple(F.mul(A[i, j], scale) for i in range(A.m))


def _row(A: Mat, i: int, scale: int) -> tuple[int, ...]:
    F = A.field
    return tuple(F.mul(A[i, j], scale) for j in range(A.n))


def _fit_additive(f: MapTable, transpose: bool) -> CanonicalForm | None:
    src, F = f.src, f.dst
    m, n = f.m, f.n
    unit = lambda i, j, x=1: f(Mat.unit(src, m, n, i, j, x))
    A11 = unit(0, 0)
    if rank(A11) != 1:
        return None
    p1, q1 = rank_one_factors(A11)
    t = next(i for i, x in enumerate(p1) if x)
    s = next(j for j, x in enumerate(q1) if x)
    # standard: f(E_ij) = p_i q_j; transpose: f(E_ij) = p_j q_i
    a_len, b_len = (n, m) if transpose else (m, n)
    ps, qs = [p1], [q1]
    for j in range(1, b_len):
        ps_img = unit(j, 0) if transpose else unit(0, j)
        qs.append(_row(ps_img, t, 1))
    for i in range(1, a_len):
        img = unit(0, i) if transpose else unit(i, 0)
        ps.append(_col(img, s, F.inv(q1[s])))
    # tau(x) from f(x E_11) = tau(x) p1 q1
    denom = F.inv(F.mul(p1[t], q1[s]))
    table = tuple(F.mul(unit(0, 0, x)[t, s], denom) if x else 0 for x in src.elements())
    tau = next((h for h in enumerate_field_homs(src, F) if h.table == table), None)
    if tau is None:
        return None
    P = Mat(F, f.dm, len(ps), tuple(ps[j][i] for i in range(f.dm) for j in range(len(ps))))
    Q = Mat.from_rows(F, qs)
    form = CanonicalForm(Variant.ADDITIVE_T if transpose else Variant.ADDITIVE, P, Q, tau)
    return form if canon.tabulate(form).codes == f.codes else None


def recover_additive(f: MapTable) -> CanonicalForm | None:
    """Fit ``P X^tau Q`` and then ``P tX^sigma Q`` to an additive homomorphism."""
    if not is_additive(f):
        raise PreconditionError("map is not additive")
    return _fit_additive(f, False) or _fit_additive(f, True)


def _full_rank_pair(f: MapTable, n: int) -> tuple[int, int] | None:
    dsp = f.dst_space
    c = f.code_array
    for a in range(len(c)):
        r = dsp.ranks(dsp.diff_codes(c, c[a]))
        hit = np.flatnonzero(r == n)
        if len(hit):
            return a, int(hit[0])
    return None


def _invertible_in_span(F: FieldSpec, basis: list[tuple[int, ...]], n: int) -> Mat | None:
    """An invertible n x n matrix in the span of ``basis`` (first in coefficient order)."""
    if not basis:
        return None
    check_cap(F.q ** len(basis), what="null-space combinations")
    for coeffs in itertools.product(range(F.q), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = [0] * (n * n)
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        S = Mat(F, n, n, tuple(v))
        if is_invertible(S):
            return S
    return None


def _fit_semrl(f: MapTable, tau: FieldHom, L: Mat, transpose: bool) -> CanonicalForm | None:
    """Fit ``g(X) = f(X) - f(0) = U K(X) V`` with ``K`` fixed by ``tau`` and ``L``."""
    F, n = f.dst, f.n
    I = Mat.identity(F, n)
    Zd = f(Mat.zeros(f.src, n, n))
    sp = f.src_space

    def K(X: Mat) -> Mat:
        Y = (X.T if transpose else X).apply(tau)
        return Y @ inverse(I + L @ Y) if transpose else inverse(I + Y @ L) @ Y

    K1inv = inverse(K(Mat.identity(f.src, n)))
    G1 = f(Mat.identity(f.src, n)) - Zd
    U0, V0, r = rank_factor(G1)
    if r != n:
        return None
    # left inverse of U0 and right inverse of V0
    U0p = inverse(complete_columns(U0, f.dm)).block(n, f.dm)
    V0p = inverse(complete_rows(V0, f.dn))
    V0p = Mat(F, f.dn, n, tuple(V0p[i, j] for i in range(f.dn) for j in range(n)))
    # S M(X) = H(X) S, linear in the entries of S
    rows = []
    for X in sp.mats:
        H = U0p @ (f(X) - Zd) @ V0p
        M = K(X) @ K1inv
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for t in range(n):
                    row[i * n + t] = F.add(row[i * n + t], M[t, j])
                    row[t * n + j] = F.sub(row[t * n + j], H[i, t])
                rows.append(row)
    S = _invertible_in_span(F, null_space(Mat.from_rows(F, rows)), n)
    if S is None:
        return None
    U = U0 @ S
    V = K1inv @ inverse(S) @ V0
    P, Q = complete_columns(U, f.dm), complete_rows(V, f.dn)
    if Zd.is_zero():
        v = Variant.SEMRL_T if transpose else Variant.SEMRL
        form = CanonicalForm(v, P, Q, tau, L)
    else:
        v = Variant.SHIFTED_T if transpose else Variant.SHIFTED
        form = CanonicalForm(v, P, Q, tau, L, Mat.zeros(f.src, n, n), Zd)
    return form if canon.tabulate(form).codes == f.codes else None


def recover_semrl(f: MapTable) -> CanonicalForm | None:
    """Brute-force ``tau`` and valid ``L`` in both orientations; solve for ``P``, ``Q``.

    The shift point is always the zero matrix (any shift point of a map in
    this family yields an equivalent form), with ``f(0)`` as the offset.
    """
    n = f.n
    if f.m != n or f.dm < n or f.dn < n:
        raise PreconditionError("needs a square source and a target at least n x n")
    if _full_rank_pair(f, n) is None:
        raise PreconditionError("no pair of images at distance n")
    for transpose in (False, True):
        for tau in enumerate_field_homs(f.src, f.dst):
            for L in canon.valid_Ls(tau, n):
                form = _fit_semrl(f, tau, L, transpose)
                if form is not None:
                    return form
    return None


# -- the decision ladder ----------------------------------------------------------------

@dataclass
class Classification:
    verdict: str
    params: dict = field(default_factory=dict)
    evidence: list[str] = field(default_factory=list)

    @property
    def form(self) -> CanonicalForm | None:
        return self.params.get("form")

    def render(self) -> str:
        lines = [f"verdict {self.verdict}"]
        for k, v in self.params.items():
            lines += [f"param {k}{sub} {text}" for sub, text in _render_value(v)]
        lines += [f"evidence {e}" for e in self.evidence]
        return "\n".join(lines) + "\n"


def _text(v) -> str:
    if isinstance(v, Mat):
        return f"{v.m}x{v.n}:{v.to_csv()}"
    if isinstance(v, FieldHom):
        return ",".join(map(str, v.table))
    if isinstance(v, MaximalSet):
        return v.describe()
    if isinstance(v, tuple):
        return " ".join(_text(x) for x in v)
    return str(v)


def _render_value(v) -> list[tuple[str, str]]:
    if isinstance(v, CanonicalForm):
        out = [(".variant", v.variant.value), (".P", _text(v.P)), (".Q", _text(v.Q)), (".tau", _text(v.tau))]
        if v.L is not None:
            out.append((".L", _text(v.L)))
        if v.A0 is not None:
            out += [(".A0", _text(v.A0)), (".offset", _text(v.offset))]
        return out
    return [("", _text(v))]


def classify(f: MapTable) -> Classification:
    """Run the fixed ladder: hom, colouring, additive, fractional, degenerate, distance preserving, other."""
    w = hom_witness(f)
    if w is not None:
        return Classification("NotGraphHom", {"witness": w}, ["edge with non-adjacent images"])
    ev = ["graph homomorphism: every edge checked"]
    if is_colouring(f):
        M = _clique_of(f)
        return Classification("Colouring", {"clique": M} if M else {}, ev + ["image is an adjacent set"])
    if is_additive(f):
        ev.append("additive")
        form = recover_additive(f)
        if form is not None:
            return Classification(form.variant.value, {"form": form}, ev + ["re-tabulation identical"])
        ev.append("theorem-violation: additive non-colouring hom without a fitted form")
    n = f.n
    if f.m == n and f.dm >= n and f.dn >= n and _full_rank_pair(f, n) is not None:
        try:
            form = recover_semrl(f)
        except CapExceeded as exc:
            form = None
            ev.append(f"cap: {exc}")
        if form is not None:
            name = Variant.SEMRL_T.value if form.variant.transpose else Variant.SEMRL.value
            return Classification(name, {"form": form}, ev + ["re-tabulation identical"])
        ev.append("no fractional form fits")
    wit = is_degenerate(f)
    if wit is not None:
        ev.append("degenerate at A with image of ball(A) in M u N")
        params = {"A": wit.A, "M": wit.M, "N": wit.N}
        dec = find_range_decomposition(f)
        if dec is not None:
            params.update({"range_M": dec.M, "range_N": dec.N, "R": dec.R})
            ev.append("image inside (M+R) u (N+R)")
        else:
            ev.append("no range decomposition")
        return Classification("DegenerateNonColouring", params, ev)
    try:
        dp = is_distance_preserving(f)
    except CapExceeded as exc:
        return Classification("HomOther", {}, ev + [f"cap: {exc}"])
    if dp:
        return Classification("DistancePreservingOther", {}, ev + ["all pairs keep their distance"])
    return Classification("HomOther", {}, ev)


def _clique_of(f: MapTable) -> MaximalSet | None:
    u = image_codes(f)
    if len(u) < 2:
        return None
    from .geometry import maximal_sets_containing_pair

    dsp = f.dst_space
    A, B = dsp.mat(u[0]), dsp.mat(u[1])
    imgs = [dsp.mat(c) for c in u]
    return next(M for M in maximal_sets_containing_pair(A, B) if all(Y in M for Y in imgs))


# -- order monotonicity ---------------------------------------------------------------------

@dataclass
class OrderReport:
    pairs_checked: int = 0
    triples_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_order_monotonicity(f: MapTable, triple_limit: int = 256, seed: int = 0) -> OrderReport:
    """Minus-order monotonicity, the induced three-point identity and distance contraction.

    Triples are exhaustive when the source has at most ``triple_limit``
    points; otherwise ``triple_limit`` middle points are drawn with ``seed``.
    """
    sp = f.src_space
    c = f.code_array
    if c[0] != 0:
        raise PreconditionError("map must fix 0")
    check_cap(sp.size ** 2, what="order-monotonicity pairs")
    D = sp.dist if sp.size <= PAIRWISE_LIMIT else _src_dist(sp)
    Df = _pairwise_image_dist(f)
    r, rf = D[0], Df[0]
    rep = OrderReport()
    N = sp.size
    rep.pairs_checked = N * N
    for a, b in zip(*np.nonzero(Df > D)):
        rep.violations.append(f"contraction {sp.mat(a).to_csv()} {sp.mat(b).to_csv()}")
    le = D == (r[None, :] - r[:, None])
    keep = le & (rf[None, :] == r[None, :])
    good = (Df == (rf[None, :] - rf[:, None])) & (rf[:, None] == r[:, None])
    for a, b in zip(*np.nonzero(keep & ~good)):
        rep.violations.append(f"order {sp.mat(a).to_csv()} <= {sp.mat(b).to_csv()}")
    if N <= triple_limit:
        mids = range(N)
    else:
        mids = sorted(np.random.default_rng(seed).choice(N, size=triple_limit, replace=False))
    for b in mids:
        # A indexes rows, C columns
        cond = (D[:, b][:, None] == D[b, :][None, :] - D) & (D[b, :] == Df[b, :])[None, :]
        ok = Df[:, b][:, None] == Df[b, :][None, :] - Df
        rep.triples_checked += N * N
        bad = np.argwhere(cond & ~ok)
        for a, cc in bad[:5]:
            rep.violations.append(
                f"triple {sp.mat(a).to_csv()} {sp.mat(b).to_csv()} {sp.mat(cc).to_csv()}")
    return rep
