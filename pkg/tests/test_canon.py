import itertools
import random

import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matgeom import canon
from matgeom.canon import CanonicalForm, Variant
from matgeom.classify import (
    is_colouring,
    is_degenerate,
    is_distance_preserving,
    is_graph_hom,
)
from matgeom.errors import (
    ImproperColouring,
    InvalidL,
    PreconditionError,
    TargetTooSmall,
)
from matgeom.fields import enumerate_field_homs, gf, identity_hom
from matgeom.geometry import Kind, MaximalSet
from matgeom.matrices import Mat, is_invertible, rank
from matgeom.space import space

F2, F3, F4 = gf(2), gf(3), gf(4)
EMB = enumerate_field_homs(F2, F4)[0]
OMEGA_E11 = Mat.unit(F4, 2, 2, 0, 0, 2)


def rand_inv(F, n, rng):
    while True:
        A = Mat(F, n, n, tuple(rng.randrange(F.q) for _ in range(n * n)))
        if is_invertible(A):
            return A


def test_identity_form():
    I = Mat.identity(F2, 2)
    t = canon.tabulate(canon.additive(I, identity_hom(F2), I))
    assert t.codes == tuple(range(16))


def test_valid_Ls():
    for q in (2, 3, 4):
        F = gf(q)
        for tau in enumerate_field_homs(F, F):
            assert canon.valid_Ls(tau, 2) == [Mat.zeros(F, 2, 2)]
    Ls = canon.valid_Ls(EMB, 2)
    assert OMEGA_E11 in Ls and Mat.zeros(F4, 2, 2) in Ls
    assert len(Ls) == oracles.valid_L_count_embedding()


def test_invalid_L_rejected():
    with pytest.raises(InvalidL):
        canon.semrl(Mat.identity(F2, 2), identity_hom(F2), Mat.unit(F2, 2, 2, 0, 0), Mat.identity(F2, 2))
    form = CanonicalForm(Variant.SEMRL, Mat.identity(F2, 2), Mat.identity(F2, 2), identity_hom(F2),
                         Mat.unit(F2, 2, 2, 0, 0))
    with pytest.raises(InvalidL):
        canon.eval(form, Mat.unit(F2, 2, 2, 0, 0))


def test_additive_rank_condition():
    with pytest.raises(PreconditionError):
        canon.additive(Mat.unit(F2, 2, 2, 0, 0), identity_hom(F2), Mat.identity(F2, 2))


def test_fractional_form_is_well_defined_and_distance_preserving():
    I = Mat.identity(F4, 2)
    form = canon.semrl(I, EMB, OMEGA_E11, I)
    t = canon.tabulate(form)
    assert t(Mat.zeros(F2, 2, 2)).is_zero()
    assert is_graph_hom(t) and is_distance_preserving(t)
    assert is_degenerate(t) is None


def test_rectangular_additive_form_is_hom():
    P = Mat.from_rows(F4, [[1, 0], [0, 1], [1, 1]])
    t = canon.tabulate(canon.additive(P, EMB, Mat.identity(F4, 2)))
    assert t.dst_space.m == 3 and is_graph_hom(t)


def test_zero_L_preserves_rank():
    rng = random.Random(1)
    P, Q = rand_inv(F3, 3, rng), rand_inv(F3, 3, rng)
    form = canon.semrl(P, identity_hom(F3), Mat.zeros(F3, 2, 2), Q)
    for X in space(F3, 2, 2).mats:
        assert rank(canon.eval(form, X)) == rank(X)


def test_shifted_form_formula():
    rng = random.Random(2)
    P, Q = rand_inv(F3, 2, rng), rand_inv(F3, 2, rng)
    A0, off = Mat.identity(F3, 2), Mat.unit(F3, 2, 2, 1, 0)
    form = canon.shifted_semrl(P, identity_hom(F3), Mat.zeros(F3, 2, 2), Q, A0, off)
    assert canon.eval(form, A0) == off
    assert is_distance_preserving(canon.tabulate(form))


@pytest.mark.parametrize("q", [2, 3])
def test_colourings(q):
    F = gf(q)
    target = canon.colour_target(gf(q * q if q == 2 else q), 2, 2)
    t = canon.make_colouring(F, 2, 2, target)
    assert is_colouring(t) and is_graph_hom(t)
    assert is_degenerate(t) is not None
    dsp = t.dst_space
    img = sorted(set(t.codes))
    assert all(dsp.rank_of(dsp.diff_codes(a, b)) <= 1 for a, b in itertools.combinations(img, 2))


def test_colouring_errors():
    with pytest.raises(TargetTooSmall):
        canon.make_colouring(F3, 2, 2, canon.colour_target(F2, 2, 2))
    with pytest.raises(ImproperColouring):
        canon.make_colouring(F2, 2, 2, canon.colour_target(F2, 2, 2), weights=[(1, 0), (1, 0)])


def test_colouring_into_gf4_clique():
    target = MaximalSet.make(Kind.COL, (1, 0), Mat.zeros(F4, 2, 2))
    t = canon.make_colouring(F2, 2, 2, target)
    assert is_colouring(t) and len(set(t.codes)) == 4


@given(st.sampled_from([2, 3, 4]), st.booleans(), st.integers(0, 10**6))
def test_additive_forms_are_additive_homs(q, transpose, seed):
    F = gf(q)
    rng = random.Random(seed)
    tau = rng.choice(enumerate_field_homs(F, F))
    form = canon.additive(rand_inv(F, 2, rng), tau, rand_inv(F, 2, rng), transpose=transpose)
    t = canon.tabulate(form)
    sp = t.src_space
    assert t.codes[0] == 0 and is_graph_hom(t)
    for a, b in [(rng.randrange(sp.size), rng.randrange(sp.size)) for _ in range(20)]:
        s = int(sp.sum_codes(a, b))
        assert t.codes[s] == int(t.dst_space.sum_codes(t.codes[a], t.codes[b]))


@given(st.sampled_from(list(Variant)[2:]), st.integers(0, 10**6))
def test_fractional_forms_are_distance_preserving(variant, seed):
    rng = random.Random(seed)
    L = rng.choice(canon.valid_Ls(EMB, 2))
    P, Q = rand_inv(F4, 2, rng), rand_inv(F4, 2, rng)
    A0 = Mat(F2, 2, 2, tuple(rng.randrange(2) for _ in range(4)))
    off = Mat(F4, 2, 2, tuple(rng.randrange(4) for _ in range(4)))
    extra = (A0, off) if variant.shifted else (None, None)
    form = CanonicalForm(variant, P, Q, EMB, L, *extra).validate()
    t = canon.tabulate(form)
    assert is_distance_preserving(t)
    if not variant.shifted:
        assert t.codes[0] == 0
