import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matgeom import canon
from matgeom.canon import CanonicalForm, Variant
from matgeom.classify import (
    check_order_monotonicity,
    classify,
    find_range_decomposition,
    hom_witness,
    is_additive,
    is_additive_exhaustive,
    is_colouring,
    is_degenerate,
    is_distance_preserving,
    is_graph_hom,
    range_contained,
    recover_additive,
    recover_semrl,
)
from matgeom.errors import PreconditionError
from matgeom.fields import enumerate_field_homs, gf, identity_hom
from matgeom.maptable import MapTable
from matgeom.matrices import Mat, encode, is_invertible
from matgeom.search import SearchProblem, enumerate_homs

FIXTURES = Path(__file__).parent / "fixtures"
F2, F3, F4 = gf(2), gf(3), gf(4)
EMB = enumerate_field_homs(F2, F4)[0]
OMEGA_E11 = Mat.unit(F4, 2, 2, 0, 0, 2)


def identity(F=F2):
    return MapTable.from_function(F, 2, 2, F, 2, 2, lambda X: X)


def rand_inv(F, n, rng):
    while True:
        A = Mat(F, n, n, tuple(rng.randrange(F.q) for _ in range(n * n)))
        if is_invertible(A):
            return A


@pytest.fixture(scope="module")
def homs_gf2():
    return list(enumerate_homs(SearchProblem(F2, 2, 2, F2, 2, 2, fix_zero_to_zero=True), 10**6))


def test_identity():
    f = identity()
    assert is_graph_hom(f) and is_additive(f) and is_distance_preserving(f)
    assert not is_colouring(f)
    assert is_degenerate(f) is None
    c = classify(f)
    assert c.verdict == "AdditiveStandard"
    assert canon.tabulate(c.form) == f
    form = recover_semrl(f)
    assert form is not None and form.L.is_zero() and canon.tabulate(form) == f


def test_constant_map_witness_is_lowest_edge():
    f = MapTable(F2, 2, 2, F2, 2, 2, (0,) * 16)
    A, B = hom_witness(f)
    assert (encode(A), encode(B)) == (0, 1)
    assert classify(f).verdict == "NotGraphHom"


def test_additivity_examples():
    I4 = Mat.identity(F4, 2)
    semrl = canon.tabulate(canon.semrl(I4, EMB, OMEGA_E11, I4))
    assert not is_additive(semrl) and not is_additive_exhaustive(semrl)
    shifted = identity().with_codes(tuple(c ^ 1 for c in range(16)))
    assert not is_additive(shifted)


def test_semrl_recovery_round_trip():
    I4 = Mat.identity(F4, 2)
    f = canon.tabulate(canon.semrl(I4, EMB, OMEGA_E11, I4))
    c = classify(f)
    assert c.verdict == "SemrlStandard"
    assert canon.tabulate(c.form) == f


def test_shifted_recovery_reproduces_the_table():
    rng = random.Random(3)
    P, Q = rand_inv(F4, 2, rng), rand_inv(F4, 2, rng)
    form = canon.shifted_semrl(P, EMB, OMEGA_E11, Q, Mat.identity(F2, 2), Mat.unit(F4, 2, 2, 1, 1, 3),
                               transpose=True)
    f = canon.tabulate(form)
    rec = recover_semrl(f)
    assert rec is not None and rec.variant.transpose and canon.tabulate(rec) == f
    assert classify(f).verdict == "SemrlTranspose"


def test_recover_additive_orientation():
    rng = random.Random(5)
    for transpose in (False, True):
        form = canon.additive(rand_inv(F3, 2, rng), identity_hom(F3), rand_inv(F3, 2, rng), transpose=transpose)
        f = canon.tabulate(form)
        rec = recover_additive(f)
        assert rec.variant.transpose == transpose and canon.tabulate(rec) == f
    P = Mat.from_rows(F3, [[1, 0], [0, 1], [1, 2]])
    f = canon.tabulate(canon.additive(P, identity_hom(F3), Mat.identity(F3, 3), transpose=True))
    assert recover_additive(f).variant is Variant.ADDITIVE_T
    with pytest.raises(PreconditionError):
        recover_additive(canon.tabulate(canon.semrl(Mat.identity(F4, 2), EMB, OMEGA_E11, Mat.identity(F4, 2))))


def test_colourings():
    t = canon.make_colouring(F2, 2, 2, canon.colour_target(F4, 2, 2))
    c = classify(t)
    assert c.verdict == "Colouring" and is_degenerate(t) is not None
    assert not is_distance_preserving(t)


def test_degenerate_non_colouring_fixture():
    f = MapTable.load(FIXTURES / "degenerate_noncolouring.mt")
    c = classify(f)
    assert c.verdict == "DegenerateNonColouring"
    assert range_contained(f, c.params["range_M"], c.params["range_N"], c.params["R"])
    dec = find_range_decomposition(f)
    assert dec is not None and range_contained(f, dec.M, dec.N, dec.R)


def test_every_gf2_hom_classifies_consistently(homs_gf2):
    for f in homs_gf2:
        c = classify(f)
        assert c.verdict in {"Colouring", "AdditiveStandard", "AdditiveTranspose"}
        if c.form is not None:
            assert canon.tabulate(c.form) == f
        assert check_order_monotonicity(f).ok


def test_contraction_holds_for_every_hom(homs_gf2):
    f = homs_gf2[17]
    dsp, sp = f.dst_space, f.src_space
    c = f.code_array
    image_dist = dsp.ranks(dsp.diff_codes(c[:, None], c[None, :]))
    assert (image_dist <= sp.dist).all()


def test_order_monotonicity_examples():
    assert check_order_monotonicity(identity(F3)).ok
    I4 = Mat.identity(F4, 2)
    rep = check_order_monotonicity(canon.tabulate(canon.semrl(I4, EMB, OMEGA_E11, I4)))
    assert rep.ok and rep.pairs_checked == 256 and rep.triples_checked == 16 * 256


def test_render_is_line_oriented():
    text = classify(identity()).render()
    assert text.splitlines()[0] == "verdict AdditiveStandard"
    assert all(ln.split()[0] in {"verdict", "param", "evidence"} for ln in text.splitlines())


@given(st.lists(st.integers(0, 15), min_size=16, max_size=16))
def test_random_tables(codes):
    f = MapTable(F2, 2, 2, F2, 2, 2, tuple(codes))
    c = classify(f)
    assert (c.verdict == "NotGraphHom") == (not is_graph_hom(f))
    if c.verdict == "NotGraphHom":
        A, B = c.params["witness"]
        assert (f(A) - f(B)).rank() != 1


@given(st.sampled_from([Variant.SEMRL, Variant.SEMRL_T]), st.integers(0, 10**6))
def test_fractional_round_trip_random(variant, seed):
    rng = random.Random(seed)
    L = rng.choice(canon.valid_Ls(EMB, 2))
    form = CanonicalForm(variant, rand_inv(F4, 2, rng), rand_inv(F4, 2, rng), EMB, L).validate()
    f = canon.tabulate(form)
    c = classify(f)
    if L.is_zero():
        # L = 0 forms are additive and stop earlier on the ladder
        assert c.verdict in {"AdditiveStandard", "AdditiveTranspose"}
    else:
        assert c.verdict == variant.value
    assert canon.tabulate(c.form) == f
    assert np.all(f.code_array >= 0)
