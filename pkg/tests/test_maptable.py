import pytest
from hypothesis import given
from hypothesis import strategies as st

from matgeom.errors import MalformedTable
from matgeom.fields import gf
from matgeom.maptable import MapTable
from matgeom.matrices import Mat, encode


def identity(q=2):
    F = gf(q)
    return MapTable.from_function(F, 2, 2, F, 2, 2, lambda X: X)


def test_identity_table():
    f = identity()
    assert f.codes == tuple(range(16))
    X = Mat.from_rows(gf(2), [[1, 0], [1, 1]])
    assert f(X) == X
    assert len(f.image_set()) == 16


def test_round_trip_text(tmp_path):
    f = identity(3)
    text = f.dumps()
    assert text.startswith("maptable v1\nsrc field p=3 k=1 poly=0,1\nsrc shape 2 2\n")
    assert MapTable.loads(text) == f
    path = tmp_path / "t.mt"
    f.save(path)
    assert MapTable.load(path) == f
    commented = "# a comment\n\n" + text
    assert MapTable.loads(commented) == f


@pytest.mark.parametrize("mutate", [
    lambda lines: lines[:-1],                                   # not total
    lambda lines: lines + [lines[-1]],                          # duplicate source
    lambda lines: ["maptable v2"] + lines[1:],                  # bad header
    lambda lines: lines[:6] + ["0,0,0 => 0,0,0,0"] + lines[7:],  # wrong arity
    lambda lines: lines[:6] + ["0,0,0,0 => 0,0,0,7"] + lines[7:],  # entry out of range
])
def test_malformed_tables(mutate):
    lines = identity().dumps().splitlines()
    with pytest.raises(MalformedTable):
        MapTable.loads("\n".join(mutate(lines)) + "\n")


def test_wrong_length_rejected():
    F = gf(2)
    with pytest.raises(MalformedTable):
        MapTable(F, 2, 2, F, 2, 2, (0,) * 15)


@given(st.lists(st.integers(0, 15), min_size=16, max_size=16))
def test_arbitrary_tables_round_trip(codes):
    F = gf(2)
    f = MapTable(F, 2, 2, F, 2, 2, tuple(codes))
    g = MapTable.loads(f.dumps())
    assert g == f
    assert [encode(Y) for Y in g.images] == codes
