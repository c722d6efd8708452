from pathlib import Path

from hypothesis import given
from hypothesis import strategies as st

from matgeom import harness
from matgeom.harness import WITNESS_LIMIT, Check, VerificationReport
from matgeom.parallel import pmap


@given(st.lists(st.booleans(), max_size=30))
def test_check_counts(outcomes):
    c = Check("x")
    for i, ok in enumerate(outcomes):
        c.record(ok, f"w{i}")
    assert c.checked == len(outcomes)
    assert c.violations == outcomes.count(False)
    assert len(c.witnesses) == min(c.violations, WITNESS_LIMIT)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=5))
def test_outcome_is_pass_iff_no_violations(pairs):
    rep = VerificationReport("claim", "r", "m", [Check(f"c{i}", a + b, b) for i, (a, b) in enumerate(pairs)])
    assert rep.passed == (rep.violations == 0)
    assert rep.checked == sum(a + b for a, b in pairs)


def test_render_format():
    c = Check("demo")
    c.record(True)
    c.record(False, "A=0")
    rep = VerificationReport("demo-claim", "q=2 2x2", "exhaustive", [c], ["a note"])
    assert rep.render() == (
        "demo-claim fail 2 1\n"
        "  regime q=2 2x2\n"
        "  mode exhaustive\n"
        "  check demo fail 2 1\n"
        "  witness demo A=0\n"
        "  note a note\n"
    )


def test_regression_mismatch_fails_with_witness():
    rep = harness.verify_additive_classification(expected={"homs": 1})
    assert not rep.passed
    bad = next(c for c in rep.checks if c.name == "regression-counts")
    assert bad.violations == 1 and "homs" in bad.witnesses[0]


def test_small_budget_is_reported():
    rep = harness.verify_colouring_bound(budget=5)
    assert any(c.name == "budget-honoured" for c in rep.checks)
    assert "nodes=5" in rep.render()


def test_field_homs_suite():
    rep = harness.verify_field_homs()
    assert rep.passed and rep.checked == 3


def test_range_checks_on_fixture():
    from matgeom.maptable import MapTable

    f = MapTable.loads((Path(__file__).parent / "fixtures" / "degenerate_noncolouring.mt").read_text())
    res = harness.range_checks(f)
    assert set(res) == set(harness.RANGE_CHECKS)
    assert all(v is None or v[0] for v in res.values())
    assert res["hom"][0] and res["degenerate-range"][0]


def test_size_window():
    assert harness._size_window(3, 4)
    assert not harness._size_window(2, 4)
    assert not harness._size_window(3, 3)


def test_save_figure(tmp_path):
    reports = [harness.verify_field_homs(), harness.verify_additive_classification(expected={"homs": 1})]
    path = tmp_path / "r.png"
    harness.save_figure(reports, path)
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    harness.save_figure(reports, tmp_path / "s.png")
    assert (tmp_path / "s.png").read_bytes() == data


def _square(x):
    return x * x


def test_pmap_preserves_order():
    items = list(range(40))
    assert pmap(_square, items, jobs=1) == pmap(_square, items, jobs=3) == [x * x for x in items]


def test_suites_listed():
    assert set(harness.SUITES) == {"metric", "minus-order", "additive", "semrl", "colouring-bound",
                                   "degenerate-range", "nondegenerate", "field-homs"}
