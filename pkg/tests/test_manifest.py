"""Every claim in the manifest is backed by checks that actually ran."""

import pytest

from matgeom import harness


@pytest.mark.parametrize("claim", sorted(harness.CLAIMS))
def test_claim_has_evidence(claim, suite_runs):
    suite, prefix = harness.CLAIMS[claim]
    assert suite in harness.SUITES
    reports, _ = suite_runs[suite]
    checks = [c for r in reports for c in r.checks if c.name.startswith(prefix)]
    assert checks, f"{claim}: no check named {prefix}* in suite {suite}"
    assert sum(c.checked for c in checks) > 0
    assert all(c.violations == 0 for c in checks)


def test_every_suite_is_claimed():
    assert {s for s, _ in harness.CLAIMS.values()} == set(harness.SUITES)
