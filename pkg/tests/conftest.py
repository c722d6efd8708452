import json
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (description, passed); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture(scope="session")
def regression():
    return json.loads((FIXTURES / "regression.json").read_text())


# suite name -> seed used for the shared runs
SEEDS = {"degenerate-range": 42}


def run_timed(name, jobs=1):
    from matgeom import harness

    t = time.perf_counter()
    reports = harness.run_suite(name, seed=SEEDS.get(name, 0), jobs=jobs)
    return reports, time.perf_counter() - t


@pytest.fixture(scope="session")
def suite_runs():
    """Every verification suite run once, with wall-clock time."""
    from matgeom import harness

    return {name: run_timed(name) for name in harness.SUITES}


@pytest.fixture(autouse=True)
def _fresh_config():
    from matgeom import config
    from matgeom.fields import override_fields

    saved = config.get()
    yield
    config.set_config(saved)
    override_fields({})


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {desc}")
