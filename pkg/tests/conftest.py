import os

import pytest
from hypothesis import HealthCheck, settings

from stsurf import census

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CENSUS_RANGE = range(3, 11)


@pytest.fixture(scope="session")
def census_records():
    """Every genus-2 surface with 3..10 squares, classified and grouped into SL2(Z) orbits."""
    return {(s, n): census.enumerate(n, s) for s in census.STRATA for n in CENSUS_RANGE}


@pytest.fixture(scope="session")
def census_table(census_records):
    return census.count(r for recs in census_records.values() for r in recs)


@pytest.fixture(scope="session")
def genus2_origamis(census_records):
    return [r.origami for (s, n), recs in census_records.items() if n <= 7 for r in recs]


# one summary line per acceptance criterion

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    for w in getattr(item, "_criterion_warnings", []):
        outcome = "WARN"
        title = f"{title} ({w})"
    prev = _criteria.get(number)
    if prev is None or prev[0] == "PASS":
        _criteria[number] = (outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        outcome, title = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {outcome}  {title}")
