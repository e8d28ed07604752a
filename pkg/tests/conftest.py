import pytest

from pentagon_periods.orbit import orbit_enumerate

# criterion number -> list of (sub-check name, ok, detail); filled by test_acceptance
ACCEPTANCE = {}


def record(criterion, name, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((name, bool(ok), detail))


@pytest.fixture(scope="session")
def census_2000():
    return orbit_enumerate(2000)


@pytest.fixture(scope="session")
def census_30():
    return orbit_enumerate(30)


@pytest.fixture(scope="session")
def segment_table():
    from pentagon_periods.surface import calibrate_segments

    return calibrate_segments(orbit_enumerate(12))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        subs = ACCEPTANCE.get(n)
        if not subs:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN  {CRITERIA[n]}")
            continue
        ok = all(s[1] for s in subs)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}")
        for name, sub_ok, detail in subs:
            if not sub_ok:
                terminalreporter.write_line(f"    failed: {name} {detail}")
