import pytest

ACCEPTANCE = []


def brute_reception(n, c_l, w, s, horizon=None):
    """Naive slot scan: first slot >= n, congruent to n mod C_L, where the gateway is awake."""
    horizon = horizon or n + (w + s) * c_l
    awake = [False] + [((t - 1) % (w + s)) < w for t in range(1, horizon + 1)]
    for t in range(n, horizon + 1, c_l):
        if awake[t]:
            return t
    return None


@pytest.fixture
def brute():
    return brute_reception


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
