import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

CRITERIA: dict = {}
MEASURES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    num, text = mark.args
    before = CRITERIA.get(num, ("PASS", text))[0]
    CRITERIA[num] = ("PASS" if rep.passed and before == "PASS" else "FAIL", text)


@pytest.fixture
def measure(request):
    """Attach a short measurement to the criterion line of the calling test."""
    num = request.node.get_closest_marker("criterion").args[0]

    def record(text):
        MEASURES.setdefault(num, []).append(text)
        print(f"criterion {num}: {text}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        status, text = CRITERIA[num]
        extra = "; ".join(MEASURES.get(num, []))
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {text}" + (f"  [{extra}]" if extra else ""))
