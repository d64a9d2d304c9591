import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quatlat.identities import GenusCache  # noqa: E402

_acceptance_results = []


@pytest.fixture(scope="session")
def cache():
    return GenusCache()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        label = marker.args[0] if marker.args else item.name
        _acceptance_results.append((label, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _acceptance_results:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}")
