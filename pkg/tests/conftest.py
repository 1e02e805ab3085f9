import re

import pytest
from hypothesis import settings

settings.register_profile("qint", deadline=None, max_examples=200)
settings.load_profile("qint")

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if m:
        _acceptance.append((int(m.group(1)), m.group(2).replace("_", " "), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, outcome in sorted(_acceptance):
        terminalreporter.write_line(f"criterion {num} ({name}): {'PASS' if outcome == 'passed' else 'FAIL'}")


@pytest.fixture(scope="session")
def cfg():
    from qint import QuadratureConfig

    return QuadratureConfig()
