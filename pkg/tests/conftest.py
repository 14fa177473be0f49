from pathlib import Path

import pytest

from pschema.bench import encoding
from pschema.pipeline import make_pair

GOLDEN = Path(__file__).parent / "golden"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = rep.failed or (rep.when == "call" and not rep.passed)
    prev = _criteria.get(num, (title, True))
    _criteria[num] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}")


def pair_from(program: str, data: str = "", constants=None):
    return make_pair([("<data>", data)], [("<program>", program)], constants)


@pytest.fixture
def enc():
    return encoding
