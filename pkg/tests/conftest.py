import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_VERDICTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def verdict(request):
    """Record one acceptance line per criterion; the test's pass/fail decides the mark."""
    name = request.node.get_closest_marker("criterion").args[0] if request.node.get_closest_marker("criterion") else request.node.name
    details = []
    yield details
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    _VERDICTS[name] = (ok, "; ".join(details))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in _VERDICTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
