import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from lcsurf.analysis import analyze_chart  # noqa: E402
from lcsurf.fixtures import CATALOG, build  # noqa: E402

WORKERS = min(4, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def catalog_runs():
    """Every catalog chart analyzed once per session: key -> (chart, expectation, analysis)."""
    out = {}
    for key in CATALOG:
        chart, exp = build(key)
        out[key] = (chart, exp, analyze_chart(chart, workers=WORKERS))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
