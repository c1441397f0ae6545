import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "golden recolouring vectors",
    2: "golden strong-normal-form vectors",
    3: "golden normal-form vectors",
    4: "normal-form equivalence against second-order brute force",
    5: "recolouring decides containment on random pairs",
    6: "monochromatic-triangle sentence on K5 and K6",
    7: "classification vectors with two-path agreement",
    8: "realizedness agrees with the product oracle",
    9: "realized binary tables are idempotent",
    10: "colours as intersections of colour sets",
    11: "chi structures define their colour",
    12: "cyclic and Siggers searches agree",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.skipped:
        return
    if rep.when == "call" or rep.failed:
        n = marker.args[0]
        _outcomes.setdefault(n, []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        if runs is None:
            tr.write_line(f"criterion {n:2d}: NOT RUN  {title}")
            continue
        status = "PASS" if all(ok for _, ok in runs) else "FAIL"
        failed = [name for name, ok in runs if not ok]
        extra = f"  (failed: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {n:2d}: {status}  {title}{extra}")
