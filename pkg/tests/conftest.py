import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

_RESULTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        slot = _RESULTS.setdefault(int(m.group(1)), [])
        slot.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        parts = _RESULTS[n]
        ok = all(o == "passed" for _, o, _ in parts)
        secs = sum(d for _, _, d in parts)
        bad = [name for name, o, _ in parts if o != "passed"]
        extra = f"  failing: {', '.join(bad)}" if bad else ""
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  ({len(parts)} checks, {secs:.1f} s){extra}")
