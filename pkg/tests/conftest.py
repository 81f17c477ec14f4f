"""Acceptance report: one pass/fail line per criterion after the test summary."""

_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    label = props.get("criterion")
    if label is None:
        return
    _RESULTS[label] = (report.outcome, props.get("failed_checks", ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda s: int(s.split()[0])):
        outcome, failed = _RESULTS[label]
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}"
        tr.write_line(line)
        if failed:
            tr.write_line(f"      failing checks: {failed}")
