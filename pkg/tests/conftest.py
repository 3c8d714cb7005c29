import pytest

# filled by test_acceptance.py: criterion number -> (title, passed, detail, seconds, budget)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail, secs, budget = ACCEPTANCE[k]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {title}: {detail} "
                      f"({secs:.2f}s / budget {budget:g}s)")
