"""Shared test plumbing: acceptance pass/fail reporting.

Acceptance tests register one line per criterion; the hook below prints
them in the terminal summary so the report is visible regardless of
pytest's output capturing.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
