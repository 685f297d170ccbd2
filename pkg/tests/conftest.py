"""Shared pytest plumbing for the acceptance suite.

test_acceptance.py appends one line per criterion to ACCEPTANCE_LINES;
the hook below echoes them as a section of the terminal summary so the
twelve pass/fail verdicts are visible in one block at the end of a run.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
