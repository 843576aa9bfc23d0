"""Shared pytest wiring: verdict lines for the release-gate suite."""

VERDICTS = []


def record_verdict(line):
    VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("release gate")
    for line in VERDICTS:
        terminalreporter.write_line(line)
