import _util


def pytest_terminal_summary(terminalreporter):
    if _util.CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _util.CRITERIA:
            terminalreporter.write_line(line)
