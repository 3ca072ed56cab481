ACCEPTANCE_LINES: dict[int, list[str]] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            for line in ACCEPTANCE_LINES[n]:
                terminalreporter.write_line(line)
