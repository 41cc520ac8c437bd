def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA, RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        if number in RESULTS:
            terminalreporter.write_line(RESULTS[number])
