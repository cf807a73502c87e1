_RESULTS = []


def record_criterion(num, name, passed, detail=""):
    """Register one acceptance-criterion outcome for the terminal summary."""
    _RESULTS.append((num, name, bool(passed), detail))
    tag = "PASS" if passed else "FAIL"
    line = f"[{tag}] criterion {num}: {name}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, passed, detail in sorted(_RESULTS):
        tag = "PASS" if passed else "FAIL"
        line = f"[{tag}] criterion {num}: {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
