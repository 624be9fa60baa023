from hypothesis import HealthCheck, settings

settings.register_profile("repo", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, title, detail = CRITERIA[n]
        line = "criterion %2d  %-4s  %s" % (n, "PASS" if ok else "FAIL", title)
        terminalreporter.write_line(line + ("  [%s]" % detail if detail else ""))
