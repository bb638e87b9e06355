"""Suite-wide pytest configuration.

Prints a one-line pass/fail verdict per acceptance criterion after the
run, so the gate is readable without scanning the full test listing.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                rows.append((report.nodeid.split("::")[-1], outcome == "passed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in sorted(rows):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}: {name}")
