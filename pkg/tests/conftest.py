import re


def pytest_terminal_summary(terminalreporter):
    results = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(\[|$)", nodeid)
            if not match or getattr(report, "when", "call") not in ("call", "setup"):
                continue
            key = (int(match.group(1)), match.group(2))
            ok = status == "passed"
            results[key] = results.get(key, True) and ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), ok in sorted(results.items()):
        label = name.replace("_", " ")
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {label}")
