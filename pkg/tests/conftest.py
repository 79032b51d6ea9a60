import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "embedding exactness",
    2: "soundness of the translation",
    3: "back translation is a right inverse",
    4: "step simulation",
    5: "product conversion",
    6: "confluence apparatus",
    7: "conservativity",
    8: "weak eta-long machinery",
    9: "negative controls",
}


def _criterion(report):
    return dict(report.user_properties).get("criterion")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran.

    A criterion passes only if every test tagged with it passed; an
    expected failure counts as a failure of the criterion.
    """
    outcome = {}
    for key in ("passed", "failed", "xfailed", "xpassed", "error"):
        for report in terminalreporter.stats.get(key, []):
            n = _criterion(report) if hasattr(report, "user_properties") else None
            if n is None:
                continue
            ok = key == "passed"
            outcome.setdefault(n, []).append((ok, report.nodeid.split("::")[-1]))
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcome):
        failed = [name for ok, name in outcome[n] if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {n}: {status}  {CRITERIA.get(n, '')}"
        if failed:
            line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)
