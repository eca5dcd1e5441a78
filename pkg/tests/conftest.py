import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS = []


def record_criterion(num: int, description: str, passed: bool, detail: str = ""):
    """Log one acceptance-criterion outcome and assert it."""
    ACCEPTANCE_RESULTS.append((num, description, passed, detail))
    assert passed, f"criterion {num} ({description}): {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"[{status}] criterion {num:2d}: {desc}{suffix}")
