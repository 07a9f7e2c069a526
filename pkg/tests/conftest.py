from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(criterion, claims, note=""):
        failed = [c for c in claims if not c.ok]
        verdict = "PASS" if claims and not failed else "FAIL"
        detail = f"{len(claims) - len(failed)}/{len(claims)} claims hold"
        if failed:
            first = failed[0]
            detail += f"; first failure: {first.name} on {first.instance} (got {first.got})"
        if note:
            detail += f"; {note}"
        ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2}: {verdict}  {detail}"
        return not failed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
