import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """criterion(k, ok, detail) records one acceptance line."""

    def record(k, ok, detail=""):
        ACCEPTANCE.setdefault(k, []).append((bool(ok), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts if d)
        tr.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
