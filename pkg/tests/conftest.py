from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("quick", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, ok, detail)``; a summary line per criterion prints at the end."""

    def record(criterion: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        results = _ACCEPTANCE[criterion]
        ok = all(r[0] for r in results)
        details = "; ".join(d for good, d in results if not good) if not ok else results[-1][1]
        if len(results) > 1:
            details = f"{sum(r[0] for r in results)}/{len(results)} checks pass. {details}"
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({details})")
