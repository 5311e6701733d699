from collections import defaultdict

import pytest

_CRITERIA: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)


@pytest.fixture
def criterion():
    """``criterion(number, label, ok, detail)`` records one acceptance check."""

    def record(number: int, label: str, ok: bool, detail: str = ""):
        _CRITERIA[number].append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label}: {'ok' if good else 'FAIL'} ({info})" for label, good, info in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}")
