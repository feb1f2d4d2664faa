import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the verdict follows the checks passed to it."""

    def record(number: int, checks: dict[str, bool], detail: str = "") -> None:
        ok = all(checks.values())
        failed = [k for k, v in checks.items() if not v]
        msg = detail + (f" failed: {', '.join(failed)}" if failed else "")
        _RESULTS[number] = (ok, msg)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {msg}")
        assert ok, msg

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, msg = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {msg}")
