import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def square():
    return np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=np.uint8)


_criteria: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def report():
    """Record one acceptance criterion result; all of them are listed in the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        _criteria[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        passed, detail = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
