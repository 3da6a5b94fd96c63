"""Shared fixtures plus the acceptance-criteria summary hook.

Acceptance tests report through the `criterion` fixture; the terminal
summary then prints exactly one PASS/FAIL line per numbered criterion,
aggregated over its subchecks.
"""
from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import settings

import hrx

settings.register_profile("suite", max_examples=60, deadline=None,
                          derandomize=True)
settings.load_profile("suite")

_RESULTS: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)


def _record(number: int, label: str, passed: bool, detail: str) -> None:
    _RESULTS[number].append((label, bool(passed), detail))


@pytest.fixture
def criterion():
    """Checker that registers a subcheck for the summary, then asserts."""

    def check(number: int, label: str, passed: bool, detail: str = "") -> None:
        _record(number, label, passed, detail)
        assert passed, f"criterion {number} [{label}] {detail}"

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        cases = _RESULTS[number]
        failing = [(label, detail) for label, ok, detail in cases if not ok]
        if failing:
            labels = "; ".join(label for label, _ in failing)
            terminalreporter.write_line(
                f"criterion {number:2d}: FAIL "
                f"({len(cases) - len(failing)}/{len(cases)} subchecks passed; "
                f"failing: {labels})",
                red=True,
            )
        else:
            terminalreporter.write_line(
                f"criterion {number:2d}: PASS ({len(cases)} subchecks)",
                green=True,
            )


# One third-order array study shared by the rate-fit criteria: lambda=1,
# alpha=2, beta=5, five decades of n, the diagonal grid, all three orders.
STUDY_LAM = 1.0
STUDY_ALPHA = 2.0
STUDY_BETA = 5.0
STUDY_N = (10**3, 10**4, 10**5, 10**6, 10**7)
STUDY_GRID = ((-1.0, -1.0), (0.0, 0.0), (1.0, 1.0), (2.0, 2.0))


@pytest.fixture(scope="session")
def third_order_study():
    config = hrx.StudyConfig(
        spec=hrx.ThirdOrderHR(STUDY_LAM, STUDY_ALPHA, STUDY_BETA),
        params=hrx.HRParams.finite(STUDY_LAM, STUDY_ALPHA, STUDY_BETA),
        n_values=STUDY_N,
        grid=STUDY_GRID,
        orders=frozenset(hrx.ApproxOrder),
        output_path=None,
    )
    return hrx.run_study(config)
