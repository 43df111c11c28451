import pytest

from fracsampling import GaussianPairModel, SamplingBudget, decomposition_builder

BUDGET = SamplingBudget(0.5, 0.75)


@pytest.fixture
def budget():
    return BUDGET


@pytest.fixture
def sum_builder():
    def make(rho, budget=BUDGET):
        return decomposition_builder(budget, GaussianPairModel(rho), "gaussian-sum")

    return make


# Acceptance verdicts, filled by test_acceptance.py: criterion -> (ok, detail).
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
