"""Runs every acceptance criterion and prints one PASS/FAIL line for each.

The lines are also repeated in the terminal summary (see conftest.py).
"""

import pytest

from schurcone.suite import CRITERIA, run_criterion

RESULT_LINES: list[str] = []


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number)
    line = res.line()
    RESULT_LINES.append(line)
    print(line)
    failed = [item for item in res.items if not item["passed"]]
    assert res.passed, failed
