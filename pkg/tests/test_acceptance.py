"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into the terminal summary (see conftest.py).
"""

import pytest

from ofq import acceptance

RUNTIME_LIMITS = {1: 10.0, 3: 30.0, 7: 120.0}
LINES = []


@pytest.mark.parametrize("number,name", [(n, name) for n, name, _ in acceptance.CRITERIA])
def test_criterion(number, name):
    res = acceptance.run(number)
    line = res.line()
    limit = RUNTIME_LIMITS.get(number)
    if limit is not None and res.seconds > limit:
        line = f"FAIL [{number:2d}] {name}: runtime {res.seconds:.1f}s exceeds {limit:.0f}s"
        res.passed = False
    LINES.append(line)
    print(line)
    assert res.passed, line
