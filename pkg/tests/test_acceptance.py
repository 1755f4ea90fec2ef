"""The twelve acceptance criteria, one test each.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible even when
output is captured) and fails with the recorded details if any sub-check
did not hold.
"""
import pytest

from graphlaws.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"criterion_{k:02d}" for k in sorted(CRITERIA)])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
        for d in result.details:
            if d.startswith("FAIL"):
                print("    " + d)
    assert result.passed, "\n".join(result.details)
