"""The thirteen acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the "acceptance criteria"
section of the pytest summary.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from zetamoments.verify import CHECKS

SLOW = {2, 4, 7}


@pytest.mark.parametrize(
    "criterion",
    [pytest.param(n, marks=pytest.mark.slow) if n in SLOW else n for n in CHECKS],
    ids=lambda n: f"criterion_{n:02d}",
)
def test_criterion(criterion):
    result = CHECKS[criterion](seed=0, profile="desk")
    ACCEPTANCE_LINES.append((criterion, result.line()))
    print("\n" + result.line())
    assert result.passed, result.detail
