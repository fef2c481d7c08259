from fractions import Fraction

import pytest

from rdc.core import HypothesisClass, Instance
from rdc.cost import CostModel
from rdc.objective import VersionSpaceReduction

# actions a=0, b=1; responses "1"=0, "2"=1
A, B = 0, 1
R1, R2 = 0, 1


@pytest.fixture
def three_h():
    """h1: a->1, b->1; h2: a->1, b->2; h3: a->2, b->1."""
    return HypothesisClass.from_vectors([(R1, R1), (R1, R2), (R2, R1)], 2)


@pytest.fixture
def three_h_instance(three_h):
    return Instance(
        three_h, CostModel.uniform(2, 2), VersionSpaceReduction(three_h),
        ("a", "b"), ("1", "2"),
    )


def F(x):
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        passed, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}")
