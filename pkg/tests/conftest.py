import numpy as np
import pytest

from critlab.circle_measure import CircleMeasure


@pytest.fixture
def two_point():
    return CircleMeasure.atomic([0.0, 0.5], [0.5, 0.5])


def roots_of_unity(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


FAMILIES = {
    "uniform": CircleMeasure.uniform(),
    "two_point": CircleMeasure.atomic([0.0, 0.5], [0.5, 0.5]),
    "three_point": CircleMeasure.atomic([0.0, 0.3, 0.65], [0.5, 0.3, 0.2]),
    "arc": CircleMeasure.arc(0.0, 0.5),
    "arc_inner": CircleMeasure.arc(0.2, 0.7),
    "mixture": CircleMeasure.mixture([CircleMeasure.uniform(), CircleMeasure.atomic([0.25])], [0.5, 0.5]),
}


#: one summary line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
