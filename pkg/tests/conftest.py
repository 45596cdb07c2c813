from pathlib import Path

import pytest

from lexval.scale import make_scale
from lexval.valuation import from_grades

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

VERBAL = ["MINIMAL", "VERY-SMALL", "SMALL", "AVERAGE", "LARGE", "VERY-LARGE", "MAXIMAL"]


@pytest.fixture
def s7():
    """The integer scale {0, ..., 6}."""
    return make_scale("L7", [str(k) for k in range(7)])


@pytest.fixture
def verbal():
    return make_scale("verbal", VERBAL)


@pytest.fixture
def v7(s7):
    """Build valuations on {0..6} from ranks: v7(4, 5) -> (4, 5)."""
    return lambda *ranks: from_grades(s7, list(ranks))


@pytest.fixture
def medical_text():
    return (SAMPLES / "medical.lex").read_text()


@pytest.fixture
def two_rules_text():
    return (SAMPLES / "two_rules.lex").read_text()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # lets fixtures see whether the test body passed
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
