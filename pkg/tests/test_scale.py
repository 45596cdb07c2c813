import itertools
import json

import pytest

from lexval.errors import ScaleError, ScaleMismatchError
from lexval.scale import Scale, install_negation, make_scale, negate_grade

from conftest import VERBAL


def test_seven_grade_verbal_scale():
    labels = ["impossible", "almost impossible", "slightly possible", "average possibility",
              "very possible", "almost sure", "sure"]
    s = make_scale("possibility", labels)
    assert s.size == 7
    assert s.bottom.label == "impossible"
    assert s.top.label == "sure"


def test_two_grade_scale():
    s = make_scale("bool", ["0", "1"])
    assert negate_grade(s, "0").label == "1"
    assert negate_grade(s, "1").label == "0"
    assert s.involutive and s.weak


@pytest.mark.parametrize("labels", [["A", "A"], ["A"], []])
def test_invalid_labels(labels):
    with pytest.raises(ScaleError):
        make_scale("bad", labels)


@pytest.mark.parametrize("g, expected", [(0, 6), (2, 4), (3, 3), (6, 0)])
def test_default_negation(s7, g, expected):
    assert negate_grade(s7, g).rank == expected


@pytest.mark.parametrize("m", range(2, 10))
def test_default_negation_is_involution(m):
    s = make_scale("s", [f"g{k}" for k in range(m)])
    for g in s:
        assert s.negate(s.negate(g)) == g
    assert s.negate(s.bottom) == s.top and s.negate(s.top) == s.bottom


def test_total_order(s7):
    for f, g in itertools.product(s7, repeat=2):
        assert (f <= g) != (g < f)


def test_grades_of_different_scales_do_not_compare(s7, verbal):
    with pytest.raises(ScaleMismatchError):
        s7.grade(1) < verbal.grade(1)
    assert s7.grade(1) != verbal.grade(1)


def test_install_reflection_is_involutive(s7):
    s = install_negation(s7, {k: 6 - k for k in range(7)})
    assert s.involutive and s.weak
    assert s == s7


def test_install_non_weak_negation():
    s = make_scale("s3", ["0", "1", "2"])
    n = install_negation(s, {"0": "2", "1": "2", "2": "0"})
    # 1'' = 2' = 0 < 1
    assert not n.weak
    assert not n.involutive
    assert n.negate("1").label == "2"


def test_install_weak_but_not_involutive():
    s = make_scale("s4", ["0", "1", "2", "3"])
    n = install_negation(s, {"0": "3", "1": "3", "2": "0", "3": "0"})
    # 1'' = 3' = 0 < 1 -> not weak; try a weak one instead
    assert not n.weak
    w = install_negation(s, {"0": "3", "1": "2", "2": "2", "3": "0"})
    # f'' for 0,1,2,3 = 0,2,2,3: weak, not involutive
    assert w.weak and not w.involutive


@pytest.mark.parametrize(
    "table",
    [
        {"0": "1", "1": "1", "2": "0"},  # bottom not sent to top
        {"0": "2", "1": "1", "2": "1"},  # top not sent to bottom
        {"0": "2", "1": "0"},  # not total
    ],
)
def test_install_rejects_bad_tables(table):
    s = make_scale("s3", ["0", "1", "2"])
    with pytest.raises(ScaleError):
        install_negation(s, table)


def test_install_rejects_non_antitone():
    s = make_scale("s4", ["0", "1", "2", "3"])
    with pytest.raises(ScaleError, match="antitone"):
        install_negation(s, {"0": "3", "1": "1", "2": "2", "3": "0"})


def test_json_round_trip():
    s = make_scale("s4", ["0", "1", "2", "3"])
    n = install_negation(s, {"0": "3", "1": "2", "2": "2", "3": "0"})
    data = json.loads(json.dumps(n.to_dict()))
    assert data == {"name": "s4", "grades": ["0", "1", "2", "3"], "negation": ["3", "2", "2", "0"]}
    assert Scale.from_dict(data) == n


def test_unknown_grade(verbal):
    with pytest.raises(ScaleError):
        verbal.grade("HUGE")
    assert verbal.rank("LARGE") == 4
    assert VERBAL[verbal.rank("VERY-LARGE")] == "VERY-LARGE"
