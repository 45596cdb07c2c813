import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lexval import algebra
from lexval.algebra import conj, conj_all, disj, mpgf_r, mpgf_s, neg, r_implication, s_implication
from lexval.errors import ScaleMismatchError
from lexval.oracle import EnumerationBudget, brute_inf, brute_sup, enumerate_valuations
from lexval.scale import install_negation, make_scale
from lexval.valuation import Valuation, bottom, from_grades, top


def test_conj_examples(v7):
    assert conj(v7(4, 5), v7(4)) == v7(4, 4, 5)
    assert conj(v7(4, 5), v7(5)) == v7(4, 5, 5)
    assert conj(v7(3, 5), v7(6)) == v7(3, 5)
    assert conj(v7(3, 5), v7(0)) == v7(0)


def test_conj_verbal(verbal):
    f = from_grades(verbal, ["LARGE", "VERY-LARGE"])
    assert conj(f, from_grades(verbal, ["LARGE"])).labels == ("LARGE", "LARGE", "VERY-LARGE")


def test_disj_examples(v7):
    assert disj(v7(4, 4, 5), v7(4, 5, 5)) == v7(4, 5, 5)
    assert disj(v7(2), v7(0)) == v7(2)
    assert disj(v7(3), v7(3, 5)) == v7(3)


def test_neg_examples(v7):
    assert neg(v7(0)) == v7(6) and neg(v7(6)) == v7(0)
    assert neg(v7(2, 5)) == v7(4)
    assert neg(v7(4, 4, 5)) == v7(2)


def test_s_implication_examples(v7):
    for g in [v7(0), v7(3, 4), v7(6)]:
        assert s_implication(v7(0), g) == v7(6)
    assert s_implication(v7(2), v7(3)) == v7(4)
    assert s_implication(v7(5), v7(3)) == v7(3)


def test_mpgf_s_examples(v7):
    assert mpgf_s(v7(2), v7(3)) == v7(0)
    assert mpgf_s(v7(5), v7(3)) == v7(3)
    assert mpgf_s(v7(0), v7(5)) == v7(0)


def test_mpgf_s_examples_against_oracle(s7, v7):
    budget = EnumerationBudget(s7, 3)
    for f, g in [(v7(2), v7(3)), (v7(5), v7(3))]:
        ref = brute_inf(budget, lambda h: s_implication(f, h) >= g)
        assert mpgf_s(f, g) == ref


def test_r_implication_examples(v7):
    assert r_implication(v7(3), v7(5)) == v7(6)
    assert r_implication(v7(3), v7(3, 5)) == v7(5)
    assert r_implication(v7(3, 5), v7(3, 4, 4)) == v7(4, 4)


@pytest.mark.parametrize(
    "f, g, max_len",
    [((3,), (3, 5), 4), ((3, 5), (3, 4, 4), 5)],
)
def test_r_implication_examples_against_oracle(s7, f, g, max_len):
    f, g = Valuation(s7, f), Valuation(s7, g)
    ref = brute_sup(EnumerationBudget(s7, max_len), lambda h: conj(f, h) <= g)
    assert r_implication(f, g) == ref


def test_r_implication_sup_is_attained_and_residuates(v7):
    f, g = v7(3, 5), v7(3, 4, 4)
    r = r_implication(f, g)
    assert conj(f, r) <= g
    # h = (4) is just above and fails
    assert conj(f, v7(4)) > g


def test_mpgf_r_examples(v7):
    assert mpgf_r(v7(4, 5), v7(4)) == v7(4, 4, 5)
    assert mpgf_r(v7(6), v7(6)) == v7(6)
    assert mpgf_r(v7(0), v7(3, 4)) == v7(0)
    m = mpgf_r(v7(3), v7(3))
    assert m == v7(3, 3)
    assert m < algebra.meet(v7(3), v7(3))


def test_mixed_scales_rejected(v7, verbal):
    other = from_grades(verbal, ["LARGE"])
    for op in (conj, disj, s_implication, mpgf_s, r_implication, mpgf_r):
        with pytest.raises(ScaleMismatchError):
            op(v7(3), other)


def test_nary_conj_is_order_independent(s7):
    rng = random.Random(5)
    budget = EnumerationBudget(s7, 2)
    vals = list(enumerate_valuations(budget))
    for _ in range(200):
        items = [rng.choice(vals) for _ in range(rng.randint(1, 5))]
        ref = conj_all(items)
        for perm in itertools.islice(itertools.permutations(items), 6):
            assert conj_all(perm) == ref


def test_custom_negation_is_used():
    s = make_scale("s4", ["0", "1", "2", "3"])
    w = install_negation(s, {"0": "3", "1": "2", "2": "2", "3": "0"})
    v = Valuation(w, (1, 2))
    assert neg(v).ranks == (2,)
    assert neg(neg(v)).ranks == (2,)
    assert neg(neg(v)) >= v  # weak negation


# Random checks on the 7-grade scale against the enumeration oracle at a
# larger budget than the production search uses.

interior = st.lists(st.integers(1, 5), min_size=1, max_size=4).map(sorted).map(tuple)
val7 = st.one_of(st.just((0,)), st.just((6,)), interior)


@settings(max_examples=60, deadline=None)
@given(val7, val7)
def test_r_implication_matches_oracle_on_seven_grades(a, b):
    s = make_scale("L7", [str(k) for k in range(7)])
    f, g = Valuation(s, a), Valuation(s, b)
    r = r_implication(f, g)
    budget = EnumerationBudget(s, len(a) + len(b) + 3)
    assert brute_sup(budget, lambda h: conj(f, h) <= g) == r


@settings(max_examples=100, deadline=None)
@given(val7, val7, val7)
def test_residuation_on_seven_grades(a, b, c):
    s = make_scale("L7", [str(k) for k in range(7)])
    f, g, h = (Valuation(s, x) for x in (a, b, c))
    assert (conj(f, h) <= g) == (h <= r_implication(f, g))


@settings(max_examples=100, deadline=None)
@given(val7, val7, val7)
def test_tnorm_laws_on_seven_grades(a, b, c):
    s = make_scale("L7", [str(k) for k in range(7)])
    f, g, h = (Valuation(s, x) for x in (a, b, c))
    assert conj(f, g) == conj(g, f)
    assert conj(conj(f, g), h) == conj(f, conj(g, h))
    assert conj(f, top(s)) == f and conj(f, bottom(s)) == bottom(s)
    if f < g and h > bottom(s):
        assert conj(f, h) < conj(g, h)
    assert neg(conj(f, g)) == disj(neg(f), neg(g))
    assert neg(disj(f, g)) >= conj(neg(f), neg(g))
