import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexval import algebra
from lexval.dsl import parse_document
from lexval.engine import Atom, Conclusion, Fact, Mode, Rule, RuleBase, fire, infer, premise_pv
from lexval.errors import InferenceError, LexvalError, ScaleMismatchError
from lexval.scale import make_scale
from lexval.valuation import compare, get_max_length, set_max_length

UROLITHIASIS = Atom("HYPOTHESIS", "UROLITHIASIS")
TUMOR = Atom("HYPOTHESIS", "TUMOR-OF-KIDNEY")


def single_rule_base(s, premise_pvs, rule_pvs):
    premises = [Atom(f"P{i}", "Y") for i in range(len(premise_pvs))]
    concls = [Conclusion(Atom("H", f"H{j}"), pv) for j, pv in enumerate(rule_pvs)]
    facts = [Fact(a, pv) for a, pv in zip(premises, premise_pvs)]
    return RuleBase(s, [Rule("R", premises, concls)], facts)


def test_premise_pv_examples(s7, v7):
    rb = single_rule_base(s7, [v7(6), v7(5), v7(4)], [v7(4)])
    r = rb.rules[0]
    env = {f.atom: f.pv for f in rb.facts}
    assert premise_pv(rb, r, env) == v7(4, 5)
    del env[Atom("P1", "Y")]
    assert premise_pv(rb, r, env) == v7(0)

    rb1 = single_rule_base(s7, [v7(3)], [v7(4)])
    assert premise_pv(rb1, rb1.rules[0], {f.atom: f.pv for f in rb1.facts}) == v7(3)


def test_fire_examples(s7, v7):
    rb = single_rule_base(s7, [v7(6), v7(5), v7(4)], [v7(4), v7(5)])
    env = {f.atom: f.pv for f in rb.facts}
    r = rb.rules[0]
    h0, h1 = Atom("H", "H0"), Atom("H", "H1")
    assert fire(rb, r, env, Mode.MPGF_R) == [(h0, v7(4, 4, 5)), (h1, v7(4, 5, 5))]
    assert fire(rb, r, env, Mode.FLAT_MIN) == [(h0, v7(4)), (h1, v7(4))]
    assert fire(rb, r, env, Mode.MPGF_S) == [
        (h0, algebra.mpgf_s(v7(4, 5), v7(4))),
        (h1, algebra.mpgf_s(v7(4, 5), v7(5))),
    ]


def test_medical_golden(medical_text):
    rb = parse_document(medical_text)
    res = infer(rb, Mode.MPGF_R)
    assert [a for a, _ in res.ranking] == [TUMOR, UROLITHIASIS]
    assert res.pv(TUMOR).labels == ("LARGE", "VERY-LARGE", "VERY-LARGE")
    assert res.pv(UROLITHIASIS).labels == ("LARGE", "LARGE", "VERY-LARGE")
    assert res.ties() == []


def test_medical_flat_min_ties(medical_text):
    res = infer(parse_document(medical_text), Mode.FLAT_MIN)
    assert res.pv(TUMOR).labels == res.pv(UROLITHIASIS).labels == ("LARGE",)
    (group,) = res.ties()
    assert {a for a, _ in group} == {TUMOR, UROLITHIASIS}
    assert "1=" in res.render()


def test_no_facts_all_bottom(medical_text):
    rb = parse_document(medical_text).with_facts([])
    res = infer(rb)
    assert all(v.is_bottom() for _, v in res.ranking)
    assert res.above_bottom() == []
    assert res.trace == []


def test_two_rules_aggregate_by_max(s7, v7):
    h = Atom("H", "X")
    rb = RuleBase(
        s7,
        [Rule("R1", [Atom("A", "1")], [Conclusion(h, v7(3))]),
         Rule("R2", [Atom("A", "2")], [Conclusion(h, v7(4, 5))])],
        [Fact(Atom("A", "1"), v7(6)), Fact(Atom("A", "2"), v7(6))],
    )
    assert infer(rb).pv(h) == v7(4, 5)


def test_chaining_reaches_second_level(s7, v7):
    a, b, c = Atom("X", "a"), Atom("X", "b"), Atom("X", "c")
    rb = RuleBase(
        s7,
        [Rule("R2", [b], [Conclusion(c, v7(5))]), Rule("R1", [a], [Conclusion(b, v7(4))])],
        [Fact(a, v7(6))],
    )
    res = infer(rb)
    assert res.pv(b) == v7(4)
    assert res.pv(c) == v7(4, 5)


def test_cycle_terminates(s7, v7):
    a, b = Atom("X", "a"), Atom("X", "b")
    rb = RuleBase(
        s7,
        [Rule("R1", [a], [Conclusion(b, v7(5))]), Rule("R2", [b], [Conclusion(a, v7(5))])],
        [Fact(a, v7(4))],
    )
    res = infer(rb)
    assert res.pv(a) == v7(4)
    assert res.pv(b) == v7(4, 5)


def test_trace_replays(medical_text):
    rb = parse_document(medical_text)
    for mode in Mode:
        res = infer(rb, mode)
        assert res.trace
        for step in res.trace:
            assert step.replay(mode) == step.output
        data = res.to_json()
        assert data["mode"] == mode.value
        assert all(t["aggregation"] == "max" for t in data["trace"])


def random_rule_base(rng, s, n_rules=6, n_atoms=5):
    atoms = [Atom("X", f"a{i}") for i in range(n_atoms)]
    rules = []
    for i in range(n_rules):
        prem = rng.sample(atoms, rng.randint(1, 2))
        concl = rng.choice(atoms)
        grades = [rng.randint(1, s.size - 1) for _ in range(rng.randint(1, 2))]
        rules.append(Rule(f"R{i}", prem, [Conclusion(concl, _val(s, grades))]))
    facts = [Fact(a, _val(s, [rng.randint(0, s.size - 1)])) for a in rng.sample(atoms, 2)]
    return RuleBase(s, rules, facts)


def _val(s, ranks):
    from lexval.valuation import from_grades
    return from_grades(s, ranks)


@pytest.mark.parametrize("seed", range(20))
def test_rule_order_does_not_matter(s7, seed):
    rng = random.Random(seed)
    rb = random_rule_base(rng, s7)
    base = infer(rb)
    for _ in range(5):
        rules = list(rb.rules)
        rng.shuffle(rules)
        other = infer(RuleBase(s7, rules, rb.facts))
        assert other.ranking == base.ranking
        assert other.values == base.values


def test_rank_invariance_under_relabeling(medical_text):
    rb = parse_document(medical_text)
    renamed = make_scale("renamed", [f"g{k}" for k in range(7)])
    from lexval.valuation import Valuation

    def move(v):
        return Valuation(renamed, v.ranks)

    rb2 = RuleBase(
        renamed,
        [Rule(r.id, r.premises, [Conclusion(c.atom, move(c.pv)) for c in r.conclusions]) for r in rb.rules],
        [Fact(f.atom, move(f.pv)) for f in rb.facts],
    )
    a = [(atom, v.ranks) for atom, v in infer(rb).ranking]
    b = [(atom, v.ranks) for atom, v in infer(rb2).ranking]
    assert a == b


valuation_ranks = st.lists(st.integers(0, 6), min_size=1, max_size=3)
S7 = make_scale("L7", [str(k) for k in range(7)])


@settings(max_examples=300, deadline=None)
@given(valuation_ranks, valuation_ranks, st.lists(st.integers(1, 6), min_size=1, max_size=2))
def test_strict_monotonicity_of_conclusions(p1, p2, rule):
    f, g, r = _val(S7, p1), _val(S7, p2), _val(S7, rule)
    h1, h2 = Atom("H", "1"), Atom("H", "2")
    rb = RuleBase(
        S7,
        [Rule("R1", [Atom("A", "1")], [Conclusion(h1, r)]),
         Rule("R2", [Atom("A", "2")], [Conclusion(h2, r)])],
        [Fact(Atom("A", "1"), f), Fact(Atom("A", "2"), g)],
    )
    res = infer(rb)
    assert compare(res.pv(h1), res.pv(h2)) == compare(f, g)


def test_flat_min_violates_strict_monotonicity(s7, v7):
    # premises 6 > 5 with equal rule pv 4; min gives 4 both times
    h1, h2 = Atom("H", "1"), Atom("H", "2")
    rb = RuleBase(
        s7,
        [Rule("R1", [Atom("A", "1")], [Conclusion(h1, v7(4))]),
         Rule("R2", [Atom("A", "2")], [Conclusion(h2, v7(4))])],
        [Fact(Atom("A", "1"), v7(6)), Fact(Atom("A", "2"), v7(5))],
    )
    flat = infer(rb, Mode.FLAT_MIN)
    assert flat.pv(h1) == flat.pv(h2) == v7(4)
    lex = infer(rb, Mode.MPGF_R)
    assert lex.pv(h1) == v7(4) and lex.pv(h2) == v7(4, 5)
    assert lex.pv(h1) > lex.pv(h2)


def test_length_cap_reports_chain(s7, v7):
    a, b, c = Atom("X", "a"), Atom("X", "b"), Atom("X", "c")
    rb = RuleBase(
        s7,
        [Rule("R1", [a], [Conclusion(b, v7(4))]), Rule("R2", [b], [Conclusion(c, v7(3, 4))])],
        [Fact(a, v7(5))],
    )
    old = set_max_length(2)
    try:
        with pytest.raises(InferenceError) as info:
            infer(rb)
    finally:
        set_max_length(old)
    assert tuple(info.value.chain) == ("R2", "R1")
    assert "R1" in str(info.value)
    assert get_max_length() == old


def test_rule_base_validation(s7, v7):
    a = Atom("X", "a")
    with pytest.raises(LexvalError):
        Rule("R", [], [Conclusion(a, v7(3))])
    with pytest.raises(LexvalError):
        Rule("R", [a], [Conclusion(a, v7(0))])
    r = Rule("R", [a], [Conclusion(Atom("X", "b"), v7(3))])
    with pytest.raises(LexvalError, match="duplicate rule"):
        RuleBase(s7, [r, r])
    with pytest.raises(LexvalError, match="duplicate fact"):
        RuleBase(s7, [r], [Fact(a, v7(2)), Fact(a, v7(3))])
    other = make_scale("other", ["lo", "mid", "hi"])
    from lexval.valuation import top
    with pytest.raises(ScaleMismatchError):
        RuleBase(s7, [r], [Fact(a, top(other))])


def test_mode_parse():
    assert Mode.parse("MPGF_R") is Mode.MPGF_R
    assert Mode.parse("flat-min") is Mode.FLAT_MIN
    with pytest.raises(LexvalError):
        Mode.parse("max")


def test_render_table(medical_text):
    text = infer(parse_document(medical_text)).render(show_trace=True)
    lines = text.splitlines()
    assert lines[0].split() == ["rank", "attribute", "value", "pv"]
    assert "TUMOR-OF-KIDNEY" in lines[2] and lines[2].startswith("1")
    assert "trace:" in text
