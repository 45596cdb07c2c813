"""Algebraic laws of the valuation algebra as callable predicates.

Each :class:`Law` is a quantified predicate over canonical valuations.  The
checker in :func:`lexval.oracle.check_laws` runs them exhaustively; the CLI
``check`` command exposes the same table for user-supplied scales.

A predicate returns ``True`` when the instance satisfies the law.  Any other
return value marks a violation; a ``dict`` return is attached to the
counterexample as extra detail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import algebra
from .oracle import LawResult, brute_inf, brute_sup
from .scale import Scale
from .valuation import Ordering, Valuation, bottom, compare, from_grades, top

__all__ = ["Ops", "Context", "Law", "LAWS", "get_law", "law_names"]


@dataclass(frozen=True)
class Ops:
    """The operations under test.  Replace a field to inject a fault."""

    conj: Callable = algebra.conj
    disj: Callable = algebra.disj
    neg: Callable = algebra.neg
    s_implication: Callable = algebra.s_implication
    mpgf_s: Callable = algebra.mpgf_s
    r_implication: Callable = algebra.r_implication
    mpgf_r: Callable = algebra.mpgf_r
    compare: Callable = compare


@dataclass
class Context:
    scale: Scale
    ops: Ops
    domain: tuple
    budgets: Callable

    @property
    def bot(self) -> Valuation:
        return bottom(self.scale)

    @property
    def top(self) -> Valuation:
        return top(self.scale)

    def le(self, a, b) -> bool:
        return self.ops.compare(a, b) is not Ordering.GREATER

    def lt(self, a, b) -> bool:
        return self.ops.compare(a, b) is Ordering.LESS


@dataclass(frozen=True)
class Law:
    name: str
    variables: tuple[str, ...]
    predicate: Callable
    description: str
    existential: bool = False
    oracle: bool = False
    requires: Callable[[Scale], bool] = field(default=lambda s: True)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def applies(self, scale: Scale) -> bool:
        return self.requires(scale)

    def scope(self, scale: Scale, max_len: int) -> str:
        q = "exists" if self.existential else "forall"
        names = ",".join(self.variables) or "-"
        return f"{q} {names}: len<={max_len}, |L|={scale.size}"

    def run(self, ctx: Context, max_len: int) -> LawResult:
        result = LawResult(
            law=self.name,
            scope=self.scope(ctx.scale, max_len),
            passed=not self.existential,
            description=self.description,
        )
        for values in itertools.product(ctx.domain, repeat=self.arity):
            result.evaluated += 1
            outcome = self.predicate(ctx, *values)
            holds = outcome is True
            if self.existential and holds:
                result.passed = True
                result.witness = self._instance(values)
                break
            if not self.existential and not holds:
                result.passed = False
                result.counterexample = self._instance(values)
                if isinstance(outcome, dict):
                    result.counterexample.update(outcome)
                break
        return result

    def _instance(self, values) -> dict:
        return {k: str(v) for k, v in zip(self.variables, values)}


LAWS: list[Law] = []


def law(name, variables, description, **kw):
    def deco(fn):
        LAWS.append(Law(name, tuple(variables.split()) if variables else (), fn, description, **kw))
        return fn

    return deco


def get_law(name: str) -> Law:
    for l in LAWS:
        if l.name == name:
            return l
    raise KeyError(f"unknown law {name!r}")


def law_names() -> list[str]:
    return sorted(l.name for l in LAWS)


def _implies(a: bool, b: bool) -> bool:
    return (not a) or b


# -- order ------------------------------------------------------------------


@law("order_total", "f g", "exactly one of f<g, f=g, f>g, and compare is antisymmetric")
def _order_total(c, f, g):
    a, b = c.ops.compare(f, g), c.ops.compare(g, f)
    return a in (Ordering.LESS, Ordering.EQUAL, Ordering.GREATER) and a == -b


@law("order_equal_iff_identical", "f g", "compare(f, g) is EQUAL iff f and g are the same string")
def _order_eq(c, f, g):
    return (c.ops.compare(f, g) is Ordering.EQUAL) == (f.ranks == g.ranks)


@law("order_transitive", "f g h", "f <= g and g <= h imply f <= h")
def _order_trans(c, f, g, h):
    return _implies(c.le(f, g) and c.le(g, h), c.le(f, h))


@law("order_bounds", "f", "bottom <= f <= top")
def _order_bounds(c, f):
    return c.le(c.bot, f) and c.le(f, c.top)


@law("extension_shrinks", "f", "appending any grade x > bottom to f never increases it")
def _extension(c, f):
    for x in range(1, c.scale.size):
        longer = from_grades(c.scale, f.ranks + (x,))
        if not c.le(longer, f):
            return {"x": c.scale.labels[x]}
    return True


# -- conjunction -------------------------------------------------------------


@law("conj_commutative", "f g", "f AND g = g AND f")
def _conj_comm(c, f, g):
    return c.ops.conj(f, g) == c.ops.conj(g, f)


@law("conj_associative", "f g h", "(f AND g) AND h = f AND (g AND h)")
def _conj_assoc(c, f, g, h):
    return c.ops.conj(c.ops.conj(f, g), h) == c.ops.conj(f, c.ops.conj(g, h))


@law("conj_identity", "f", "f AND top = f")
def _conj_id(c, f):
    return c.ops.conj(f, c.top) == f


@law("conj_annihilator", "f", "f AND bottom = bottom")
def _conj_ann(c, f):
    return c.ops.conj(f, c.bot) == c.bot


@law("conj_monotone", "f g h", "f <= g implies f AND h <= g AND h")
def _conj_mono(c, f, g, h):
    return _implies(c.le(f, g), c.le(c.ops.conj(f, h), c.ops.conj(g, h)))


@law("conj_shrinking", "f g", "f > bottom and g < top imply f AND g < f")
def _conj_shrink(c, f, g):
    return _implies(c.lt(c.bot, f) and c.lt(g, c.top), c.lt(c.ops.conj(f, g), f))


@law("conj_strictly_monotone", "f g h", "f < g and h > bottom imply f AND h < g AND h")
def _conj_strict(c, f, g, h):
    return _implies(c.lt(f, g) and c.lt(c.bot, h), c.lt(c.ops.conj(f, h), c.ops.conj(g, h)))


# -- disjunction -------------------------------------------------------------


@law("disj_commutative", "f g", "f OR g = g OR f")
def _disj_comm(c, f, g):
    return c.ops.disj(f, g) == c.ops.disj(g, f)


@law("disj_associative", "f g h", "(f OR g) OR h = f OR (g OR h)")
def _disj_assoc(c, f, g, h):
    return c.ops.disj(c.ops.disj(f, g), h) == c.ops.disj(f, c.ops.disj(g, h))


@law("disj_identity", "f", "f OR bottom = f")
def _disj_id(c, f):
    return c.ops.disj(f, c.bot) == f


@law("disj_annihilator", "f", "f OR top = top")
def _disj_ann(c, f):
    return c.ops.disj(f, c.top) == c.top


@law("disj_monotone", "f g h", "f <= g implies f OR h <= g OR h")
def _disj_mono(c, f, g, h):
    return _implies(c.le(f, g), c.le(c.ops.disj(f, h), c.ops.disj(g, h)))


# -- negation ----------------------------------------------------------------


@law("neg_boundary", "", "NOT bottom = top and NOT top = bottom")
def _neg_boundary(c):
    return c.ops.neg(c.bot) == c.top and c.ops.neg(c.top) == c.bot


@law("neg_antitone", "f g", "g <= f implies NOT f <= NOT g")
def _neg_antitone(c, f, g):
    return _implies(c.le(g, f), c.le(c.ops.neg(f), c.ops.neg(g)))


@law("neg_singleton", "f", "NOT (x) is the singleton of the scale negation of x")
def _neg_singleton(c, f):
    if len(f) != 1:
        return True
    return c.ops.neg(f) == Valuation(c.scale, (c.scale.negation[f.ranks[0]],))


@law("de_morgan_conj", "f g", "NOT (f AND g) = NOT f OR NOT g")
def _dm_conj(c, f, g):
    o = c.ops
    return o.neg(o.conj(f, g)) == o.disj(o.neg(f), o.neg(g))


@law("de_morgan_disj", "f g", "NOT (f OR g) >= NOT f AND NOT g")
def _dm_disj(c, f, g):
    o = c.ops
    return c.le(o.conj(o.neg(f), o.neg(g)), o.neg(o.disj(f, g)))


@law("neg_weak", "f", "NOT NOT f >= f (scale negation is weak)", requires=lambda s: s.weak)
def _neg_weak(c, f):
    return c.le(f, c.ops.neg(c.ops.neg(f)))


@law(
    "neg_triple",
    "f",
    "NOT NOT NOT f = NOT f (scale negation is an involution)",
    requires=lambda s: s.involutive,
)
def _neg_triple(c, f):
    n = c.ops.neg
    return n(n(n(f))) == n(f)


# -- R modus ponens ------------------------------------------------------------


@law("mpgf_r_boundary", "g", "MPR(top, top) = top and MPR(bottom, g) = bottom")
def _mpr_11(c, g):
    m = c.ops.mpgf_r
    return m(c.top, c.top) == c.top and m(c.bot, g) == c.bot


@law("mpgf_r_strict_first", "f h g", "f < h and g > bottom imply MPR(f, g) < MPR(h, g)")
def _mpr_12(c, f, h, g):
    m = c.ops.mpgf_r
    return _implies(c.lt(f, h) and c.lt(c.bot, g), c.lt(m(f, g), m(h, g)))


@law("mpgf_r_strict_second", "f g h", "g < h and f > bottom imply MPR(f, g) < MPR(f, h)")
def _mpr_13(c, f, g, h):
    m = c.ops.mpgf_r
    return _implies(c.lt(g, h) and c.lt(c.bot, f), c.lt(m(f, g), m(f, h)))


@law("mpgf_r_below_top", "f", "f < top implies MPR(f, top) < top")
def _mpr_14(c, f):
    return _implies(c.lt(f, c.top), c.lt(c.ops.mpgf_r(f, c.top), c.top))


@law("mpgf_r_below_min", "f g", "bottom < f, g < top imply MPR(f, g) < min(f, g)")
def _mpr_15(c, f, g):
    interior = c.lt(c.bot, f) and c.lt(c.bot, g) and c.lt(f, c.top) and c.lt(g, c.top)
    return _implies(interior, c.lt(c.ops.mpgf_r(f, g), algebra.meet(f, g)))


@law("mpgf_r_no_drowning", "f g", "f, g > bottom imply MPR(f, g) > bottom")
def _mpr_16(c, f, g):
    return _implies(c.lt(c.bot, f) and c.lt(c.bot, g), c.lt(c.bot, c.ops.mpgf_r(f, g)))


# -- S modus ponens ------------------------------------------------------------


@law("mpgf_s_boundary", "g", "MPS(top, top) = top and MPS(bottom, g) = bottom")
def _mps_11(c, g):
    m = c.ops.mpgf_s
    return m(c.top, c.top) == c.top and m(c.bot, g) == c.bot


@law("mpgf_s_monotone_first", "f h g", "f < h and g > bottom imply MPS(f, g) <= MPS(h, g)")
def _mps_12(c, f, h, g):
    m = c.ops.mpgf_s
    return _implies(c.lt(f, h) and c.lt(c.bot, g), c.le(m(f, g), m(h, g)))


@law("mpgf_s_monotone_second", "f g h", "g < h and f > bottom imply MPS(f, g) <= MPS(f, h)")
def _mps_13(c, f, g, h):
    m = c.ops.mpgf_s
    return _implies(c.lt(g, h) and c.lt(c.bot, f), c.le(m(f, g), m(f, h)))


@law(
    "mpgf_s_not_strict_first",
    "f h g",
    "some f < h with g > bottom has MPS(f, g) >= MPS(h, g), so MPS is not strictly monotone",
    existential=True,
)
def _mps_not_strict(c, f, h, g):
    m = c.ops.mpgf_s
    return c.lt(f, h) and c.lt(c.bot, g) and not c.lt(m(f, g), m(h, g))


# -- oracle referee ------------------------------------------------------------


def _oracle(c, f, g, search, pred):
    small, large = c.budgets(c.scale, f, g)
    a = search(small, pred)
    b = search(large, pred)
    if a != b:
        return None, {"unattained": f"{a} at length {small.max_len}, {b} at length {large.max_len}"}
    return a, None


@law("mpgf_s_is_oracle_inf", "f g", "MPS(f, g) = inf{h : SIMP(f, h) >= g} by enumeration", oracle=True)
def _mps_oracle(c, f, g):
    o = c.ops
    ref, note = _oracle(c, f, g, brute_inf, lambda h: c.le(g, o.s_implication(f, h)))
    if note:
        return note
    got = o.mpgf_s(f, g)
    return True if got == ref else {"expected": str(ref), "got": str(got)}


@law("r_implication_is_oracle_sup", "f g", "RIMP(f, g) = sup{h : f AND h <= g} by enumeration", oracle=True)
def _rimp_oracle(c, f, g):
    o = c.ops
    ref, note = _oracle(c, f, g, brute_sup, lambda h: c.le(o.conj(f, h), g))
    if note:
        return note
    got = o.r_implication(f, g)
    return True if got == ref else {"expected": str(ref), "got": str(got)}


@law("residuation", "f g h", "f AND h <= g iff h <= RIMP(f, g)")
def _residuation(c, f, g, h):
    o = c.ops
    return c.le(o.conj(f, h), g) == c.le(h, o.r_implication(f, g))
