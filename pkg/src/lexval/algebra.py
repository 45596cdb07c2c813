"""Connectives on valuations: conjunction, disjunction, negation, implications
and the two modus ponens generating functions.

Conjunction merges the operands' grade multisets and reduces the result;
disjunction is the order maximum.  Nothing here looks at grade magnitudes,
only at ranks, so every result is invariant under relabelling the scale.
"""

from __future__ import annotations

from functools import reduce as _fold
from typing import Iterable

from .errors import LengthCapError, ScaleMismatchError, SearchBoundError
from .valuation import (
    Ordering,
    Valuation,
    _reduce_ranks,
    bottom,
    compare,
    get_max_length,
    top,
)

__all__ = [
    "conj",
    "conj_all",
    "disj",
    "disj_all",
    "neg",
    "s_implication",
    "mpgf_s",
    "r_implication",
    "mpgf_r",
    "meet",
]


def _same(f: Valuation, g: Valuation) -> None:
    if f.scale.key != g.scale.key:
        raise ScaleMismatchError(
            f"operands are on different scales ({f.scale.name!r} vs {g.scale.name!r})"
        )


def conj(f: Valuation, g: Valuation) -> Valuation:
    """Lexicographic conjunction (the T-norm)."""
    _same(f, g)
    top_rank = f.scale.top_rank
    # both operands are sorted; merging is enough
    merged = sorted(f.ranks + g.ranks)
    ranks = _reduce_ranks(merged, top_rank)
    if len(ranks) > get_max_length():
        raise LengthCapError(
            f"conjunction of lengths {len(f)} and {len(g)} exceeds the cap of {get_max_length()}"
        )
    return Valuation._trusted(f.scale, ranks)


def conj_all(values: Iterable[Valuation]) -> Valuation:
    values = list(values)
    if not values:
        raise ValueError("conj_all needs at least one operand")
    return _fold(conj, values)


def disj(f: Valuation, g: Valuation) -> Valuation:
    """Lexicographic disjunction: the larger of the two valuations."""
    return g if compare(f, g) is Ordering.LESS else f


def disj_all(values: Iterable[Valuation]) -> Valuation:
    values = list(values)
    if not values:
        raise ValueError("disj_all needs at least one operand")
    return _fold(disj, values)


def meet(f: Valuation, g: Valuation) -> Valuation:
    """Order minimum (not a connective of the algebra; used by some laws)."""
    return f if compare(f, g) is not Ordering.GREATER else g


def neg(f: Valuation) -> Valuation:
    """Singleton of the scale negation of the first grade."""
    return Valuation._trusted(f.scale, (f.scale.negation[f.ranks[0]],))


def s_implication(f: Valuation, g: Valuation) -> Valuation:
    _same(f, g)
    return disj(neg(f), g)


def mpgf_s(f: Valuation, g: Valuation) -> Valuation:
    """Least ``h`` with ``s_implication(f, h) >= g``.

    Since disjunction is a maximum, either ``neg(f)`` already reaches ``g``
    (then bottom suffices) or ``h`` itself must reach ``g``.
    """
    _same(f, g)
    if compare(neg(f), g) is not Ordering.LESS:
        return bottom(f.scale)
    return g


def mpgf_r(f: Valuation, g: Valuation) -> Valuation:
    return conj(f, g)


def r_implication(f: Valuation, g: Valuation, bound: int | None = None) -> Valuation:
    """Greatest ``h`` with ``conj(f, h) <= g`` (residuum of the conjunction).

    If ``f <= g`` the answer is top.  Otherwise the supremum is built one
    grade at a time: the satisfying set is downward closed, so a prefix can
    be extended by grade ``x`` exactly when the smallest admissible string
    with that prefix, ``prefix + x * (remaining length)``, still satisfies.

    Candidates are limited to length ``bound`` (default
    ``len(f) + len(g) + 1``).  The search is repeated at twice the bound and
    :class:`SearchBoundError` is raised if the two answers differ, i.e. if
    longer strings could still improve on the bounded supremum.
    """
    _same(f, g)
    if compare(f, g) is not Ordering.GREATER:
        return top(f.scale)
    if bound is None:
        bound = len(f) + len(g) + 1
    if bound < 1:
        raise ValueError("search bound must be >= 1")
    first = _greedy_sup(f, g, bound)
    second = _greedy_sup(f, g, 2 * bound)
    if first != second:
        raise SearchBoundError(
            f"supremum of conj({f}, h) <= {g} not attained within length {bound}: "
            f"{first} at length {bound}, {second} at length {2 * bound}"
        )
    return first


def _greedy_sup(f: Valuation, g: Valuation, bound: int) -> Valuation:
    scale = f.scale
    top_rank = scale.top_rank

    def ok(ranks):
        return compare(conj(f, Valuation._trusted(scale, tuple(ranks))), g) is not Ordering.GREATER

    prefix: list[int] = []
    while True:
        if prefix and ok(prefix):
            return Valuation._trusted(scale, tuple(prefix))
        if len(prefix) == bound:
            # unreachable: the last extension was validated at full length
            raise SearchBoundError(f"search for r_implication({f}, {g}) ran past its bound")
        lo = prefix[-1] if prefix else 1
        rest = bound - len(prefix)
        for x in range(top_rank - 1, lo - 1, -1):
            if ok(prefix + [x] * rest):
                prefix.append(x)
                break
        else:
            if prefix:
                raise SearchBoundError(f"search for r_implication({f}, {g}) found no extension")
            return bottom(scale)
