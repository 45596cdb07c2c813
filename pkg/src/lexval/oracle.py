"""Brute-force reference machinery.

Everything here works by enumerating every canonical valuation up to a
length bound and testing predicates one by one.  It deliberately avoids the
production shortcuts in :mod:`lexval.algebra` (the ascending order comes from
a sort key, not from :func:`~lexval.valuation.compare`), so it can referee
them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Iterator, Optional

from .errors import BudgetError
from .scale import Scale
from .valuation import Valuation

__all__ = [
    "EnumerationBudget",
    "enumerate_valuations",
    "count_valuations",
    "brute_sup",
    "brute_inf",
    "LawResult",
    "LawReport",
    "check_laws",
    "DEFAULT_COST_CEILING",
]

DEFAULT_COST_CEILING = 10**7
_U64 = 2**63 - 1


@dataclass(frozen=True)
class EnumerationBudget:
    scale: Scale
    max_len: int

    def __post_init__(self):
        if self.max_len < 1:
            raise BudgetError(f"max_len must be >= 1, got {self.max_len}")
        if count_valuations(self.scale.size, self.max_len) > _U64:
            raise BudgetError(
                f"enumerating length <= {self.max_len} on a scale of size {self.scale.size} "
                "overflows a 64-bit counter"
            )

    @property
    def count(self) -> int:
        return count_valuations(self.scale.size, self.max_len)


def count_valuations(size: int, max_len: int) -> int:
    """Closed-form number of canonical valuations of length <= ``max_len``.

    Bottom and top singletons, plus every nondecreasing string over the
    ``size - 2`` interior grades.
    """
    interior = size - 2
    if interior == 0:
        return 2
    return 2 + sum(comb(interior + n - 1, n) for n in range(1, max_len + 1))


def _sort_key(ranks: tuple[int, ...], top_rank: int) -> tuple[int, ...]:
    # a missing position behaves like a top grade
    return ranks + (top_rank,)


@lru_cache(maxsize=64)
def _enumerated(scale: Scale, max_len: int) -> tuple[Valuation, ...]:
    top_rank = scale.top_rank
    found = [(0,), (top_rank,)]
    interior = range(1, top_rank)
    for n in range(1, max_len + 1):
        found.extend(itertools.combinations_with_replacement(interior, n))
    found.sort(key=lambda r: _sort_key(r, top_rank))
    return tuple(Valuation(scale, r) for r in found)


def enumerate_valuations(b: EnumerationBudget) -> Iterator[Valuation]:
    """Every canonical valuation of length <= ``b.max_len``, ascending, once each."""
    return iter(_enumerated(b.scale, b.max_len))


def brute_sup(b: EnumerationBudget, pred: Callable[[Valuation], bool]) -> Optional[Valuation]:
    """Largest enumerated valuation satisfying ``pred``, or ``None``."""
    for v in reversed(_enumerated(b.scale, b.max_len)):
        if pred(v):
            return v
    return None


def brute_inf(b: EnumerationBudget, pred: Callable[[Valuation], bool]) -> Optional[Valuation]:
    """Smallest enumerated valuation satisfying ``pred``, or ``None``."""
    for v in _enumerated(b.scale, b.max_len):
        if pred(v):
            return v
    return None


# -- law checking -----------------------------------------------------------


@dataclass
class LawResult:
    law: str
    scope: str
    passed: bool
    counterexample: Optional[dict] = None
    witness: Optional[dict] = None
    description: str = ""
    evaluated: int = 0

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "scope": self.scope,
            "pass": self.passed,
            "counterexample": self.counterexample,
            "witness": self.witness,
        }


@dataclass
class LawReport:
    scale: Scale
    max_len: int
    results: list[LawResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, law: str) -> LawResult:
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.results]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def render(self) -> str:
        width = max((len(r.law) for r in self.results), default=4)
        lines = [
            f"scale {self.scale.name} ({self.scale.size} grades), valuations of length <= {self.max_len}",
            "",
        ]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status}  {r.law:<{width}}  {r.scope}"
            lines.append(line)
            if r.counterexample:
                cex = ", ".join(f"{k}={v}" for k, v in r.counterexample.items())
                lines.append(f"      counterexample: {cex}")
            if r.witness:
                wit = ", ".join(f"{k}={v}" for k, v in r.witness.items())
                lines.append(f"      witness: {wit}")
        n_fail = len(self.failures)
        lines.append("")
        lines.append(f"{len(self.results) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines)


def _oracle_budgets(scale: Scale, f: Valuation, g: Valuation) -> tuple[EnumerationBudget, EnumerationBudget]:
    n = len(f) + len(g) + 1
    return EnumerationBudget(scale, n), EnumerationBudget(scale, 2 * n + 1)


def check_laws(
    scale: Scale,
    max_len: int,
    *,
    cost_ceiling: int = DEFAULT_COST_CEILING,
    ops=None,
    laws=None,
) -> LawReport:
    """Evaluate every algebraic law over all valuations of length <= ``max_len``.

    ``ops`` substitutes the operations under test (see :class:`lexval.laws.Ops`);
    the checker's own self-tests use it to inject faulty connectives.  Raises
    :class:`BudgetError` before doing any work if the estimated number of
    predicate evaluations exceeds ``cost_ceiling``.
    """
    from . import laws as _laws

    ops = ops or _laws.Ops()
    selected = _laws.LAWS if laws is None else [_laws.get_law(n) for n in laws]
    domain = _enumerated(scale, max_len)
    n = len(domain)

    cost = 0
    for law in selected:
        if law.oracle:
            big = EnumerationBudget(scale, 2 * (2 * max_len + 1) + 1).count
            cost += n**law.arity * 2 * big
        else:
            cost += n**law.arity
    if cost > cost_ceiling:
        raise BudgetError(
            f"law check on {scale.size} grades with length <= {max_len} needs about {cost:,} "
            f"predicate evaluations (ceiling {cost_ceiling:,}); use a smaller scale or length"
        )

    ctx = _laws.Context(scale=scale, ops=ops, domain=domain, budgets=_oracle_budgets)
    report = LawReport(scale, max_len)
    for law in sorted(selected, key=lambda l: l.name):
        if not law.applies(scale):
            continue
        report.results.append(law.run(ctx, max_len))
    return report
