"""Forward-chaining rule engine over valuations.

A rule's premise plausibility is the conjunction of its premises' current
values; each conclusion then gets ``mpgf(premise, rule pv)``.  Several rules
concluding the same atom are combined by disjunction (order maximum), and
rules are re-fired until no atom's value increases.
"""

from __future__ import annotations

import enum
import functools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import algebra
from .errors import InferenceError, LengthCapError, LexvalError, ScaleMismatchError
from .scale import Scale
from .valuation import Ordering, Valuation, bottom, compare

__all__ = [
    "Atom",
    "Fact",
    "Conclusion",
    "Rule",
    "RuleBase",
    "Mode",
    "TraceStep",
    "InferenceResult",
    "premise_pv",
    "fire",
    "infer",
]


@dataclass(frozen=True, order=True)
class Atom:
    attribute: str
    value: str

    def __post_init__(self):
        if not self.attribute or not self.value:
            raise ValueError("atom attribute and value must be nonempty")

    def __str__(self):
        return f"{self.attribute}={self.value}"


@dataclass(frozen=True)
class Fact:
    atom: Atom
    pv: Valuation


@dataclass(frozen=True)
class Conclusion:
    atom: Atom
    pv: Valuation


@dataclass(frozen=True)
class Rule:
    id: str
    premises: tuple[Atom, ...]
    conclusions: tuple[Conclusion, ...]

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "conclusions", tuple(self.conclusions))
        if not self.premises:
            raise LexvalError(f"rule {self.id!r} has no premises")
        if not self.conclusions:
            raise LexvalError(f"rule {self.id!r} has no conclusions")
        for c in self.conclusions:
            if c.pv.is_bottom():
                raise LexvalError(f"rule {self.id!r}: conclusion {c.atom} has plausibility bottom")


@dataclass(frozen=True)
class RuleBase:
    scale: Scale
    rules: tuple[Rule, ...] = ()
    facts: tuple[Fact, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "facts", tuple(self.facts))
        ids = set()
        for r in self.rules:
            if r.id in ids:
                raise LexvalError(f"duplicate rule id {r.id!r}")
            ids.add(r.id)
            for c in r.conclusions:
                self._check_pv(c.pv, f"rule {r.id!r}")
        atoms = set()
        for f in self.facts:
            if f.atom in atoms:
                raise LexvalError(f"duplicate fact for {f.atom}")
            atoms.add(f.atom)
            self._check_pv(f.pv, f"fact {f.atom}")

    def _check_pv(self, pv: Valuation, where: str) -> None:
        if pv.scale.key != self.scale.key:
            raise ScaleMismatchError(f"{where}: plausibility is on scale {pv.scale.name!r}, "
                                     f"rule base uses {self.scale.name!r}")

    def rule(self, rule_id: str) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def conclusion_atoms(self) -> list[Atom]:
        """Concluded atoms in order of first appearance."""
        seen: dict[Atom, None] = {}
        for r in self.rules:
            for c in r.conclusions:
                seen.setdefault(c.atom)
        return list(seen)

    def input_atoms(self) -> list[Atom]:
        """Premise atoms no rule concludes, in order of first appearance."""
        derived = set(self.conclusion_atoms())
        seen: dict[Atom, None] = {}
        for r in self.rules:
            for a in r.premises:
                if a not in derived:
                    seen.setdefault(a)
        return list(seen)

    def with_facts(self, facts: Sequence[Fact]) -> "RuleBase":
        return RuleBase(self.scale, self.rules, tuple(facts))


class Mode(enum.Enum):
    MPGF_R = "mpgf-r"
    MPGF_S = "mpgf-s"
    FLAT_MIN = "flat-min"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls(text.lower().replace("_", "-"))
        except ValueError:
            raise LexvalError(f"unknown mode {text!r}; expected one of "
                              + ", ".join(m.value for m in cls)) from None


def premise_pv(rb: RuleBase, r: Rule, env: Mapping[Atom, Valuation]) -> Valuation:
    """Conjunction of the premises' values; an unknown premise counts as bottom."""
    bot = bottom(rb.scale)
    values = [env.get(a, bot) for a in r.premises]
    for v in values:
        if v.scale.key != rb.scale.key:
            raise ScaleMismatchError(f"rule {r.id!r}: premise value on scale {v.scale.name!r}")
    return algebra.conj_all(values)


def _flat_min(scale: Scale, firsts: Sequence[int]) -> Valuation:
    return Valuation._trusted(scale, (min(firsts),))


def fire(rb: RuleBase, r: Rule, env: Mapping[Atom, Valuation], mode: Mode = Mode.MPGF_R):
    """Conclusions of ``r`` under ``env`` as a list of ``(atom, pv)`` pairs."""
    return [(atom, pv) for atom, pv, _ in _fire(rb, r, env, mode)]


def _fire(rb, r, env, mode):
    bot = bottom(rb.scale)
    premises = [env.get(a, bot) for a in r.premises]
    body = premise_pv(rb, r, env)
    out = []
    for c in r.conclusions:
        if mode is Mode.MPGF_R:
            pv = algebra.mpgf_r(body, c.pv)
        elif mode is Mode.MPGF_S:
            pv = algebra.mpgf_s(body, c.pv)
        else:
            pv = _flat_min(rb.scale, [p.ranks[0] for p in premises] + [c.pv.ranks[0]])
        out.append((c.atom, pv, (premises, body)))
    return out


@dataclass(frozen=True)
class TraceStep:
    """One accepted derivation: the atom's value rose to ``output``."""

    rule: str
    atom: Atom
    premises: tuple[tuple[Atom, Valuation], ...]
    conjunction: Valuation
    rule_pv: Valuation
    output: Valuation
    previous: Valuation

    def replay(self, mode: Mode) -> Valuation:
        values = [pv for _, pv in self.premises]
        body = algebra.conj_all(values)
        if body != self.conjunction:
            raise InferenceError(f"trace step for {self.atom} does not replay its conjunction")
        if mode is Mode.MPGF_R:
            return algebra.mpgf_r(body, self.rule_pv)
        if mode is Mode.MPGF_S:
            return algebra.mpgf_s(body, self.rule_pv)
        return _flat_min(body.scale, [v.ranks[0] for v in values] + [self.rule_pv.ranks[0]])

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "attribute": self.atom.attribute,
            "value": self.atom.value,
            "premises": [
                {"attribute": a.attribute, "value": a.value, "pv": pv.to_json()}
                for a, pv in self.premises
            ],
            "conjunction": self.conjunction.to_json(),
            "rule_pv": self.rule_pv.to_json(),
            "output": self.output.to_json(),
            "previous": self.previous.to_json(),
            # disjunctive aggregation across rules is an engine extension
            "aggregation": "max",
        }


@dataclass
class InferenceResult:
    scale: Scale
    mode: Mode
    values: dict[Atom, Valuation]
    ranking: list[tuple[Atom, Valuation]]
    trace: list[TraceStep] = field(default_factory=list)
    iterations: int = 0

    def pv(self, atom: Atom) -> Valuation:
        return self.values.get(atom, bottom(self.scale))

    def tie_groups(self) -> list[list[tuple[Atom, Valuation]]]:
        """Runs of equally plausible hypotheses in the ranking."""
        groups: list[list[tuple[Atom, Valuation]]] = []
        for item in self.ranking:
            if groups and groups[-1][0][1] == item[1]:
                groups[-1].append(item)
            else:
                groups.append([item])
        return groups

    def ties(self) -> list[list[tuple[Atom, Valuation]]]:
        return [g for g in self.tie_groups() if len(g) > 1]

    def above_bottom(self) -> list[tuple[Atom, Valuation]]:
        return [(a, v) for a, v in self.ranking if not v.is_bottom()]

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "ranking": [
                {"attribute": a.attribute, "value": a.value, "pv": v.to_json()} for a, v in self.ranking
            ],
            "trace": [s.to_json() for s in self.trace],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def render(self, show_trace: bool = False) -> str:
        rows = []
        for pos, group in enumerate(self.tie_groups(), start=1):
            mark = f"{pos}=" if len(group) > 1 else f"{pos}"
            for a, v in group:
                rows.append((mark, a.attribute, a.value, str(v)))
        header = ("rank", "attribute", "value", "pv")
        widths = [max(len(r[i]) for r in rows + [header]) for i in range(4)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*header).rstrip(), fmt.format(*("-" * w for w in widths))]
        lines += [fmt.format(*r).rstrip() for r in rows]
        for group in self.ties():
            names = ", ".join(str(a) for a, _ in group)
            lines.append(f"tie: {names} at {group[0][1]}")
        if show_trace and self.trace:
            lines.append("")
            lines.append("trace:")
            for i, s in enumerate(self.trace, start=1):
                prem = " AND ".join(str(pv) for _, pv in s.premises)
                lines.append(f"  {i}. {s.rule}: {prem} = {s.conjunction}; "
                             f"with {s.rule_pv} -> {s.atom} = {s.output}")
        return "\n".join(lines)


_MAX_ROUNDS = 100_000


def infer(rb: RuleBase, mode: Mode = Mode.MPGF_R) -> InferenceResult:
    """Forward-chain to a fixpoint and rank the concluded atoms.

    Values only ever increase, and each rule is a monotone function of the
    environment, so the fixpoint does not depend on rule order.
    """
    env: dict[Atom, Valuation] = {f.atom: f.pv for f in rb.facts}
    origin: dict[Atom, TraceStep] = {}
    trace: list[TraceStep] = []
    bot = bottom(rb.scale)
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        if rounds > _MAX_ROUNDS:
            raise InferenceError(f"no fixpoint after {_MAX_ROUNDS} rounds")
        for r in rb.rules:
            try:
                fired = _fire(rb, r, env, mode)
            except LengthCapError as exc:
                chain = _chain(r, origin)
                raise InferenceError(
                    f"{exc} while firing rule {r.id!r} (derivation: {' <- '.join(chain)})", chain
                ) from exc
            for (atom, pv, (premises, body)), concl in zip(fired, r.conclusions):
                current = env.get(atom, bot)
                if compare(pv, current) is Ordering.GREATER:
                    step = TraceStep(
                        rule=r.id,
                        atom=atom,
                        premises=tuple(zip(r.premises, premises)),
                        conjunction=body,
                        rule_pv=concl.pv,
                        output=pv,
                        previous=current,
                    )
                    env[atom] = pv
                    origin[atom] = step
                    trace.append(step)
                    changed = True

    concluded = rb.conclusion_atoms()
    values = {a: env.get(a, bot) for a in concluded}
    # ties fall back to atom name order so rule order cannot leak into the ranking
    ranking = _stable_sort_desc(sorted(values.items()))
    return InferenceResult(rb.scale, mode, dict(env), ranking, trace, rounds)


def _stable_sort_desc(items):
    def cmp(a, b):
        return -int(compare(a[1], b[1]))

    return sorted(items, key=functools.cmp_to_key(cmp))


def _chain(rule: Rule, origin: Mapping[Atom, TraceStep]) -> list[str]:
    chain = [rule.id]
    seen = {rule.id}
    frontier = list(rule.premises)
    while frontier:
        atom = frontier.pop(0)
        step = origin.get(atom)
        if step is None or step.rule in seen:
            continue
        chain.append(step.rule)
        seen.add(step.rule)
        frontier.extend(a for a, _ in step.premises)
    return chain
