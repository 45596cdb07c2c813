"""Stability audit: numeric T-norm inference under rank-preserving embeddings.

Ordinal grades are mapped to numbers in [0, 1] (bottom to 0, top to 1,
strictly increasing in between) and conclusions are computed with a numeric
T-norm.  Different embeddings of the *same* ordinal data can reverse the
order of two conclusions; the lexicographic engine cannot, because it never
looks at the numbers.
"""

from __future__ import annotations

import enum
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Mapping, Optional, Sequence

from .engine import Atom, Mode, RuleBase, infer
from .errors import LexvalError, ScaleMismatchError
from .scale import GradeLike, Scale
from .valuation import Valuation

__all__ = [
    "TNorm",
    "Embedding",
    "evaluate_numeric",
    "sample_embeddings",
    "StabilityReport",
    "audit",
]


class TNorm(enum.Enum):
    PRODUCT = "product"
    MIN = "min"
    LUKASIEWICZ = "lukasiewicz"

    @classmethod
    def parse(cls, text: str) -> "TNorm":
        try:
            return cls(text.lower())
        except ValueError:
            raise LexvalError(
                f"unknown t-norm {text!r}; expected one of " + ", ".join(t.value for t in cls)
            ) from None

    def apply(self, a: Real, b: Real) -> Real:
        if self is TNorm.PRODUCT:
            return a * b
        if self is TNorm.MIN:
            return min(a, b)
        return max(0, a + b - 1)

    def fold(self, values: Sequence[Real]) -> Real:
        it = iter(values)
        acc = next(it)
        for v in it:
            acc = self.apply(acc, v)
        return acc


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing map from grade ranks to [0, 1] with pinned ends."""

    scale: Scale
    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.scale.size:
            raise LexvalError(f"embedding has {len(vals)} values for {self.scale.size} grades")
        if vals[0] != 0 or vals[-1] != 1:
            raise LexvalError("embedding must send the bottom grade to 0 and the top grade to 1")
        for a, b in zip(vals, vals[1:]):
            if not a < b:
                raise LexvalError(f"embedding is not strictly increasing: {a} >= {b}")

    @classmethod
    def from_mapping(cls, scale: Scale, mapping: Mapping[GradeLike, Real]) -> "Embedding":
        """Build from values for (at least) the interior grades; ends default to 0 and 1."""
        vals: list = [None] * scale.size
        vals[0], vals[-1] = Fraction(0), Fraction(1)
        for g, x in mapping.items():
            vals[scale.rank(g)] = x
        missing = [scale.labels[k] for k, v in enumerate(vals) if v is None]
        if missing:
            raise LexvalError("embedding leaves grades unassigned: " + ", ".join(missing))
        return cls(scale, tuple(vals))

    def __call__(self, g: GradeLike) -> Real:
        return self.values[self.scale.rank(g)]

    def value_of(self, v: Valuation) -> Real:
        if len(v) != 1:
            raise LexvalError(f"numeric evaluation needs single-grade plausibilities, got {v}")
        return self.values[v.ranks[0]]

    def to_json(self) -> dict:
        return {lab: _num_json(x) for lab, x in zip(self.scale.labels, self.values)}


def _exact_text(x: Fraction) -> str:
    """Finite decimal when one exists (``27/100`` -> ``0.27``), else ``p/q``."""
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    scaled = x * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _num_json(x: Real):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else _exact_text(x)
    if isinstance(x, int):
        return x
    return float(x)


def evaluate_numeric(rb: RuleBase, emb: Embedding, tnorm: TNorm = TNorm.PRODUCT) -> dict[Atom, Real]:
    """Numeric plausibility of every concluded atom.

    Each conclusion gets ``tnorm(premise values..., rule value)``; unknown
    premises count as 0; several rules for one atom combine by maximum, and
    rules are re-fired to a fixpoint as in :func:`lexval.engine.infer`.
    """
    if emb.scale.key != rb.scale.key:
        raise ScaleMismatchError(
            f"embedding is for scale {emb.scale.name!r}, rule base uses {rb.scale.name!r}"
        )
    env: dict[Atom, Real] = {f.atom: emb.value_of(f.pv) for f in rb.facts}
    rules = [(r, [emb.value_of(c.pv) for c in r.conclusions]) for r in rb.rules]
    for _ in range(10_000):
        changed = False
        for r, rule_values in rules:
            premises = [env.get(a, 0) for a in r.premises]
            for c, rv in zip(r.conclusions, rule_values):
                x = tnorm.fold(premises + [rv])
                cur = env.get(c.atom)
                if cur is None or x > cur:
                    env[c.atom] = x
                    changed = True
        if not changed:
            break
    else:
        raise LexvalError("numeric evaluation did not reach a fixpoint")
    return {a: env.get(a, 0) for a in rb.conclusion_atoms()}


def sample_embeddings(scale: Scale, n: int, seed: int) -> list[Embedding]:
    """``n`` random embeddings, reproducible from ``seed``.

    Interior values are i.i.d. uniform on (0, 1), sorted and assigned by
    rank; a draw with repeated values (or hitting 0) is discarded and redrawn.
    """
    if n < 1:
        raise ValueError("need at least one embedding")
    rng = random.Random(seed)
    k = scale.size - 2
    out = []
    while len(out) < n:
        draw = sorted(rng.random() for _ in range(k))
        if any(x <= 0.0 for x in draw) or len(set(draw)) != k:
            continue
        out.append(Embedding(scale, (0.0, *draw, 1.0)))
    return out


def _signs(atoms: Sequence[Atom], values: Mapping[Atom, Real]) -> tuple[int, ...]:
    signs = []
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            a, b = values[atoms[i]], values[atoms[j]]
            signs.append((a > b) - (a < b))
    return tuple(signs)


def _reversals(s: tuple[int, ...], t: tuple[int, ...]) -> int:
    return sum(1 for x, y in zip(s, t) if x * y < 0)


@dataclass
class StabilityReport:
    tnorm: TNorm
    seed: Optional[int]
    samples: int
    conclusions: list[Atom]
    flips: int
    pairwise_flips: int
    ranking_disagreements: int
    samples_with_ties: int
    lexicographic_ranking: list[tuple[Atom, Valuation]]
    witness: Optional[dict] = None
    embeddings: list[Embedding] = field(default_factory=list, repr=False)
    outcomes: list[dict] = field(default_factory=list, repr=False)

    @property
    def max_pairs(self) -> int:
        return self.samples * (self.samples - 1) // 2

    def to_json(self) -> dict:
        return {
            "tnorm": self.tnorm.value,
            "seed": self.seed,
            "samples": self.samples,
            "conclusions": [str(a) for a in self.conclusions],
            "flips": self.flips,
            "pairwise_flips": self.pairwise_flips,
            "ranking_disagreements": self.ranking_disagreements,
            "samples_with_ties": self.samples_with_ties,
            "witness": self.witness,
            "lexicographic_ranking": [
                {"attribute": a.attribute, "value": a.value, "pv": v.to_json()}
                for a, v in self.lexicographic_ranking
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def render(self) -> str:
        lines = [
            f"t-norm:                {self.tnorm.value}",
            f"seed:                  {self.seed}",
            f"embeddings evaluated:  {self.samples}",
            f"flipping pairs:        {self.flips} of {self.max_pairs}",
            f"pairwise reversals:    {self.pairwise_flips}",
            f"ranking disagreements: {self.ranking_disagreements}",
            f"samples with ties:     {self.samples_with_ties}",
        ]
        if self.witness:
            w = self.witness
            lines.append("")
            lines.append(f"witness: embeddings #{w['first']['index']} and #{w['second']['index']}")
            for side in ("first", "second"):
                e = w[side]
                emb = ", ".join(f"{k}={v}" for k, v in e["embedding"].items())
                res = ", ".join(f"{k}={v}" for k, v in e["conclusions"].items())
                lines.append(f"  {emb}")
                lines.append(f"    -> {res}")
        lines.append("")
        lines.append("lexicographic ranking (mpgf-r, identical for every embedding):")
        for pos, (a, v) in enumerate(self.lexicographic_ranking, start=1):
            lines.append(f"  {pos}. {a} {v}")
        return "\n".join(lines)

    def rows(self) -> list[list]:
        """Per-embedding table: index, grade values, conclusion values."""
        out = []
        for i, (emb, res) in enumerate(zip(self.embeddings, self.outcomes)):
            out.append([i, *emb.values, *(res[a] for a in self.conclusions)])
        return out

    def header(self) -> list[str]:
        scale = self.embeddings[0].scale if self.embeddings else None
        grades = list(scale.labels) if scale else []
        return ["index", *grades, *(str(a) for a in self.conclusions)]


def audit(
    rb: RuleBase,
    tnorm: TNorm = TNorm.PRODUCT,
    n: int = 500,
    seed: Optional[int] = 0,
    fixed: Sequence[Embedding] = (),
) -> StabilityReport:
    """Evaluate ``fixed`` embeddings followed by ``n`` sampled ones and count flips.

    A *flip* is a pair of embeddings under which some two conclusions are
    strictly ordered in opposite directions.  ``flips`` counts embedding
    pairs with at least one such reversal; ``pairwise_flips`` counts every
    reversed (embedding pair, conclusion pair).
    """
    embeddings = list(fixed)
    if n > 0:
        embeddings += sample_embeddings(rb.scale, n, seed)
    if not embeddings:
        raise LexvalError("audit needs at least one embedding")
    conclusions = rb.conclusion_atoms()
    outcomes = [evaluate_numeric(rb, e, tnorm) for e in embeddings]
    signs = [_signs(conclusions, o) for o in outcomes]

    # group identical sign patterns; pairs within a group never disagree
    counts = Counter(signs)
    patterns = list(counts)
    flips = pairwise = disagreements = 0
    for i, p in enumerate(patterns):
        for q in patterns[i + 1:]:
            weight = counts[p] * counts[q]
            disagreements += weight
            r = _reversals(p, q)
            if r:
                flips += weight
                pairwise += weight * r

    witness = None
    if flips:
        first_seen: dict[tuple, int] = {}
        for j, s in enumerate(signs):
            hit = [i for pat, i in first_seen.items() if _reversals(pat, s)]
            if hit:
                witness = _witness(embeddings, outcomes, min(hit), j)
                break
            first_seen.setdefault(s, j)

    lex = infer(rb, Mode.MPGF_R).ranking
    return StabilityReport(
        tnorm=tnorm,
        seed=seed if n > 0 else None,
        samples=len(embeddings),
        conclusions=conclusions,
        flips=flips,
        pairwise_flips=pairwise,
        ranking_disagreements=disagreements,
        samples_with_ties=sum(1 for s in signs if 0 in s),
        lexicographic_ranking=lex,
        witness=witness,
        embeddings=embeddings,
        outcomes=outcomes,
    )


def _witness(embeddings, outcomes, i, j) -> dict:
    def side(k):
        return {
            "index": k,
            "embedding": embeddings[k].to_json(),
            "conclusions": {str(a): _num_json(x) for a, x in outcomes[k].items()},
        }

    return {"first": side(i), "second": side(j)}
