"""Grade strings, their reduction to canonical valuations, and the order on them.

A *wedge string* is a nondecreasing grade sequence.  Two wedge strings are
indistinguishable when both start at the bottom grade, or when one is the
other padded with top grades.  The shortest member of each class is a
:class:`Valuation`; only valuations are stored long-term.

Valuations are ordered lexicographically, with the twist that a proper
extension is *smaller* than its prefix (more conjuncts, less plausible).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LengthCapError, ScaleMismatchError, ValuationError
from .scale import Grade, GradeLike, Scale

__all__ = [
    "Ordering",
    "WedgeString",
    "Valuation",
    "sort_string",
    "reduce",
    "indistinguishable",
    "compare",
    "bottom",
    "top",
    "from_grades",
    "parse_valuation",
    "get_max_length",
    "set_max_length",
]

DEFAULT_MAX_LENGTH = 4096
_max_length = DEFAULT_MAX_LENGTH


def get_max_length() -> int:
    return _max_length


def set_max_length(n: int) -> int:
    """Set the valuation length cap; returns the previous value."""
    global _max_length
    if n < 1:
        raise ValueError("maximum valuation length must be >= 1")
    old, _max_length = _max_length, n
    return old


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _same_scale(a: Scale, b: Scale) -> None:
    if a.key != b.key:
        raise ScaleMismatchError(f"operands are on different scales ({a.name!r} vs {b.name!r})")


@dataclass(frozen=True)
class WedgeString:
    """A nonempty nondecreasing grade sequence (not necessarily reduced)."""

    scale: Scale
    ranks: tuple[int, ...]

    def __post_init__(self):
        if not self.ranks:
            raise ValuationError("a wedge string needs at least one grade")
        top = self.scale.top_rank
        prev = 0
        for r in self.ranks:
            if not 0 <= r <= top:
                raise ValuationError(f"rank {r} out of range for scale {self.scale.name!r}")
            if r < prev:
                raise ValuationError(f"wedge string is not nondecreasing: {self.ranks}")
            prev = r

    def __len__(self):
        return len(self.ranks)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.scale.labels[r] for r in self.ranks)

    def __str__(self):
        return "(" + ", ".join(self.labels) + ")"


class Valuation:
    """Canonical (reduced) wedge string.

    Either the singleton bottom ``(0)``, the singleton top ``(I)``, or a
    nondecreasing sequence of interior grades.  Equality is structural and
    is ``False`` across scales; ordering across scales raises.
    """

    __slots__ = ("scale", "ranks")

    def __init__(self, scale: Scale, ranks: Iterable[int]):
        ranks = tuple(ranks)
        _check_canonical(scale, ranks)
        self.scale = scale
        self.ranks = ranks

    @classmethod
    def _trusted(cls, scale: Scale, ranks: tuple[int, ...]) -> "Valuation":
        v = object.__new__(cls)
        v.scale = scale
        v.ranks = ranks
        return v

    @classmethod
    def of(cls, scale: Scale, *grades: GradeLike) -> "Valuation":
        """Shorthand for ``from_grades(scale, grades)``."""
        return from_grades(scale, grades)

    def __len__(self):
        return len(self.ranks)

    def __iter__(self):
        return iter(self.grades)

    @property
    def grades(self) -> tuple[Grade, ...]:
        return tuple(self.scale.grades[r] for r in self.ranks)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.scale.labels[r] for r in self.ranks)

    @property
    def first(self) -> Grade:
        return self.scale.grades[self.ranks[0]]

    def is_bottom(self) -> bool:
        return self.ranks == (0,)

    def is_top(self) -> bool:
        return self.ranks == (self.scale.top_rank,)

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.ranks == other.ranks and self.scale.key == other.scale.key

    def __hash__(self):
        return hash((self.scale.key, self.ranks))

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def __repr__(self):
        return f"Valuation({self})"

    def __str__(self):
        return "(" + ", ".join(self.labels) + ")"

    def to_json(self) -> list[str]:
        return list(self.labels)

    @classmethod
    def from_json(cls, scale: Scale, labels: Sequence[str]) -> "Valuation":
        if not isinstance(labels, (list, tuple)) or not labels:
            raise ValuationError("valuation JSON must be a nonempty array of grade labels")
        v = Valuation(scale, (scale.rank(lab) for lab in labels))
        return v


def _check_canonical(scale: Scale, ranks: tuple[int, ...]) -> None:
    if not ranks:
        raise ValuationError("a valuation needs at least one grade")
    if len(ranks) > _max_length:
        raise LengthCapError(f"valuation length {len(ranks)} exceeds the cap of {_max_length}")
    top = scale.top_rank
    prev = 0
    for r in ranks:
        if not isinstance(r, int) or not 0 <= r <= top:
            raise ValuationError(f"rank {r!r} out of range for scale {scale.name!r}")
        if r < prev:
            raise ValuationError(f"valuation is not nondecreasing: {ranks}")
        prev = r
    if len(ranks) > 1:
        if ranks[0] == 0:
            raise ValuationError(f"{ranks} is not reduced: a string starting at bottom reduces to (0)")
        if ranks[-1] == top:
            raise ValuationError(f"{ranks} is not reduced: trailing top grades must be dropped")


def _ranks_of(items: Sequence, scale: Scale | None) -> tuple[Scale, list[int]]:
    if not items:
        raise ValuationError("empty grade sequence")
    if scale is None:
        first = items[0]
        if not isinstance(first, Grade):
            raise ValuationError("a scale is required when grades are given as labels or ranks")
        scale = first.scale
    ranks = []
    for g in items:
        if isinstance(g, Grade) and g.scale.key != scale.key:
            raise ScaleMismatchError(
                f"grade {g.label!r} from scale {g.scale.name!r} mixed into {scale.name!r}"
            )
        ranks.append(scale.rank(g))
    return scale, ranks


def sort_string(raw: Sequence[GradeLike], scale: Scale | None = None) -> WedgeString:
    """Sort an arbitrary grade sequence into a wedge string (multiset preserved)."""
    scale, ranks = _ranks_of(list(raw), scale)
    return WedgeString(scale, tuple(sorted(ranks)))


def _reduce_ranks(ranks: Sequence[int], top: int) -> tuple[int, ...]:
    if ranks[0] == 0:
        return (0,)
    end = len(ranks)
    while end > 0 and ranks[end - 1] == top:
        end -= 1
    if end == 0:
        return (top,)
    return tuple(ranks[:end])


def reduce(w: WedgeString) -> Valuation:
    """Shortest wedge string indistinguishable from ``w``."""
    ranks = _reduce_ranks(w.ranks, w.scale.top_rank)
    if len(ranks) > _max_length:
        raise LengthCapError(f"valuation length {len(ranks)} exceeds the cap of {_max_length}")
    return Valuation._trusted(w.scale, ranks)


def indistinguishable(f: WedgeString, g: WedgeString) -> bool:
    _same_scale(f.scale, g.scale)
    a, b = f.ranks, g.ranks
    if a[0] == 0 and b[0] == 0:
        return True
    n = min(len(a), len(b))
    if a[:n] != b[:n]:
        return False
    longer = a if len(a) > len(b) else b
    if len(longer) == n:
        return True
    return longer[n] == f.scale.top_rank


def compare(f: Valuation, g: Valuation) -> Ordering:
    """Three-way comparison of two valuations on the same scale.

    The first differing position decides; if one is a prefix of the other,
    the longer one is smaller.
    """
    _same_scale(f.scale, g.scale)
    a, b = f.ranks, g.ranks
    for x, y in zip(a, b):
        if x != y:
            return Ordering.LESS if x < y else Ordering.GREATER
    if len(a) == len(b):
        return Ordering.EQUAL
    return Ordering.LESS if len(a) > len(b) else Ordering.GREATER


def bottom(s: Scale) -> Valuation:
    return Valuation._trusted(s, (0,))


def top(s: Scale) -> Valuation:
    return Valuation._trusted(s, (s.top_rank,))


def from_grades(s: Scale, grades: Sequence[GradeLike]) -> Valuation:
    """Sort then reduce: the valuation of the conjunction of ``grades``."""
    return reduce(sort_string(list(grades), s))


_LABEL_LIST = re.compile(r"^\s*\(\s*(.*?)\s*\)\s*$", re.S)


def parse_valuation(text: str, s: Scale) -> Valuation:
    """Parse the textual form ``(A, B, ...)``; a bare label is a singleton.

    The grades are sorted and reduced, so ``str(parse_valuation(str(v)))``
    reproduces ``str(v)`` exactly for every valuation ``v``.
    """
    m = _LABEL_LIST.match(text)
    body = m.group(1) if m else text.strip()
    parts = [p.strip() for p in body.split(",")]
    if not parts or any(not p for p in parts):
        raise ValuationError(f"malformed valuation literal {text!r}")
    return from_grades(s, parts)
