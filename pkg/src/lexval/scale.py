"""Finite linearly ordered plausibility scales and negation on them.

A scale is a list of labels ordered from the minimal grade (rank 0) to the
maximal grade (rank m-1).  All algebra in the package works on integer ranks;
labels exist for input and display only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import ScaleError, ScaleMismatchError

__all__ = [
    "Grade",
    "Scale",
    "make_scale",
    "negate_grade",
    "install_negation",
    "GradeLike",
]


class Grade:
    """One element of a :class:`Scale`.

    Grades of the same scale are ordered by rank.  Ordering grades from two
    different scales raises :class:`ScaleMismatchError`; equality between
    them is simply ``False``.
    """

    __slots__ = ("rank", "label", "scale")

    def __init__(self, rank: int, label: str, scale: "Scale"):
        self.rank = rank
        self.label = label
        self.scale = scale

    def _check(self, other: "Grade") -> None:
        if not isinstance(other, Grade):
            raise TypeError(f"cannot compare Grade with {type(other).__name__}")
        if other.scale.key != self.scale.key:
            raise ScaleMismatchError(
                f"grades {self.label!r} and {other.label!r} belong to different scales "
                f"({self.scale.name!r} vs {other.scale.name!r})"
            )

    def __eq__(self, other):
        if not isinstance(other, Grade):
            return NotImplemented
        return self.scale.key == other.scale.key and self.rank == other.rank

    def __hash__(self):
        return hash((self.scale.key, self.rank))

    def __lt__(self, other):
        self._check(other)
        return self.rank < other.rank

    def __le__(self, other):
        self._check(other)
        return self.rank <= other.rank

    def __gt__(self, other):
        self._check(other)
        return self.rank > other.rank

    def __ge__(self, other):
        self._check(other)
        return self.rank >= other.rank

    def __repr__(self):
        return f"Grade({self.rank}, {self.label!r})"

    def __str__(self):
        return self.label


GradeLike = Union[Grade, str, int]


@dataclass(frozen=True, eq=False)
class Scale:
    """A finite chain of grades with a negation map.

    ``negation[k]`` is the rank of the image of the grade of rank ``k``.
    Use :func:`make_scale` / :func:`install_negation` rather than building
    instances directly; they validate the negation axioms.
    """

    name: str
    labels: tuple[str, ...]
    negation: tuple[int, ...]
    weak: bool = True
    involutive: bool = True
    grades: tuple[Grade, ...] = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "grades", tuple(Grade(k, lab, self) for k, lab in enumerate(self.labels))
        )
        object.__setattr__(self, "_index", {lab: k for k, lab in enumerate(self.labels)})

    @property
    def key(self) -> tuple:
        """Identity used for cross-scale checks: grades sharing a key are comparable."""
        return (self.name, self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def top_rank(self) -> int:
        return len(self.labels) - 1

    @property
    def bottom(self) -> Grade:
        return self.grades[0]

    @property
    def top(self) -> Grade:
        return self.grades[-1]

    @property
    def has_default_negation(self) -> bool:
        return self.negation == _reflection(self.size)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.grades)

    def __contains__(self, item) -> bool:
        if isinstance(item, Grade):
            return item.scale.key == self.key
        if isinstance(item, str):
            return item in self._index
        return False

    def __eq__(self, other):
        if not isinstance(other, Scale):
            return NotImplemented
        return self.key == other.key and self.negation == other.negation

    def __hash__(self):
        return hash((self.key, self.negation))

    def grade(self, g: GradeLike) -> Grade:
        """Resolve a label, rank or Grade of this scale to its Grade object."""
        if isinstance(g, Grade):
            if g.scale.key != self.key:
                raise ScaleMismatchError(
                    f"grade {g.label!r} is from scale {g.scale.name!r}, not {self.name!r}"
                )
            return self.grades[g.rank]
        if isinstance(g, str):
            try:
                return self.grades[self._index[g]]
            except KeyError:
                raise ScaleError(f"unknown grade {g!r} for scale {self.name!r}") from None
        if isinstance(g, int) and not isinstance(g, bool):
            if 0 <= g < self.size:
                return self.grades[g]
            raise ScaleError(f"rank {g} out of range for scale {self.name!r} of size {self.size}")
        raise TypeError(f"expected a grade label, rank or Grade, got {type(g).__name__}")

    def rank(self, g: GradeLike) -> int:
        return self.grade(g).rank

    def negate(self, g: GradeLike) -> Grade:
        return self.grades[self.negation[self.rank(g)]]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "grades": list(self.labels),
            "negation": [self.labels[k] for k in self.negation],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Scale":
        s = make_scale(data["name"], data["grades"])
        neg = data.get("negation")
        if neg is not None:
            s = install_negation(s, dict(zip(s.labels, neg)))
        return s


def _reflection(m: int) -> tuple[int, ...]:
    return tuple(m - 1 - k for k in range(m))


def make_scale(name: str, labels: Iterable[str]) -> Scale:
    """Build a scale from labels listed from lowest to highest grade.

    The scale gets the symmetric negation: rank ``k`` maps to rank ``m-1-k``.
    """
    labels = tuple(labels)
    if len(labels) < 2:
        raise ScaleError(f"scale {name!r} needs at least 2 grades, got {len(labels)}")
    seen = set()
    for lab in labels:
        if not isinstance(lab, str) or not lab:
            raise ScaleError(f"grade labels must be nonempty strings, got {lab!r}")
        if lab in seen:
            raise ScaleError(f"duplicate grade label {lab!r} in scale {name!r}")
        seen.add(lab)
    return Scale(name, labels, _reflection(len(labels)))


def negate_grade(s: Scale, g: GradeLike) -> Grade:
    return s.negate(g)


def install_negation(s: Scale, table: Mapping[GradeLike, GradeLike]) -> Scale:
    """Return a copy of ``s`` whose negation is given by ``table``.

    The table must be total, antitone and swap the boundary grades.  The
    returned scale records whether the negation is weak (``f'' >= f``) and
    whether it is an involution (``f'' == f``).
    """
    image = [None] * s.size
    for src, dst in table.items():
        k = s.rank(src)
        if image[k] is not None:
            raise ScaleError(f"negation of {s.labels[k]!r} given twice")
        image[k] = s.rank(dst)
    missing = [s.labels[k] for k, v in enumerate(image) if v is None]
    if missing:
        raise ScaleError(f"negation table is not total; missing {', '.join(missing)}")
    top = s.top_rank
    if image[0] != top:
        raise ScaleError(
            f"negation must map {s.labels[0]!r} to {s.labels[top]!r}, got {s.labels[image[0]]!r}"
        )
    if image[top] != 0:
        raise ScaleError(
            f"negation must map {s.labels[top]!r} to {s.labels[0]!r}, got {s.labels[image[top]]!r}"
        )
    # antitone on adjacent pairs is enough on a chain
    for k in range(top):
        if image[k + 1] > image[k]:
            raise ScaleError(
                f"negation is not antitone: {s.labels[k]!r} < {s.labels[k + 1]!r} but "
                f"{s.labels[image[k]]!r} < {s.labels[image[k + 1]]!r}"
            )
    weak = all(image[image[k]] >= k for k in range(s.size))
    involutive = all(image[image[k]] == k for k in range(s.size))
    return Scale(s.name, s.labels, tuple(image), weak=weak, involutive=involutive)


def scale_from_ranks(name: str, size: int, prefix: str = "g") -> Scale:
    """Convenience: a scale whose labels are ``g0 .. g{size-1}``."""
    return make_scale(name, [f"{prefix}{k}" for k in range(size)])


def numbered_scale(size: int) -> Scale:
    """Scale ``{0, 1, ..., size-1}`` labelled by the digits themselves."""
    return make_scale(f"L{size}", [str(k) for k in range(size)])


def grades_of(s: Scale, items: Sequence[GradeLike]) -> list[Grade]:
    return [s.grade(x) for x in items]
