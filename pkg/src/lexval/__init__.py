"""Lexicographic valuations of plausibility over ordinal scales.

Quick tour::

    >>> from lexval import make_scale, from_grades, conj
    >>> s = make_scale("v", ["MIN", "SMALL", "LARGE", "VLARGE", "MAX"])
    >>> print(conj(from_grades(s, ["LARGE", "VLARGE"]), from_grades(s, ["LARGE"])))
    (LARGE, LARGE, VLARGE)
"""

from .algebra import (
    conj,
    conj_all,
    disj,
    disj_all,
    mpgf_r,
    mpgf_s,
    neg,
    r_implication,
    s_implication,
)
from .engine import Atom, Conclusion, Fact, Mode, Rule, RuleBase, fire, infer, premise_pv
from .errors import (
    BudgetError,
    InferenceError,
    LengthCapError,
    LexvalError,
    ScaleError,
    ScaleMismatchError,
    SearchBoundError,
    ValuationError,
)
from .scale import Grade, Scale, install_negation, make_scale, negate_grade
from .valuation import (
    Ordering,
    Valuation,
    WedgeString,
    bottom,
    compare,
    from_grades,
    indistinguishable,
    parse_valuation,
    reduce,
    sort_string,
    top,
)

__version__ = "0.1.0"
