"""Exact truncated shuffle-algebra calculus of affine feedback for Chen-Fliess series."""

__version__ = "0.1.0"

from cfseries._backend import BACKEND
from cfseries.feedback import (
    AffinePair,
    StarInverseError,
    TangentPair,
    affine_feedback,
    bar_compose,
    commutator_closed_form,
    commutator_odot,
    lie_bracket,
    odot,
    odot_inverse,
    residual_loop,
    star,
    star_inverse,
    triangle,
)
from cfseries.series import (
    NotAUnitError,
    TruncatedSeries,
    compose,
    mixed_compose,
    quotient_equal,
    shuffle,
    shuffle_inverse,
    shuffle_power,
)
from cfseries.words import Word, concat, enumerate_words

__all__ = [
    "BACKEND",
    "AffinePair",
    "TangentPair",
    "TruncatedSeries",
    "Word",
    "NotAUnitError",
    "StarInverseError",
    "affine_feedback",
    "bar_compose",
    "commutator_closed_form",
    "commutator_odot",
    "compose",
    "concat",
    "enumerate_words",
    "lie_bracket",
    "mixed_compose",
    "odot",
    "odot_inverse",
    "quotient_equal",
    "residual_loop",
    "shuffle",
    "shuffle_inverse",
    "shuffle_power",
    "star",
    "star_inverse",
    "triangle",
]
