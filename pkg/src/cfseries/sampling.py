"""Seeded random instances for property checks.

Series are sparse: at most ``max_support`` terms, each on a word whose
length is drawn uniformly from ``0..max_len`` before its letters are, with
coefficients ``k/m`` for ``k`` in +-{1,2,3} and ``m`` in {1,2,3}.  Drawing
the length first keeps short words, where feedback actually acts, common.
"""

from __future__ import annotations

import random
from fractions import Fraction

from cfseries.feedback import AffinePair, TangentPair
from cfseries.series import TruncatedSeries
from cfseries.words import Word

__all__ = [
    "instance_rng",
    "random_word",
    "random_series",
    "random_proper",
    "random_group_element",
    "random_pair",
    "random_nonidentity_pair",
    "random_tangent",
]

_NUMERATORS = (-3, -2, -1, 1, 2, 3)
_DENOMINATORS = (1, 2, 3)


def instance_rng(seed: int, name: str, index: int) -> random.Random:
    """Independent stream per (seed, identity, instance); str seeds hash stably."""
    return random.Random(f"{seed}/{name}/{index}")


def random_word(rng: random.Random, min_len: int, max_len: int) -> Word:
    n = rng.randint(min_len, max_len)
    return Word((1 << n) | rng.getrandbits(n)) if n else Word(1)


def _coef(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(_NUMERATORS), rng.choice(_DENOMINATORS))


def random_series(
    rng: random.Random,
    degree: int,
    *,
    max_support: int = 8,
    max_len: int | None = None,
    min_len: int = 0,
) -> TruncatedSeries:
    max_len = degree if max_len is None else min(max_len, degree)
    if max_len < min_len:
        return TruncatedSeries.zero(degree)
    terms = [(_coef(rng), random_word(rng, min_len, max_len)) for _ in range(rng.randint(1, max_support))]
    return TruncatedSeries(terms, degree)


def random_proper(rng: random.Random, degree: int, **kw) -> TruncatedSeries:
    kw.setdefault("min_len", 1)
    return random_series(rng, degree, **kw)


def random_group_element(rng: random.Random, degree: int, **kw) -> TruncatedSeries:
    """A member of the shuffle group M (constant term 1)."""
    return 1 + random_proper(rng, degree, **kw)


def random_pair(rng: random.Random, degree: int, **kw) -> AffinePair:
    return AffinePair(random_group_element(rng, degree, **kw), random_series(rng, degree, **kw))


def random_nonidentity_pair(rng: random.Random, degree: int, **kw) -> AffinePair:
    while True:
        P = random_pair(rng, degree, **kw)
        if not P.is_identity():
            return P


def random_tangent(rng: random.Random, degree: int, **kw) -> TangentPair:
    return TangentPair(random_proper(rng, degree, **kw), random_series(rng, degree, **kw))
