"""Naive reference implementations, written straight from the word recursions.

Words are tuples of letters, series are ``dict[tuple, Fraction]``.  Nothing
here shares code with the package except the final conversion helpers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from cfseries.series import TruncatedSeries
from cfseries.words import Word


def to_dict(c: TruncatedSeries) -> dict[tuple, Fraction]:
    return {tuple(w.letters): r for w, r in c.items()}


def from_dict(d: dict[tuple, Fraction], degree: int) -> TruncatedSeries:
    return TruncatedSeries([(r, Word.from_letters(w)) for w, r in d.items()], degree)


def _add_into(acc, w, r, n):
    if len(w) <= n and r:
        acc[w] = acc.get(w, 0) + r
        if acc[w] == 0:
            del acc[w]


def word_shuffle(u: tuple, v: tuple) -> dict[tuple, int]:
    """All interleavings, by choosing the positions of ``u`` in the result."""
    out: dict[tuple, int] = {}
    m = len(u) + len(v)
    for pos in combinations(range(m), len(u)):
        res, iu, iv = [], 0, 0
        chosen = set(pos)
        for k in range(m):
            if k in chosen:
                res.append(u[iu])
                iu += 1
            else:
                res.append(v[iv])
                iv += 1
        out[tuple(res)] = out.get(tuple(res), 0) + 1
    return out


def shuffle(c: dict, d: dict, n: int) -> dict:
    acc: dict = {}
    for u, a in c.items():
        for v, b in d.items():
            if len(u) + len(v) > n:
                continue
            for w, k in word_shuffle(u, v).items():
                _add_into(acc, w, a * b * k, n)
    return acc


def prefix(letter: int, c: dict, n: int) -> dict:
    return {(letter,) + w: r for w, r in c.items() if len(w) < n}


def add(*cs: dict, n: int) -> dict:
    acc: dict = {}
    for c in cs:
        for w, r in c.items():
            _add_into(acc, w, r, n)
    return acc


def word_compose(eta: tuple, d: dict, n: int) -> dict:
    if not eta:
        return {(): Fraction(1)}
    rest = word_compose(eta[1:], d, n)
    if eta[0] == 0:
        return prefix(0, rest, n)
    return prefix(0, shuffle(d, rest, n), n)


def compose(c: dict, d: dict, n: int) -> dict:
    acc: dict = {}
    for eta, r in c.items():
        for w, s in word_compose(eta, d, n).items():
            _add_into(acc, w, r * s, n)
    return acc


def word_mixed(eta: tuple, d1: dict, d2: dict, n: int) -> dict:
    if not eta:
        return {(): Fraction(1)}
    rest = word_mixed(eta[1:], d1, d2, n)
    if eta[0] == 0:
        return prefix(0, rest, n)
    return add(prefix(1, shuffle(d1, rest, n), n), prefix(0, shuffle(d2, rest, n), n), n=n)


def mixed_compose(c: dict, d1: dict, d2: dict, n: int) -> dict:
    acc: dict = {}
    for eta, r in c.items():
        for w, s in word_mixed(eta, d1, d2, n).items():
            _add_into(acc, w, r * s, n)
    return acc


def shuffle_inverse_M(c: dict, n: int) -> dict:
    """Geometric series sum_k (1 - c)^{sh k} for c(1) = 1."""
    proper = {w: -r for w, r in c.items() if w}
    total = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for _ in range(n):
        power = shuffle(power, proper, n)
        total = add(total, power, n=n)
    return total
