"""Truncated non-commutative formal power series over the rationals.

A :class:`TruncatedSeries` holds every coefficient of a series on words of
length at most ``degree``.  Coefficients are exact: internally a series is a
map ``word key -> integer numerator`` over one shared positive denominator,
reduced so that the representation is canonical.  Public accessors hand out
:class:`fractions.Fraction` values.

All products here are degree non-decreasing on words, so the degree-``n``
part of a result depends only on the degree-``<= n`` parts of the inputs and
truncation never loses information below the cap.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Protocol, Union

from cfseries import _backend
from cfseries.words import (
    EMPTY,
    Word,
    as_word,
    check_degree,
    is_drift_word,
    prefix_letter,
)

Rational = Union[int, Fraction]

__all__ = [
    "TruncatedSeries",
    "NotAUnitError",
    "make_series",
    "add",
    "scale",
    "shuffle",
    "shuffle_power",
    "shuffle_inverse",
    "compose",
    "mixed_compose",
    "quotient_equal",
]


class NotAUnitError(ValueError):
    """Raised when a shuffle inverse is requested for a proper series."""


class PairLike(Protocol):
    c1: "TruncatedSeries"
    c2: "TruncatedSeries"


def _as_fraction(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if isinstance(r, int):
        return Fraction(r)
    if isinstance(r, str):
        return Fraction(r)
    raise TypeError(f"coefficients must be int, Fraction or str, got {type(r).__name__}")


class TruncatedSeries:
    """A series known exactly on all words of length <= ``degree``.

    Instances are immutable; every operation returns a new series.

    >>> c = TruncatedSeries.parse("1 + x1", 3)
    >>> shuffle_inverse(c)
    TruncatedSeries('1 - x1 + 2*x1x1 - 6*x1x1x1', degree=3)
    """

    __slots__ = ("_num", "_den", "degree")

    def __init__(self, terms: Mapping | Iterable | None = None, degree: int = 0):
        check_degree(degree)
        limit = 1 << (degree + 1)
        acc: dict[int, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else ((w, r) for r, w in terms)
            for w, r in items:
                k = int(as_word(w))
                if k < limit:
                    acc[k] = acc.get(k, 0) + _as_fraction(r)
        den = 1
        for v in acc.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        num = {k: int(v * den) for k, v in acc.items() if v}
        _init(self, num, den, degree)

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, degree: int) -> "TruncatedSeries":
        return _raw({}, 1, degree)

    @classmethod
    def one(cls, degree: int) -> "TruncatedSeries":
        return _raw({1: 1}, 1, degree)

    @classmethod
    def constant(cls, value: Rational, degree: int) -> "TruncatedSeries":
        f = _as_fraction(value)
        return _raw({1: f.numerator} if f else {}, f.denominator, degree)

    @classmethod
    def word(cls, w, degree: int, coefficient: Rational = 1) -> "TruncatedSeries":
        return cls({as_word(w): coefficient}, degree)

    @classmethod
    def parse(cls, expr: str, degree: int) -> "TruncatedSeries":
        """Build a series from an expression such as ``"1 - 1/2*x0x1 + 3 x1"``."""
        return cls(_parse_expr(expr), degree)

    # access ---------------------------------------------------------------

    def coefficient(self, w) -> Fraction:
        k = int(as_word(w))
        return Fraction(self._num.get(k, 0), self._den)

    __getitem__ = coefficient

    @property
    def constant_term(self) -> Fraction:
        return Fraction(self._num.get(1, 0), self._den)

    def support(self) -> list[Word]:
        return [Word(k) for k in sorted(self._num)]

    def items(self) -> list[tuple[Word, Fraction]]:
        """(word, coefficient) pairs in graded-lexicographic order."""
        return [(Word(k), Fraction(self._num[k], self._den)) for k in sorted(self._num)]

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._num)

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_proper(self) -> bool:
        return 1 not in self._num

    def in_shuffle_group(self) -> bool:
        return self._num.get(1) == self._den

    def is_unit(self) -> bool:
        return 1 in self._num

    def max_word_length(self) -> int:
        return max((k.bit_length() - 1 for k in self._num), default=-1)

    def restrict(self, degree: int) -> "TruncatedSeries":
        """Drop every word longer than ``degree`` (no-op above the current degree)."""
        degree = min(degree, self.degree)
        limit = 1 << (degree + 1)
        return _raw({k: v for k, v in self._num.items() if k < limit}, self._den, degree)

    # arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return add(self, other)
        if isinstance(other, (int, Fraction)):
            return add(self, TruncatedSeries.constant(other, self.degree))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return _raw({k: -v for k, v in self._num.items()}, self._den, self.degree)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return add(self, -other)
        if isinstance(other, (int, Fraction)):
            return add(self, TruncatedSeries.constant(-other, self.degree))
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.degree == other.degree and self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        return hash((self.degree, self._den, frozenset(self._num.items())))

    def __str__(self) -> str:
        return _format_expr(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries({_format_expr(self)!r}, degree={self.degree})"


def _init(s: TruncatedSeries, num: dict[int, int], den: int, degree: int) -> None:
    if not num:
        den = 1
    elif den != 1:
        g = math.gcd(den, *num.values())
        if g != 1:
            num = {k: v // g for k, v in num.items()}
            den //= g
    s._num = num
    s._den = den
    s.degree = degree


def _raw(num: dict[int, int], den: int, degree: int) -> TruncatedSeries:
    # num must be zero-free and truncated; den > 0
    s = TruncatedSeries.__new__(TruncatedSeries)
    _init(s, num, den, degree)
    return s


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?P<word>(?:x[01])+)?\s*"
)


def _parse_expr(expr: str) -> list[tuple[Fraction, Word]]:
    terms = []
    pos = 0
    text = expr.strip()
    if not text or text == "0":
        return terms
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos or (m.group("coef") is None and m.group("word") is None):
            raise ValueError(f"cannot parse series expression at {text[pos:]!r}")
        if pos > 0 and m.group("sign") is None:
            raise ValueError(f"missing operator before {text[pos:]!r}")
        raw = m.group("coef") or "1"
        if raw.partition("/")[2] and int(raw.partition("/")[2]) == 0:
            raise ValueError(f"zero denominator in {raw!r}")
        coef = Fraction(raw)
        if m.group("sign") == "-":
            coef = -coef
        word = Word.parse(m.group("word")) if m.group("word") else EMPTY
        terms.append((coef, word))
        pos = m.end()
    return terms


def _format_expr(s: TruncatedSeries) -> str:
    if not s._num:
        return "0"
    parts = []
    for w, r in s.items():
        sign = "-" if r < 0 else "+"
        r = abs(r)
        if int(w) == 1:
            body = str(r)
        elif r == 1:
            body = str(w)
        else:
            body = f"{r}*{w}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ----------------------------------------------------------------------------
# vector space


def make_series(terms: Iterable[tuple[Rational, object]], degree: int) -> TruncatedSeries:
    """Series from ``(coefficient, word)`` pairs; duplicates add up, long words drop."""
    return TruncatedSeries(list(terms), degree)


def add(c: TruncatedSeries, d: TruncatedSeries) -> TruncatedSeries:
    n = min(c.degree, d.degree)
    limit = 1 << (n + 1)
    g = math.gcd(c._den, d._den)
    fc = d._den // g
    fd = c._den // g
    out = {k: v * fc for k, v in c._num.items() if k < limit}
    for k, v in d._num.items():
        if k < limit:
            x = out.get(k, 0) + v * fd
            if x:
                out[k] = x
            else:
                del out[k]
    return _raw(out, c._den * fc, n)


def scale(r: Rational, c: TruncatedSeries) -> TruncatedSeries:
    f = _as_fraction(r)
    if not f:
        return TruncatedSeries.zero(c.degree)
    p, q = f.numerator, f.denominator
    return _raw({k: v * p for k, v in c._num.items()}, c._den * q, c.degree)


# ----------------------------------------------------------------------------
# shuffle algebra


def _shuffle(c: TruncatedSeries, d: TruncatedSeries, n: int) -> TruncatedSeries:
    if not c._num or not d._num:
        return _raw({}, 1, n)
    num = _backend.shuffle_numerators(c._num, d._num, n)
    return _raw(num, c._den * d._den, n)


def shuffle(c: TruncatedSeries, d: TruncatedSeries) -> TruncatedSeries:
    """Shuffle product truncated at the smaller of the two degrees."""
    return _shuffle(c, d, min(c.degree, d.degree))


def shuffle_power(c: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        raise ValueError("shuffle powers are defined for k >= 0")
    acc = TruncatedSeries.one(c.degree)
    for _ in range(k):
        acc = _shuffle(c, acc, c.degree)
    return acc


def shuffle_inverse(c: TruncatedSeries) -> TruncatedSeries:
    """Inverse in the shuffle unit group.

    For ``c(1) = 1`` this is the geometric series in the proper series
    ``1 - c``, which terminates after ``degree`` terms.  Other units are
    rescaled into that case first.
    """
    a = c.constant_term
    if a == 0:
        raise NotAUnitError("shuffle inverse needs a non-zero constant term")
    if a != 1:
        return scale(1 / a, shuffle_inverse(scale(1 / a, c)))
    n = c.degree
    p = TruncatedSeries.one(n) - c
    acc = TruncatedSeries.one(n)
    term = acc
    for _ in range(n):
        term = _shuffle(term, p, n)
        if not term:
            break
        acc = add(acc, term)
    return acc


# ----------------------------------------------------------------------------
# composition products
#
# Both recursions run on left quotients rather than on single words: writing
# c = c(1) + x0 c0 + x1 c1 turns the word rules into one series-level step,
# so every distinct prefix of the support is visited once and the shuffles
# happen on whole series.


def _split(c: TruncatedSeries, n: int) -> tuple[int, TruncatedSeries, TruncatedSeries]:
    """Constant numerator and the left quotients by x0 and x1, at degree n-1."""
    q: tuple[dict[int, int], dict[int, int]] = ({}, {})
    const = 0
    limit = 1 << (n + 1)
    for k, v in c._num.items():
        if k == 1:
            const = v
        elif k < limit:
            m = k.bit_length() - 2
            top = 1 << m
            q[(k >> m) & 1][(k & (top - 1)) | top] = v
    return const, _raw(q[0], c._den, n - 1), _raw(q[1], c._den, n - 1)


def _prefixed(letter: int, s: TruncatedSeries, n: int) -> dict[int, int]:
    return {prefix_letter(letter, k): v for k, v in s._num.items()}


def _assemble(const: int, den: int, parts: dict[int, TruncatedSeries], n: int) -> TruncatedSeries:
    """const/den + sum over letters of x_letter * parts[letter]."""
    acc = _raw({1: const} if const else {}, den, n)
    for letter, s in parts.items():
        if s._num:
            acc = add(acc, _raw(_prefixed(letter, s, n), s._den, n))
    return acc


def _compose(c: TruncatedSeries, d: TruncatedSeries, n: int) -> TruncatedSeries:
    const, q0, q1 = _split(c, n)
    if n == 0:
        return _raw({1: const} if const else {}, c._den, 0)
    inner = None
    if q0._num:
        inner = _compose(q0, d, n - 1)
    if q1._num:
        t = _shuffle(d, _compose(q1, d, n - 1), n - 1)
        inner = t if inner is None else add(inner, t)
    return _assemble(const, c._den, {0: inner} if inner is not None else {}, n)


def compose(c: TruncatedSeries, d: TruncatedSeries) -> TruncatedSeries:
    """Composition product ``c o d``: the series of F_c fed by the output of F_d."""
    n = min(c.degree, d.degree)
    return _compose(c, d.restrict(n), n)


def _mixed(c: TruncatedSeries, d1: TruncatedSeries, d2: TruncatedSeries, n: int) -> TruncatedSeries:
    const, q0, q1 = _split(c, n)
    if n == 0:
        return _raw({1: const} if const else {}, c._den, 0)
    parts: dict[int, TruncatedSeries] = {}
    if q0._num:
        parts[0] = _mixed(q0, d1, d2, n - 1)
    if q1._num:
        m = _mixed(q1, d1, d2, n - 1)
        parts[1] = _shuffle(d1, m, n - 1)
        t = _shuffle(d2, m, n - 1)
        parts[0] = add(parts[0], t) if 0 in parts else t
    return _assemble(const, c._den, parts, n)


def mixed_compose(c: TruncatedSeries, D: PairLike) -> TruncatedSeries:
    """Mixed composition ``c`` with an affine pair ``D = (d1, d2)``."""
    n = min(c.degree, D.c1.degree, D.c2.degree)
    return _mixed(c, D.c1.restrict(n), D.c2.restrict(n), n)


def quotient_equal(c: TruncatedSeries, d: TruncatedSeries) -> bool:
    """True when ``c - d`` is supported on powers of x0 only."""
    diff = c - d
    return all(is_drift_word(k) for k in diff._num)
