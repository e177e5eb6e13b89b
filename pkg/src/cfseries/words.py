"""Words over the two-letter alphabet {x0, x1}.

A word is packed into a single integer key: a sentinel bit marks the length
and the bits below it hold the letters, most significant letter first.  The
empty word is ``1``, ``x0`` is ``0b10``, ``x1`` is ``0b11``, ``x0x1`` is
``0b101`` and so on.  Integer order on keys is exactly graded-lexicographic
order with ``x0 < x1``, which is what the series serializer relies on.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

__all__ = [
    "EMPTY",
    "X0",
    "X1",
    "Word",
    "concat",
    "enumerate_words",
    "get_max_degree",
    "set_max_degree",
    "word_length",
    "prefix_letter",
    "split_first",
    "is_drift_word",
]

DEFAULT_MAX_DEGREE = 16
_max_degree = DEFAULT_MAX_DEGREE
# keys must stay within a signed 64-bit word for the compiled kernels
_HARD_CAP = 30

_WORD_RE = re.compile(r"(?:x[01])+")


def get_max_degree() -> int:
    return _max_degree


def set_max_degree(n: int) -> None:
    """Change the library-wide truncation degree cap."""
    global _max_degree
    if not 0 <= n <= _HARD_CAP:
        raise ValueError(f"degree cap must lie in [0, {_HARD_CAP}], got {n}")
    _max_degree = int(n)


def check_degree(n: int) -> int:
    if n < 0:
        raise ValueError(f"truncation degree must be non-negative, got {n}")
    if n > _max_degree:
        raise ValueError(
            f"truncation degree {n} exceeds the configured cap {_max_degree}; "
            "raise it with cfseries.words.set_max_degree"
        )
    return int(n)


def word_length(key: int) -> int:
    return key.bit_length() - 1


def prefix_letter(letter: int, key: int) -> int:
    """Key of ``x_letter`` followed by the word ``key``."""
    n = key.bit_length() - 1
    return key + (1 << n) + (letter << n)


def split_first(key: int) -> tuple[int, int]:
    """Split a non-empty word into (first letter, remainder key)."""
    n = key.bit_length() - 1
    if n == 0:
        raise ValueError("the empty word has no first letter")
    top = 1 << (n - 1)
    return (key >> (n - 1)) & 1, (key & (top - 1)) | top


def is_drift_word(key: int) -> bool:
    """True for powers of x0, the empty word included."""
    n = key.bit_length() - 1
    return key == 1 << n


class Word(int):
    """An immutable word, stored as its packed integer key.

    >>> Word.parse("x0x1")
    Word('x0x1')
    >>> len(Word.parse("x1x1x0"))
    3
    """

    __slots__ = ()

    def __new__(cls, key: int = 1) -> "Word":
        key = int(key)
        if key < 1:
            raise ValueError(f"invalid word key {key}")
        return super().__new__(cls, key)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        key = 1
        for letter in letters:
            if letter not in (0, 1):
                raise ValueError(f"letter index must be 0 or 1, got {letter!r}")
            key = (key << 1) | letter
        return cls(key)

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text == "1":
            return EMPTY
        if not _WORD_RE.fullmatch(text):
            raise ValueError(f"malformed word {text!r}")
        return cls.from_letters(int(text[i]) for i in range(1, len(text), 2))

    @property
    def letters(self) -> tuple[int, ...]:
        n = len(self)
        return tuple((int(self) >> (n - 1 - i)) & 1 for i in range(n))

    def __len__(self) -> int:
        return int(self).bit_length() - 1

    def __str__(self) -> str:
        if int(self) == 1:
            return "1"
        return "".join(f"x{b}" for b in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


EMPTY = Word(1)
X0 = Word(0b10)
X1 = Word(0b11)


def concat(w: int, v: int) -> Word:
    """Catenation ``wv``."""
    lv = int(v).bit_length() - 1
    return Word((int(w) << lv) | (int(v) ^ (1 << lv)))


def enumerate_words(max_degree: int) -> list[Word]:
    """All words of length <= max_degree in graded-lexicographic order."""
    check_degree(max_degree)
    return [Word(k) for k in range(1, 1 << (max_degree + 1))]


def as_word(w: int | str | Sequence[int]) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    if isinstance(w, int):
        return Word(w)
    return Word.from_letters(w)
