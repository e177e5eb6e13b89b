"""Line-oriented text formats for series and affine pairs.

Series::

    # comment
    degree 3
    1 1
    -1/2 x0x1

Pairs wrap two series in ``[e1]`` and ``[e2]`` sections with equal degrees.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from cfseries.feedback import AffinePair, TangentPair
from cfseries.series import TruncatedSeries
from cfseries.words import Word

__all__ = [
    "FormatError",
    "format_series",
    "parse_series",
    "format_pair",
    "parse_pair",
    "parse_tangent",
    "format_tangent",
    "read_series_file",
    "read_pair_file",
    "read_tangent_file",
]

_RATIONAL_RE = re.compile(r"-?\d+(?:/\d+)?")
_DEGREE_RE = re.compile(r"degree\s+(\d+)")


class FormatError(ValueError):
    def __init__(self, msg: str, source: str = "<string>", line: int | None = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {msg}")
        self.source = source
        self.line = line


def format_series(c: TruncatedSeries) -> str:
    lines = [f"degree {c.degree}"]
    for w, r in c.items():
        lines.append(f"{r} {w}")
    return "\n".join(lines) + "\n"


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _parse_body(lines: list[tuple[int, str]], source: str) -> TruncatedSeries:
    if not lines:
        raise FormatError("missing 'degree N' header", source)
    no, first = lines[0]
    m = _DEGREE_RE.fullmatch(first)
    if m is None:
        raise FormatError(f"expected 'degree N' header, found {first!r}", source, no)
    degree = int(m.group(1))
    terms: list[tuple[Fraction, Word]] = []
    for no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<rational> <word>', found {line!r}", source, no)
        rat, word = parts
        if not _RATIONAL_RE.fullmatch(rat):
            raise FormatError(f"malformed rational {rat!r}", source, no)
        num, _, den = rat.partition("/")
        if den and int(den) == 0:
            raise FormatError(f"zero denominator in {rat!r}", source, no)
        try:
            w = Word.parse(word)
        except ValueError:
            raise FormatError(f"malformed word {word!r}", source, no) from None
        if len(w) > degree:
            raise FormatError(f"word {word} is longer than the declared degree {degree}", source, no)
        terms.append((Fraction(int(num), int(den) if den else 1), w))
    try:
        return TruncatedSeries(terms, degree)
    except ValueError as exc:
        raise FormatError(str(exc), source, lines[0][0]) from None


def parse_series(text: str, source: str = "<string>") -> TruncatedSeries:
    return _parse_body(list(_lines(text)), source)


def _sections(text: str, source: str) -> dict[str, list[tuple[int, str]]]:
    out: dict[str, list[tuple[int, str]]] = {}
    current = None
    for no, line in _lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current in out:
                raise FormatError(f"duplicate section [{current}]", source, no)
            out[current] = []
        elif current is None:
            raise FormatError(f"content before the first section: {line!r}", source, no)
        else:
            out[current].append((no, line))
    return out


def _parse_two(text: str, source: str) -> tuple[TruncatedSeries, TruncatedSeries]:
    secs = _sections(text, source)
    for name in ("e1", "e2"):
        if name not in secs:
            raise FormatError(f"missing [{name}] section", source)
    extra = set(secs) - {"e1", "e2"}
    if extra:
        raise FormatError(f"unexpected section(s) {sorted(extra)}", source)
    c1 = _parse_body(secs["e1"], source)
    c2 = _parse_body(secs["e2"], source)
    if c1.degree != c2.degree:
        raise FormatError(
            f"[e1] declares degree {c1.degree} but [e2] declares degree {c2.degree}", source
        )
    return c1, c2


def parse_pair(text: str, source: str = "<string>") -> AffinePair:
    c1, c2 = _parse_two(text, source)
    if c1.constant_term != 1:
        raise FormatError(
            f"[e1] constant term is {c1.constant_term}; an affine pair needs c1(1) = 1 (G membership)",
            source,
        )
    return AffinePair(c1, c2)


def parse_tangent(text: str, source: str = "<string>") -> TangentPair:
    t1, t2 = _parse_two(text, source)
    if not t1.is_proper():
        raise FormatError("[e1] of a tangent vector must be proper (zero constant term)", source)
    return TangentPair(t1, t2)


def format_pair(P: AffinePair | TangentPair) -> str:
    a, b = (P.c1, P.c2) if isinstance(P, AffinePair) else (P.t1, P.t2)
    return "[e1]\n" + format_series(a) + "[e2]\n" + format_series(b)


format_tangent = format_pair


def read_series_file(path: str | Path) -> TruncatedSeries:
    return parse_series(Path(path).read_text(encoding="utf-8"), str(path))


def read_pair_file(path: str | Path) -> AffinePair:
    return parse_pair(Path(path).read_text(encoding="utf-8"), str(path))


def read_tangent_file(path: str | Path) -> TangentPair:
    return parse_tangent(Path(path).read_text(encoding="utf-8"), str(path))
