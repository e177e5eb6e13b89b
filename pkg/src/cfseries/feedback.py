"""Affine pairs and the two group structures on them.

An :class:`AffinePair` ``(c1, c2)`` with ``c1(1) = 1`` stands for the affine
operator ``u -> u F_{c1}[u] + F_{c2}[u]``.  Pairs carry two group laws:

* ``odot``, the semidirect product of the shuffle group with the additive
  group of series;
* ``star``, the affine feedback group, built from ``odot`` and the
  componentwise mixed composition ``triangle``.

``affine_feedback`` closes the loop around a plant series, and is a right
action of the ``odot`` group.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from cfseries.series import (
    TruncatedSeries,
    add,
    compose,
    mixed_compose,
    shuffle,
    shuffle_inverse,
)

__all__ = [
    "AffinePair",
    "TangentPair",
    "StarInverseError",
    "odot",
    "odot_inverse",
    "bar_compose",
    "triangle",
    "star",
    "star_inverse",
    "fixed_point_star_inverse",
    "affine_feedback",
    "commutator_odot",
    "commutator_closed_form",
    "lie_bracket",
    "residual_loop",
    "set_debug",
]

_debug = os.environ.get("CFSERIES_DEBUG", "") not in ("", "0")


def set_debug(flag: bool) -> None:
    """Toggle the redundant cross-checks inside ``star``."""
    global _debug
    _debug = bool(flag)


class StarInverseError(ArithmeticError):
    pass


@dataclass(frozen=True)
class AffinePair:
    """Element ``c1 e1 + c2 e2`` of G; ``c1`` is the multiplicative channel."""

    c1: TruncatedSeries
    c2: TruncatedSeries

    def __post_init__(self):
        if self.c1.degree != self.c2.degree:
            n = min(self.c1.degree, self.c2.degree)
            object.__setattr__(self, "c1", self.c1.restrict(n))
            object.__setattr__(self, "c2", self.c2.restrict(n))
        if self.c1.constant_term != 1:
            raise ValueError(
                "an affine pair needs c1(1) = 1 (membership in G), "
                f"got c1(1) = {self.c1.constant_term}"
            )

    @property
    def degree(self) -> int:
        return self.c1.degree

    @classmethod
    def identity(cls, degree: int) -> "AffinePair":
        return cls(TruncatedSeries.one(degree), TruncatedSeries.zero(degree))

    @classmethod
    def additive(cls, d: TruncatedSeries) -> "AffinePair":
        """The pure additive loop ``(1, d)``."""
        return cls(TruncatedSeries.one(d.degree), d)

    @classmethod
    def multiplicative(cls, m: TruncatedSeries) -> "AffinePair":
        """The pure multiplicative loop ``(m, 0)``."""
        return cls(m, TruncatedSeries.zero(m.degree))

    @classmethod
    def parse(cls, e1: str, e2: str, degree: int) -> "AffinePair":
        return cls(TruncatedSeries.parse(e1, degree), TruncatedSeries.parse(e2, degree))

    def is_identity(self) -> bool:
        return self == AffinePair.identity(self.degree)

    def restrict(self, degree: int) -> "AffinePair":
        return AffinePair(self.c1.restrict(degree), self.c2.restrict(degree))

    def __iter__(self):
        yield self.c1
        yield self.c2

    def __repr__(self) -> str:
        return f"AffinePair(({self.c1}), ({self.c2}), degree={self.degree})"


@dataclass(frozen=True)
class TangentPair:
    """Lie algebra element: ``t1`` proper (shuffle direction), ``t2`` additive."""

    t1: TruncatedSeries
    t2: TruncatedSeries

    def __post_init__(self):
        if not self.t1.is_proper():
            raise ValueError("the e1 component of a tangent vector must be proper")

    @property
    def degree(self) -> int:
        return min(self.t1.degree, self.t2.degree)

    def __add__(self, other: "TangentPair") -> "TangentPair":
        return TangentPair(self.t1 + other.t1, self.t2 + other.t2)

    def __rmul__(self, r) -> "TangentPair":
        return TangentPair(r * self.t1, r * self.t2)

    def __neg__(self) -> "TangentPair":
        return TangentPair(-self.t1, -self.t2)


def _pair(c1: TruncatedSeries, c2: TruncatedSeries) -> AffinePair:
    return AffinePair(c1, c2)


def odot(C: AffinePair, D: AffinePair) -> AffinePair:
    """``(c1 sh d1, c2 + d2 sh c1)``."""
    return _pair(shuffle(C.c1, D.c1), add(C.c2, shuffle(D.c2, C.c1)))


def odot_inverse(C: AffinePair) -> AffinePair:
    inv = shuffle_inverse(C.c1)
    return _pair(inv, -shuffle(inv, C.c2))


def bar_compose(D: AffinePair, c: TruncatedSeries) -> AffinePair:
    """Componentwise composition ``(d1 o c, d2 o c)``."""
    return _pair(compose(D.c1, c), compose(D.c2, c))


def triangle(C: AffinePair, D: AffinePair) -> AffinePair:
    """Componentwise mixed composition of ``C`` with ``D``."""
    return _pair(mixed_compose(C.c1, D), mixed_compose(C.c2, D))


def star(C: AffinePair, D: AffinePair) -> AffinePair:
    """Affine feedback group product ``(C triangle D) odot D``."""
    m1 = mixed_compose(C.c1, D)
    out = _pair(shuffle(m1, D.c1), add(shuffle(m1, D.c2), mixed_compose(C.c2, D)))
    if _debug:
        check = odot(triangle(C, D), D)
        if check != out:
            raise AssertionError("coordinate and compositional star products disagree")
    return out


def fixed_point_star_inverse(C: AffinePair) -> tuple[AffinePair, int]:
    """Solve ``C star X = e`` by iterating ``X <- (C triangle X)^{odot -1}``.

    The degree-n part of ``C triangle X`` only sees ``X`` below degree n, so
    each sweep fixes one more degree and ``degree + 1`` sweeps are enough.
    Returns the inverse and the number of sweeps that changed the iterate.
    """
    n = C.degree
    x = AffinePair.identity(n)
    for sweep in range(n + 2):
        nxt = odot_inverse(triangle(C, x))
        if nxt == x:
            return x, sweep
        x = nxt
    raise StarInverseError(f"fixed point did not settle within {n + 1} sweeps")


def star_inverse(C: AffinePair) -> AffinePair:
    x, _ = fixed_point_star_inverse(C)
    e = AffinePair.identity(C.degree)
    if star(C, x) != e or star(x, C) != e:
        raise StarInverseError("star inverse failed its two-sided check")
    return x


def affine_feedback(c: TruncatedSeries, D: AffinePair) -> TruncatedSeries:
    """Closed-loop series of plant ``c`` under affine feedback ``D``."""
    n = min(c.degree, D.degree)
    c = c.restrict(n)
    D = D.restrict(n)
    return mixed_compose(c, star_inverse(bar_compose(odot_inverse(D), c)))


def commutator_odot(C: AffinePair, D: AffinePair) -> AffinePair:
    """Group commutator ``C D C^-1 D^-1`` in (G, odot)."""
    return odot(odot(odot(C, D), odot_inverse(C)), odot_inverse(D))


def commutator_closed_form(b: TruncatedSeries, d: TruncatedSeries) -> AffinePair:
    """``[(b, 0), (1, d)]`` without group arithmetic: ``(1, d sh (b - 1))``.

    Swapping the arguments inverts the commutator and gives
    ``(1, d sh (1 - b))``, the residual additive loop of ``residual_loop``.
    """
    n = min(b.degree, d.degree)
    return AffinePair.additive(shuffle(d, b - 1).restrict(n))


def lie_bracket(a: TangentPair, b: TangentPair) -> TangentPair:
    """``[(t1, t2), (s1, s2)] = (0, t1 sh s2 - s1 sh t2)``."""
    n = min(a.degree, b.degree)
    return TangentPair(
        TruncatedSeries.zero(n),
        shuffle(a.t1, b.t2) - shuffle(b.t1, a.t2),
    )


def residual_loop(
    c: TruncatedSeries, d1: TruncatedSeries, d2: TruncatedSeries
) -> tuple[TruncatedSeries, AffinePair]:
    """Four nested loops: add ``d2``, multiply by ``d1``, add ``-d2``, multiply by ``d1^-1``.

    Returns the closed loop and the single additive controller
    ``(1, d2 sh (1 - d1))`` it collapses to.  Both routes are computed and
    must agree exactly.
    """
    if d1.constant_term != 1:
        raise ValueError("the multiplicative loop needs d1(1) = 1")
    n = min(c.degree, d1.degree, d2.degree)
    c, d1, d2 = c.restrict(n), d1.restrict(n), d2.restrict(n)
    omega = c
    for loop in (
        AffinePair.additive(d2),
        AffinePair.multiplicative(d1),
        AffinePair.additive(-d2),
        AffinePair.multiplicative(shuffle_inverse(d1)),
    ):
        omega = affine_feedback(omega, loop)
    net = AffinePair.additive(shuffle(d2, 1 - d1))
    direct = affine_feedback(c, net)
    if direct != omega:
        raise AssertionError("nested loops and the net additive loop disagree")
    return omega, net

