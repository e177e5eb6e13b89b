"""Seeded property sweep over the algebraic identities.

Every identity is a function ``check(rng, degree)`` that draws its own random
instance and returns ``None`` on success or a textual counterexample.  Each
(identity, instance) pair gets its own RNG stream, so serial and parallel
runs produce the same report.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from cfseries import sampling as rs
from cfseries.feedback import (
    AffinePair,
    TangentPair,
    affine_feedback,
    bar_compose,
    commutator_closed_form,
    commutator_odot,
    fixed_point_star_inverse,
    lie_bracket,
    odot,
    odot_inverse,
    residual_loop,
    star,
    star_inverse,
    triangle,
)
from cfseries.series import (
    TruncatedSeries,
    compose,
    mixed_compose,
    quotient_equal,
    shuffle,
    shuffle_inverse,
    shuffle_power,
)
from cfseries.textio import format_pair, format_series
from cfseries.words import X1, Word

__all__ = [
    "IDENTITIES",
    "IdentityResult",
    "VerificationReport",
    "verify_group_laws",
    "bilinear_coefficients",
]

Check = Callable[[random.Random, int], Optional[str]]


def _show(**objs) -> str:
    out = []
    for name, obj in objs.items():
        if isinstance(obj, TruncatedSeries):
            out.append(f"[{name}]\n" + format_series(obj))
        elif isinstance(obj, (AffinePair, TangentPair)):
            body = format_pair(obj).replace("[e1]", f"[{name}.e1]").replace("[e2]", f"[{name}.e2]")
            out.append(body)
        else:
            out.append(f"# {name} = {obj}\n")
    return "".join(out)


def _expect(ok: bool, **objs) -> Optional[str]:
    return None if ok else _show(**objs)


# --- series identities ------------------------------------------------------


def _shuffle_commutative(rng, n):
    c, d = rs.random_series(rng, n), rs.random_series(rng, n)
    return _expect(shuffle(c, d) == shuffle(d, c), c=c, d=d)


def _shuffle_associative(rng, n):
    a, b, c = (rs.random_series(rng, n) for _ in range(3))
    return _expect(shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c)), a=a, b=b, c=c)


def _shuffle_bilinear(rng, n):
    c, d, e = (rs.random_series(rng, n) for _ in range(3))
    p, q = Fraction(rng.randint(-4, 4), rng.randint(1, 3)), Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    lhs = shuffle(p * c + q * d, e)
    ok = lhs == p * shuffle(c, e) + q * shuffle(d, e) and shuffle(e, p * c + q * d) == lhs
    return _expect(ok, c=c, d=d, e=e, p=p, q=q)


def _shuffle_unit(rng, n):
    c = rs.random_series(rng, n)
    return _expect(shuffle(TruncatedSeries.one(n), c) == c, c=c)


def _truncation_exact(op):
    def check(rng, n):
        if n == 0:
            return None
        c = rs.random_series(rng, n)
        if op is mixed_compose:
            d = rs.random_pair(rng, n)
            lhs = op(c, d).restrict(n - 1)
            rhs = op(c.restrict(n - 1), d.restrict(n - 1))
        else:
            d = rs.random_series(rng, n)
            lhs = op(c, d).restrict(n - 1)
            rhs = op(c.restrict(n - 1), d.restrict(n - 1))
        return _expect(lhs == rhs, c=c, d=d)

    return check


def _shuffle_inverse(rng, n):
    c = rs.random_group_element(rng, n)
    if rng.random() < 0.3:
        c = Fraction(rng.choice((-3, -2, 2, 3)), rng.choice((1, 2))) * c
    inv = shuffle_inverse(c)
    one = TruncatedSeries.one(n)
    return _expect(shuffle(c, inv) == one and shuffle(inv, c) == one, c=c)


def _shuffle_power_factorial(rng, n):
    k = rng.randint(0, n)
    x1 = TruncatedSeries.word(X1, n)
    expected = TruncatedSeries.word(Word((1 << (k + 1)) - 1), n, math.factorial(k))
    return _expect(shuffle_power(x1, k) == expected, k=k)


def _compose_over_shuffle(rng, n):
    c, d, e = (rs.random_series(rng, n) for _ in range(3))
    return _expect(compose(shuffle(c, d), e) == shuffle(compose(c, e), compose(d, e)), c=c, d=d, e=e)


def _mixed_over_shuffle(rng, n):
    c, d = rs.random_series(rng, n), rs.random_series(rng, n)
    z = rs.random_pair(rng, n)
    lhs = mixed_compose(shuffle(c, d), z)
    return _expect(lhs == shuffle(mixed_compose(c, z), mixed_compose(d, z)), c=c, d=d, z=z)


def _mixed_associativity(rng, n):
    h, c = rs.random_series(rng, n), rs.random_series(rng, n)
    d = rs.random_pair(rng, n)
    return _expect(compose(h, mixed_compose(c, d)) == mixed_compose(compose(h, c), d), h=h, c=c, d=d)


def _mixed_effective_words(rng, n):
    # an x1-word of length m only sees d through degree n - m
    if n < 2:
        return None
    m = rng.randint(1, n - 1)
    while True:
        w = rs.random_word(rng, m, m)
        if 1 in w.letters:
            break
    d = rs.random_nonidentity_pair(rng, n, max_len=n - m)
    eta = TruncatedSeries.word(w, n)
    return _expect(mixed_compose(eta, d) != eta, eta=eta, d=d)


def _quotient_well_defined(rng, n):
    c = rs.random_series(rng, n)
    drift = TruncatedSeries(
        [(Fraction(rng.randint(-3, 3), rng.randint(1, 3)), Word(1 << k)) for k in range(n + 1)], n
    )
    h = c + drift
    d = rs.random_pair(rng, n)
    ok = quotient_equal(h, c) and quotient_equal(mixed_compose(h, d), mixed_compose(c, d))
    return _expect(ok, c=c, h=h, d=d)


def _quotient_fixed_points(rng, n):
    # [x1] is moved by every visible d != e except (1, drift): x1 . (1, delta) = x1 + x0 delta
    if n < 2:
        return None
    d = rs.random_nonidentity_pair(rng, n, max_len=n - 1)
    if rng.random() < 0.25:
        drift = TruncatedSeries([(rs._coef(rng), Word(1 << k)) for k in range(n)], n)
        d = AffinePair.additive(drift)
    x1 = TruncatedSeries.word(X1, n)
    out = mixed_compose(x1, d)
    seen = d.restrict(n - 1)
    exceptional = seen.c1 == TruncatedSeries.one(n - 1) and quotient_equal(seen.c2, TruncatedSeries.zero(n - 1))
    ok = (out != x1 or seen.is_identity()) and quotient_equal(out, x1) == exceptional
    return _expect(ok, d=d)


# --- group identities -------------------------------------------------------


def _odot_associative(rng, n):
    a, b, c = (rs.random_pair(rng, n) for _ in range(3))
    return _expect(odot(odot(a, b), c) == odot(a, odot(b, c)), a=a, b=b, c=c)


def _odot_identity(rng, n):
    C = rs.random_pair(rng, n)
    e = AffinePair.identity(n)
    return _expect(odot(C, e) == C and odot(e, C) == C, C=C)


def _odot_inverse(rng, n):
    C = rs.random_pair(rng, n)
    inv = odot_inverse(C)
    e = AffinePair.identity(n)
    return _expect(odot(C, inv) == e and odot(inv, C) == e, C=C)


def _odot_projection(rng, n):
    C, D = rs.random_pair(rng, n), rs.random_pair(rng, n)
    return _expect(odot(C, D).c1 == shuffle(C.c1, D.c1), C=C, D=D)


def _additive_normal(rng, n):
    C = rs.random_pair(rng, n)
    y = AffinePair.additive(rs.random_series(rng, n))
    conj = odot(odot(C, y), odot_inverse(C))
    return _expect(conj.c1 == TruncatedSeries.one(n), C=C, y=y)


def _triangle_over_odot(rng, n):
    x, y, d = (rs.random_pair(rng, n) for _ in range(3))
    ok = triangle(odot(x, y), d) == odot(triangle(x, d), triangle(y, d))
    ok = ok and triangle(AffinePair.identity(n), d) == AffinePair.identity(n)
    return _expect(ok, x=x, y=y, d=d)


def _bar_compose_over_odot(rng, n):
    x, y = rs.random_pair(rng, n), rs.random_pair(rng, n)
    c = rs.random_series(rng, n)
    ok = bar_compose(odot(x, y), c) == odot(bar_compose(x, c), bar_compose(y, c))
    ok = ok and bar_compose(AffinePair.identity(n), c) == AffinePair.identity(n)
    return _expect(ok, x=x, y=y, c=c)


def _interplay(rng, n):
    d, y = rs.random_pair(rng, n), rs.random_pair(rng, n)
    c = rs.random_series(rng, n)
    return _expect(bar_compose(d, mixed_compose(c, y)) == triangle(bar_compose(d, c), y), d=d, y=y, c=c)


def _star_associative(rng, n):
    a, b, c = (rs.random_pair(rng, n) for _ in range(3))
    return _expect(star(star(a, b), c) == star(a, star(b, c)), a=a, b=b, c=c)


def _star_identity(rng, n):
    C = rs.random_pair(rng, n)
    e = AffinePair.identity(n)
    return _expect(star(C, e) == C and star(e, C) == C, C=C)


def _star_inverse(rng, n):
    C = rs.random_pair(rng, n)
    x, sweeps = fixed_point_star_inverse(C)
    e = AffinePair.identity(n)
    ok = star(C, x) == e and star(x, C) == e and sweeps <= n + 1
    return _expect(ok, C=C, sweeps=sweeps)


def _star_inverse_antihomomorphism(rng, n):
    a, b = rs.random_pair(rng, n), rs.random_pair(rng, n)
    ok = star(star_inverse(a), star_inverse(b)) == star_inverse(star(b, a))
    return _expect(ok, a=a, b=b)


def _star_coordinate_form(rng, n):
    C, D = rs.random_pair(rng, n), rs.random_pair(rng, n)
    return _expect(star(C, D) == odot(triangle(C, D), D), C=C, D=D)


def _mixed_right_action(rng, n):
    c = rs.random_series(rng, n)
    x, y = rs.random_pair(rng, n), rs.random_pair(rng, n)
    ok = mixed_compose(mixed_compose(c, x), y) == mixed_compose(c, star(x, y))
    ok = ok and mixed_compose(c, AffinePair.identity(n)) == c
    return _expect(ok, c=c, x=x, y=y)


def _triangle_right_action(rng, n):
    x, y, z = (rs.random_pair(rng, n) for _ in range(3))
    ok = triangle(triangle(x, y), z) == triangle(x, star(y, z))
    ok = ok and triangle(x, AffinePair.identity(n)) == x
    return _expect(ok, x=x, y=y, z=z)


def _feedback_right_action(rng, n):
    c = rs.random_series(rng, n)
    x, y = rs.random_pair(rng, n), rs.random_pair(rng, n)
    ok = affine_feedback(affine_feedback(c, x), y) == affine_feedback(c, odot(x, y))
    return _expect(ok, c=c, x=x, y=y)


def _feedback_identity(rng, n):
    c = rs.random_series(rng, n)
    return _expect(affine_feedback(c, AffinePair.identity(n)) == c, c=c)


def _commutator_containment(rng, n):
    m = rs.random_group_element(rng, n)
    d = rs.random_series(rng, n)
    com = commutator_odot(AffinePair.multiplicative(m), AffinePair.additive(d))
    return _expect(com.c1 == TruncatedSeries.one(n), m=m, d=d)


def _commutator_closed_form(rng, n):
    b = rs.random_group_element(rng, n)
    d = rs.random_series(rng, n)
    x, y = AffinePair.multiplicative(b), AffinePair.additive(d)
    ok = commutator_odot(x, y) == commutator_closed_form(b, d)
    ok = ok and commutator_odot(y, x) == AffinePair.additive(shuffle(d, 1 - b))
    return _expect(ok, b=b, d=d)


def _bracket_bilinear(rng, n):
    a, b, c = (rs.random_tangent(rng, n) for _ in range(3))
    p = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    lhs = lie_bracket(p * a + c, b)
    rhs = lie_bracket(a, b)
    rhs = p * rhs + lie_bracket(c, b)
    return _expect(lhs == rhs, a=a, b=b, c=c, p=p)


def _bracket_alternating(rng, n):
    a, b = rs.random_tangent(rng, n), rs.random_tangent(rng, n)
    zero = TruncatedSeries.zero(n)
    ok = lie_bracket(a, a) == TangentPair(zero, zero) and lie_bracket(a, b) == -lie_bracket(b, a)
    return _expect(ok, a=a, b=b)


def _bracket_jacobi(rng, n):
    a, b, c = (rs.random_tangent(rng, n) for _ in range(3))
    total = (
        lie_bracket(a, lie_bracket(b, c))
        + lie_bracket(b, lie_bracket(c, a))
        + lie_bracket(c, lie_bracket(a, b))
    )
    zero = TruncatedSeries.zero(n)
    return _expect(total == TangentPair(zero, zero), a=a, b=b, c=c)


def _lagrange_weights(k: int) -> list[list[Fraction]]:
    """``W[i][a]``: coefficient of ``x^i`` in the Lagrange basis polynomial of node ``a`` on 0..k."""
    W = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
    for a in range(k + 1):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for b in range(k + 1):
            if b == a:
                continue
            poly = [Fraction(0)] + poly
            for i in range(len(poly) - 1):
                poly[i] -= b * poly[i + 1]
            denom *= a - b
        for i in range(k + 1):
            W[i][a] = poly[i] / denom
    return W


def bilinear_coefficients(family, ds: int, dt: int):
    """Exact polynomial coefficients of a pair-valued family ``(s, t) -> (p1, p2)``.

    ``family`` must be polynomial of degree <= ds in ``s`` and <= dt in
    ``t``; the coefficients are read off by Lagrange interpolation on the
    integer nodes and the degree bound is confirmed at one extra node.
    Returns ``coef[i][j] = (series_1, series_2)`` for ``s^i t^j``.
    """
    vals = {(a, b): family(a, b) for a in range(ds + 1) for b in range(dt + 1)}
    Ws, Wt = _lagrange_weights(ds), _lagrange_weights(dt)
    probe = next(iter(vals.values()))
    n = min(probe[0].degree, probe[1].degree)
    coef = []
    for i in range(ds + 1):
        row = []
        for j in range(dt + 1):
            acc1, acc2 = TruncatedSeries.zero(n), TruncatedSeries.zero(n)
            for (a, b), (p1, p2) in vals.items():
                w = Ws[i][a] * Wt[j][b]
                if w:
                    acc1 = acc1 + w * p1
                    acc2 = acc2 + w * p2
            row.append((acc1, acc2))
        coef.append(row)
    s, t = ds + 1, dt + 1
    p1, p2 = family(s, t)
    q1, q2 = TruncatedSeries.zero(n), TruncatedSeries.zero(n)
    for i in range(ds + 1):
        for j in range(dt + 1):
            q1 = q1 + (s**i * t**j) * coef[i][j][0]
            q2 = q2 + (s**i * t**j) * coef[i][j][1]
    if (q1, q2) != (p1, p2):
        raise ValueError("family exceeds the stated polynomial degree bound")
    return coef


def commutator_family(t1: TruncatedSeries, t2: TruncatedSeries):
    """``(s, t) -> [(1 + s t1, 0), (1, t t2)] - e`` as a pair of series."""
    n = min(t1.degree, t2.degree)

    def family(s, t):
        com = commutator_odot(
            AffinePair.multiplicative(1 + s * t1), AffinePair.additive(t * t2)
        )
        return com.c1 - 1, com.c2

    return family, n


def _bracket_linearization(rng, n):
    a = rs.random_tangent(rng, n)
    t1, t2 = a.t1, a.t2
    family, _ = commutator_family(t1, t2)
    # t1 is proper, so powers of s die past the degree; the family is affine in t
    coef = bilinear_coefficients(family, max(n, 2), 2)
    zero = TruncatedSeries.zero(n)
    br = lie_bracket(TangentPair(t1, zero), TangentPair(zero, t2))
    ok = coef[1][1] == (br.t1, br.t2) and coef[1][1][1] == shuffle(t1, t2)
    for i, j in ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2)):
        ok = ok and coef[i][j] == (zero, zero)
    return _expect(ok, t1=t1, t2=t2)


def _stabilizer(rng, n):
    c = AffinePair.parse("1 + x0", "x0", n)
    d = rs.random_pair(rng, n)
    return _expect(triangle(c, d) == c, d=d)


def _residual_loop(rng, n):
    c = rs.random_series(rng, n)
    d1 = rs.random_group_element(rng, n)
    d2 = rs.random_series(rng, n)
    try:
        residual_loop(c, d1, d2)
    except AssertionError:
        return _show(c=c, d1=d1, d2=d2)
    return None


IDENTITIES: list[tuple[str, Check]] = [
    ("shuffle_commutative", _shuffle_commutative),
    ("shuffle_associative", _shuffle_associative),
    ("shuffle_bilinear", _shuffle_bilinear),
    ("shuffle_unit", _shuffle_unit),
    ("truncation_exact_shuffle", _truncation_exact(shuffle)),
    ("truncation_exact_compose", _truncation_exact(compose)),
    ("truncation_exact_mixed_compose", _truncation_exact(mixed_compose)),
    ("shuffle_inverse", _shuffle_inverse),
    ("shuffle_power_factorial", _shuffle_power_factorial),
    ("compose_distributes_over_shuffle", _compose_over_shuffle),
    ("mixed_compose_distributes_over_shuffle", _mixed_over_shuffle),
    ("mixed_associativity", _mixed_associativity),
    ("mixed_compose_effective", _mixed_effective_words),
    ("quotient_well_defined", _quotient_well_defined),
    ("quotient_fixed_points", _quotient_fixed_points),
    ("odot_associative", _odot_associative),
    ("odot_identity", _odot_identity),
    ("odot_inverse", _odot_inverse),
    ("odot_projection_homomorphism", _odot_projection),
    ("additive_subgroup_normal", _additive_normal),
    ("triangle_distributes_over_odot", _triangle_over_odot),
    ("bar_compose_distributes_over_odot", _bar_compose_over_odot),
    ("bar_compose_triangle_interplay", _interplay),
    ("star_associative", _star_associative),
    ("star_identity", _star_identity),
    ("star_inverse", _star_inverse),
    ("star_inverse_antihomomorphism", _star_inverse_antihomomorphism),
    ("star_coordinate_form", _star_coordinate_form),
    ("mixed_compose_right_action", _mixed_right_action),
    ("triangle_right_action", _triangle_right_action),
    ("feedback_right_action", _feedback_right_action),
    ("feedback_identity", _feedback_identity),
    ("commutator_containment", _commutator_containment),
    ("commutator_closed_form", _commutator_closed_form),
    ("lie_bracket_bilinear", _bracket_bilinear),
    ("lie_bracket_alternating", _bracket_alternating),
    ("lie_bracket_jacobi", _bracket_jacobi),
    ("lie_bracket_linearization", _bracket_linearization),
    ("stabilizer_witness", _stabilizer),
    ("residual_loop", _residual_loop),
]


@dataclass
class IdentityResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[str] = None


@dataclass
class VerificationReport:
    degree: int
    budget: int
    seed: int
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def to_text(self, counterexample_dir: str | Path | None = None) -> str:
        """``IDENTITY <name> PASS|FAIL [counterexample file]`` per line.

        With ``counterexample_dir`` set, each failing instance is written to
        ``<dir>/<name>.txt`` and that path ends the FAIL line.
        """
        lines = []
        for r in self.results:
            line = f"IDENTITY {r.name} {'PASS' if r.passed else 'FAIL'}"
            if not r.passed and counterexample_dir is not None and r.counterexample:
                path = Path(counterexample_dir) / f"{r.name}.txt"
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(r.counterexample, encoding="utf-8")
                line += f" {path}"
            lines.append(line)
        return "\n".join(lines) + ("\n" if lines else "")


def _run_identity(args: tuple[str, int, int, int]) -> IdentityResult:
    name, budget, degree, seed = args
    check = dict(IDENTITIES)[name]
    for i in range(budget):
        found = check(rs.instance_rng(seed, name, i), degree)
        if found is not None:
            return IdentityResult(name, False, i + 1, f"# instance {i}\n" + found)
    return IdentityResult(name, True, budget)


def verify_group_laws(
    budget: int, degree: int, seed: int, *, workers: int = 1, only: list[str] | None = None
) -> VerificationReport:
    """Run every identity on ``budget`` seeded random instances at ``degree``.

    Stops at the first failing instance of an identity and keeps it as the
    counterexample.  A zero budget yields an empty report.
    """
    report = VerificationReport(degree, budget, seed)
    if budget <= 0:
        return report
    names = [name for name, _ in IDENTITIES if only is None or name in only]
    jobs = [(name, budget, degree, seed) for name in names]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            report.results = list(ex.map(_run_identity, jobs))
    else:
        report.results = [_run_identity(j) for j in jobs]
    return report
