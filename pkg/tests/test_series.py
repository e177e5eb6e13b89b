from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from cfseries.feedback import AffinePair
from cfseries.series import (
    NotAUnitError,
    TruncatedSeries,
    add,
    compose,
    make_series,
    mixed_compose,
    quotient_equal,
    scale,
    shuffle,
    shuffle_inverse,
    shuffle_power,
)
from cfseries.words import Word
from strategies import group_elements, pairs, series

S = TruncatedSeries.parse


# --- construction ------------------------------------------------------------


def test_make_series_examples():
    one = Word(1)
    assert make_series([(1, one), (1, one)], 3) == TruncatedSeries.constant(2, 3)
    assert make_series([(1, Word.parse("x1x1x1"))], 2) == TruncatedSeries.zero(2)
    x0 = Word.parse("x0")
    assert make_series([(Fraction(1, 2), x0), (Fraction(-1, 2), x0)], 4) == TruncatedSeries.zero(4)


def test_canonical_form():
    a = TruncatedSeries({"x0": Fraction(2, 4), "x1": Fraction(3, 6)}, 2)
    b = S("1/2*x0 + 1/2 x1", 2)
    assert a == b and hash(a) == hash(b)
    assert a.coefficient("x0") == Fraction(1, 2)
    assert a["x1x1"] == 0
    assert len(a) == 2 and a.support() == [Word.parse("x0"), Word.parse("x1")]
    assert not TruncatedSeries.zero(3)
    assert S("x1", 3) != S("x1", 4)


def test_predicates():
    assert S("x0 - x1", 2).is_proper()
    assert S("1 + x1", 2).in_shuffle_group()
    assert S("2 + x1", 2).is_unit() and not S("2 + x1", 2).in_shuffle_group()
    assert S("x1 + x0x0x1", 4).max_word_length() == 3


def test_parse_and_str():
    c = S("1 - 1/2*x0x1 + 3 x1", 3)
    assert str(c) == "1 + 3*x1 - 1/2*x0x1"
    assert S(str(c), 3) == c
    assert str(TruncatedSeries.zero(2)) == "0"
    for bad in ("1 +", "x2", "x1 x0", "3/0 x0", "2 */3"):
        with pytest.raises(ValueError):
            S(bad, 3)


def test_add_scale_examples():
    assert add(S("x0", 2), S("x1", 2)) == S("x0 + x1", 2)
    c = S("1 + x0 - 2*x1x0", 3)
    assert scale(0, c) == TruncatedSeries.zero(3)
    assert add(c, scale(-1, c)) == TruncatedSeries.zero(3)
    assert add(S("x1x1", 2), S("x1", 1)) == S("x1", 1)


# --- shuffle -----------------------------------------------------------------


def test_shuffle_examples():
    assert shuffle(S("x1", 3), S("x1", 3)) == S("2*x1x1", 3)
    assert shuffle(S("x0", 3), S("x1", 3)) == S("x0x1 + x1x0", 3)
    c = S("1 - x0 + 1/3 x1x0x1", 3)
    assert shuffle(TruncatedSeries.one(3), c) == c


def test_shuffle_frozen():
    c = S("x1 - 1/2 x0x1", 4)
    d = S("1 + 2 x1", 4)
    assert shuffle(c, d) == S("x1 - 1/2 x0x1 + 4 x1x1 - 2 x0x1x1 - x1x0x1", 4)


def test_shuffle_power_examples():
    x1 = S("x1", 5)
    assert shuffle_power(x1, 3) == S("6 x1x1x1", 5)
    assert shuffle_power(S("x0 + x1", 3), 0) == TruncatedSeries.one(3)
    assert shuffle_power(TruncatedSeries.zero(3), 2) == TruncatedSeries.zero(3)
    with pytest.raises(ValueError):
        shuffle_power(x1, -1)


@given(series(5), series(5))
def test_shuffle_matches_oracle(c, d):
    assert O.to_dict(shuffle(c, d)) == O.shuffle(O.to_dict(c), O.to_dict(d), 5)


@given(series(4), series(4), series(4))
def test_shuffle_algebra(a, b, c):
    assert shuffle(a, b) == shuffle(b, a)
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))
    assert shuffle(a, b + c) == shuffle(a, b) + shuffle(a, c)


# --- shuffle inverse ---------------------------------------------------------


def test_shuffle_inverse_examples():
    assert shuffle_inverse(TruncatedSeries.one(3)) == TruncatedSeries.one(3)
    assert shuffle_inverse(S("1 + x1", 3)) == S("1 - x1 + 2 x1x1 - 6 x1x1x1", 3)
    assert shuffle_inverse(TruncatedSeries.constant(2, 3)) == TruncatedSeries.constant(Fraction(1, 2), 3)
    with pytest.raises(NotAUnitError):
        shuffle_inverse(S("x1", 3))


def test_shuffle_inverse_frozen():
    got = shuffle_inverse(S("1 + x0x1 - x1", 4))
    assert got == S(
        "1 + x1 - x0x1 + 2 x1x1 - 2 x1x0x1 - 4 x0x1x1 + 6 x1x1x1"
        " + 4 x0x0x1x1 + 2 x0x1x0x1 - 18 x0x1x1x1 - 12 x1x0x1x1 - 6 x1x1x0x1 + 24 x1x1x1x1",
        4,
    )


@given(group_elements(5))
def test_shuffle_inverse_matches_geometric_oracle(c):
    assert O.to_dict(shuffle_inverse(c)) == O.shuffle_inverse_M(O.to_dict(c), 5)


@given(group_elements(5), st.sampled_from([Fraction(-2), Fraction(1, 3), Fraction(5, 2)]))
def test_shuffle_inverse_general_units(c, a):
    u = a * c
    inv = shuffle_inverse(u)
    assert shuffle(u, inv) == TruncatedSeries.one(5) == shuffle(inv, u)


# --- compositions ------------------------------------------------------------


def test_compose_examples():
    d = S("1 - x1 + 3 x0x1", 4)
    assert compose(S("x0x0", 4), d) == S("x0x0", 4)
    assert compose(S("x1", 4), S("x1", 4)) == S("x0x1", 4)
    assert compose(S("x1x1", 4), TruncatedSeries.one(4)) == S("x0x0", 4)
    assert compose(TruncatedSeries.zero(4), d) == TruncatedSeries.zero(4)


def test_compose_frozen():
    assert compose(S("x1 - 1/2 x0x1", 4), S("1 + 2 x1", 4)) == S("x0 - 1/2 x0x0 + 2 x0x1 - x0x0x1", 4)


@given(series(5, max_support=4), series(5, max_support=4))
def test_compose_matches_oracle(c, d):
    assert O.to_dict(compose(c, d)) == O.compose(O.to_dict(c), O.to_dict(d), 5)


def test_mixed_compose_examples():
    D = AffinePair.parse("1 - x1 + x0x1", "2 x1x1", 4)
    assert mixed_compose(S("x0x0x0", 4), D) == S("x0x0x0", 4)
    c = S("1 + x1 - 3 x1x0x1", 4)
    assert mixed_compose(c, AffinePair.identity(4)) == c
    assert mixed_compose(S("x1", 4), AffinePair.parse("1 + x0", "x1", 4)) == S("x1 + x1x0 + x0x1", 4)


def test_mixed_compose_frozen():
    D = AffinePair.parse("1 + x0", "x1", 4)
    got = mixed_compose(S("x1 - 1/2 x0x1", 4), D)
    assert got == S("x1 + x1x0 + 1/2 x0x1 - 1/2 x0x1x0 - 1/2 x0x0x1", 4)


@given(series(5, max_support=4), pairs(5, max_support=3))
def test_mixed_compose_matches_oracle(c, D):
    want = O.mixed_compose(O.to_dict(c), O.to_dict(D.c1), O.to_dict(D.c2), 5)
    assert O.to_dict(mixed_compose(c, D)) == want


@given(series(5), series(5), series(5))
def test_compose_distributes_over_shuffle(c, d, e):
    assert compose(shuffle(c, d), e) == shuffle(compose(c, e), compose(d, e))


@given(series(5), series(5), pairs(5))
def test_mixed_distributes_over_shuffle(c, d, z):
    assert mixed_compose(shuffle(c, d), z) == shuffle(mixed_compose(c, z), mixed_compose(d, z))


@given(series(4), series(4), pairs(4))
def test_mixed_associativity(h, c, D):
    assert compose(h, mixed_compose(c, D)) == mixed_compose(compose(h, c), D)


@given(series(5), series(5), pairs(5))
def test_truncation_exact(c, d, D):
    for op, arg in ((shuffle, d), (compose, d), (mixed_compose, D)):
        assert op(c, arg).restrict(4) == op(c.restrict(4), arg.restrict(4))


@given(series(5), series(5))
def test_mixed_with_additive_pair_vs_compose(c, d):
    # (1, d) feeds u + F_d[u]; for drift-free d1 = 1 this differs from plain compose,
    # but they agree on drift words
    D = AffinePair.additive(d)
    drift = TruncatedSeries({w: r for w, r in c.items() if 1 not in w.letters}, 5)
    assert mixed_compose(drift, D) == drift == compose(drift, d)


# --- quotient ----------------------------------------------------------------


def test_quotient_equal_examples():
    c = S("x1 - x0x1", 3)
    assert quotient_equal(c, c)
    assert quotient_equal(S("x0 + x0x0", 3), TruncatedSeries.zero(3))
    assert not quotient_equal(S("x1", 3), TruncatedSeries.zero(3))


@given(series(5), pairs(5), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_quotient_forward_implication(c, D, ks):
    h = c + TruncatedSeries([(k, Word(1 << i)) for i, k in enumerate(ks)], 5)
    assert quotient_equal(h, c)
    assert quotient_equal(mixed_compose(h, D), mixed_compose(c, D))


def test_drift_additive_pair_fixes_class_of_x1():
    # x1 . (1, delta) = x1 + x0 delta, which stays in [x1] when delta is drift-only
    x1 = S("x1", 5)
    D = AffinePair.parse("1", "3/2 - 3 x0x0", 5)
    out = mixed_compose(x1, D)
    assert out == S("x1 + 3/2 x0 - 3 x0x0x0", 5)
    assert out != x1 and quotient_equal(out, x1)
    assert not quotient_equal(mixed_compose(x1, AffinePair.parse("1", "x1", 5)), x1)
