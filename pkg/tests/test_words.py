import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfseries.words import (
    EMPTY,
    X0,
    X1,
    Word,
    as_word,
    check_degree,
    concat,
    enumerate_words,
    get_max_degree,
    prefix_letter,
    set_max_degree,
    split_first,
)
from strategies import words


def test_enumerate_small():
    assert enumerate_words(0) == [EMPTY]
    assert [str(w) for w in enumerate_words(2)] == ["1", "x0", "x1", "x0x0", "x0x1", "x1x0", "x1x1"]
    assert len(enumerate_words(10)) == 2047


@pytest.mark.parametrize("n", range(7))
def test_enumerate_graded_lex_prefix_closed(n):
    ws = enumerate_words(n)
    assert len(ws) == len(set(ws)) == 2 ** (n + 1) - 1
    keys = [(len(w), w.letters) for w in ws]
    assert keys == sorted(keys)
    present = set(ws)
    for w in ws:
        for k in range(len(w)):
            assert Word.from_letters(w.letters[:k]) in present


def test_degree_cap():
    assert get_max_degree() == 16
    with pytest.raises(ValueError):
        enumerate_words(get_max_degree() + 1)
    with pytest.raises(ValueError):
        check_degree(-1)
    old = get_max_degree()
    try:
        set_max_degree(18)
        assert check_degree(18) == 18
    finally:
        set_max_degree(old)


def test_concat_examples():
    assert concat(X0, X1) == Word.parse("x0x1")
    assert concat(EMPTY, Word.parse("x1x0")) == Word.parse("x1x0")
    assert concat(X1, X1) == Word.parse("x1x1")


@given(words(), words(), words())
def test_concat_associative_and_unit(u, v, w):
    assert concat(concat(u, v), w) == concat(u, concat(v, w))
    assert concat(EMPTY, u) == u == concat(u, EMPTY)
    assert len(concat(u, v)) == len(u) + len(v)
    assert concat(u, v).letters == u.letters + v.letters


@given(words(8))
def test_text_round_trip(w):
    assert Word.parse(str(w)) == w
    assert as_word(str(w)) == as_word(w.letters) == w


@given(words(8, min_len=1))
def test_split_and_prefix_inverse(w):
    letter, rest = split_first(w)
    assert letter == w.letters[0]
    assert prefix_letter(letter, rest) == w


@pytest.mark.parametrize("bad", ["", "x2", "x0 x1", "1x0", "x", "x01"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        Word.parse(bad)


def test_letters_and_repr():
    w = Word.parse("x1x0x0")
    assert w.letters == (1, 0, 0)
    assert repr(w) == "Word('x1x0x0')"
    with pytest.raises(ValueError):
        Word.from_letters([2])
    with pytest.raises(ValueError):
        Word(0)


@given(st.lists(words(5), min_size=2, max_size=2))
def test_int_order_is_graded_lex(pair):
    u, v = pair
    assert (u < v) == ((len(u), u.letters) < (len(v), v.letters))
