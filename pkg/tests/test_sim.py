import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfseries.feedback import AffinePair, affine_feedback
from cfseries.series import TruncatedSeries
from cfseries.sim import (
    DivergenceError,
    Grid,
    Signal,
    SimConfig,
    crosscheck_homomorphisms,
    evaluate_affine,
    evaluate_series,
    evaluate_word,
    parse_input_spec,
    relative_deviation,
    simulate_closed_loop,
    write_csv,
)
from cfseries.words import Word
from strategies import words

S = TruncatedSeries.parse
GRID = Grid(1.0, 1000)


def sig(f, grid=GRID):
    return Signal.from_function(grid, f)


def test_grid_and_signal_validation():
    assert GRID.h == 1e-3 and GRID.t[-1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Grid(1.0, 1)
    with pytest.raises(ValueError):
        Grid(0.0, 10)
    with pytest.raises(ValueError):
        Signal(GRID, np.zeros(5))
    with pytest.raises(ValueError):
        Signal(GRID, np.full(1001, np.nan))
    s = Signal.constant(GRID, 2.0)
    with pytest.raises(ValueError):
        s.values[0] = 1.0
    with pytest.raises(ValueError):
        SimConfig(picard_tol=0)


def test_word_examples():
    u = sig(np.sin)
    assert np.all(evaluate_word("1", u).values == 1.0)
    t = GRID.t
    assert np.max(np.abs(evaluate_word("x0x0", u).values - t**2 / 2)) < 1e-12
    one = Signal.constant(GRID, 1.0)
    assert np.max(np.abs(evaluate_word("x1", one).values - t)) < 1e-12


def test_word_integrals_against_closed_forms():
    # u = cos: U(t) = sin t, F_{x1x1} = sin^2/2, F_{x0x1} = 1 - cos t
    grid = Grid(1.0, 4000)
    u = sig(np.cos, grid)
    t = grid.t
    assert np.max(np.abs(evaluate_word("x1x1", u).values - np.sin(t) ** 2 / 2)) < 1e-7
    assert np.max(np.abs(evaluate_word("x0x1", u).values - (1 - np.cos(t)))) < 1e-7


def test_series_examples():
    zero_u = Signal.constant(GRID, 0.0)
    c = S("2 - x0 + 1/2 x0x0x0", 4)
    t = GRID.t
    assert np.max(np.abs(evaluate_series(c, zero_u).values - (2 - t + t**3 / 12))) < 1e-6
    u = sig(np.cos)
    assert np.max(np.abs(evaluate_series(S("1 + x0", 3), u).values - (1 + t))) < 1e-12
    assert np.all(evaluate_series(TruncatedSeries.zero(3), u).values == 0)


def test_affine_examples():
    u = sig(lambda t: 0.3 * np.sin(3 * t))
    assert np.array_equal(evaluate_affine(AffinePair.identity(3), u).values, u.values)
    c = S("x1 - x0", 3)
    want = u.values + evaluate_series(c, u).values
    assert np.allclose(evaluate_affine(AffinePair.additive(c), u).values, want, rtol=0, atol=1e-15)
    zero = Signal.constant(GRID, 0.0)
    assert np.all(evaluate_affine(AffinePair.multiplicative(S("1 + x1", 3)), zero).values == 0)


@given(words(5, min_len=1), st.floats(0.1, 2.0))
@settings(max_examples=30)
def test_word_length_damping(w, amp):
    grid = Grid(0.8, 400)
    u = sig(lambda t: amp * np.cos(5 * t), grid)
    bound = (max(1.0, amp) * grid.t_max) ** len(w) / math.factorial(len(w))
    # quadrature error is O(h^2)
    assert np.max(np.abs(evaluate_word(w, u).values)) <= bound + grid.h**2


def test_closed_loop_identity_controller():
    v = Signal.constant(Grid(0.5, 200), 0.3)
    c = S("x1 - x0x1", 4)
    loop = simulate_closed_loop(c, AffinePair.identity(4), v)
    assert loop.iterations == 1
    assert np.array_equal(loop.u.values, v.values)
    assert np.allclose(loop.y.values, evaluate_series(c, v).values, rtol=0, atol=0)


def test_closed_loop_drift_plant_ignores_controller():
    v = sig(lambda t: 0.3 * np.sin(t), Grid(0.5, 200))
    c = S("1 + x0 + 2 x0x0", 4)
    loop = simulate_closed_loop(c, AffinePair.parse("1 + x1", "x1", 4), v)
    assert np.allclose(loop.y.values, evaluate_series(c, v).values, rtol=0, atol=1e-15)


@pytest.mark.parametrize("D", [("1", "x1"), ("1", "x1 - x0x1"), ("1 + x1", "0")])
def test_closed_loop_matches_algebraic_feedback(D):
    grid = Grid(0.5, 2000)
    v = Signal.constant(grid, 0.3)
    c = S("x1", 8)
    D = AffinePair.parse(*D, 8)
    loop = simulate_closed_loop(c, D, v)
    y_alg = evaluate_series(affine_feedback(c, D), v)
    assert relative_deviation(loop.y, y_alg) < 1e-6
    # returned pair satisfies the loop equation
    resid = v.values * evaluate_series(D.c1, loop.y).values + evaluate_series(D.c2, loop.y).values
    assert np.max(np.abs(resid - loop.u.values)) < 1e-9


def test_closed_loop_divergence():
    v = Signal.constant(Grid(5.0, 500), 50.0)
    with pytest.raises(DivergenceError):
        simulate_closed_loop(S("x1", 4), AffinePair.parse("1", "x1", 4), v)
    v = Signal.constant(Grid(0.5, 100), 0.3)
    with pytest.raises(DivergenceError, match="did not reach"):
        simulate_closed_loop(S("x1", 4), AffinePair.parse("1", "x1", 4), v, SimConfig(picard_max_iter=1))
    with pytest.raises(DivergenceError):
        simulate_closed_loop(S("x1", 4), AffinePair.identity(4), Signal.constant(GRID, 1e4))


def test_crosscheck_examples():
    u = Signal.constant(GRID, 1.0)
    x1 = S("x1", 4)
    rep = crosscheck_homomorphisms(x1, x1, u)
    assert np.allclose(rep.shuffle_alg, GRID.t**2, atol=1e-12)
    assert rep.shuffle_deviation < 1e-12
    zero = TruncatedSeries.zero(4)
    rep = crosscheck_homomorphisms(zero, x1, sig(np.sin))
    assert rep.shuffle_deviation == rep.compose_deviation == rep.mixed_deviation == 0.0


def test_crosscheck_improves_with_degree():
    grid = Grid(0.5, 2000)
    u = sig(lambda t: 0.3 * np.sin(2 * np.pi * t), grid)
    c, d = S("1 + x1 - 2 x0x1 + x1x1", 8), S("2 + x1 - x0", 8)
    lo = crosscheck_homomorphisms(c.restrict(3), d.restrict(3), u)
    hi = crosscheck_homomorphisms(c, d, u)
    assert hi.compose_deviation < lo.compose_deviation
    assert hi.max_deviation < 1e-3


def test_relative_deviation_zero_reference():
    assert relative_deviation(np.array([0.0, 1e-3]), np.zeros(2)) == 1e-3
    assert relative_deviation(np.array([1.0, 2.0]), np.array([1.0, 4.0])) == 0.5


def test_input_specs(tmp_path):
    grid = Grid(1.0, 4)
    assert np.all(parse_input_spec("const:0.5", grid).values == 0.5)
    s = parse_input_spec("sin:2:0.25", grid)
    assert s.values[2] == pytest.approx(2 * np.sin(2 * np.pi * 0.25 * 0.5))
    path = tmp_path / "u.csv"
    path.write_text("t,value\n" + "".join(f"{t},{t * 2}\n" for t in grid.t))
    assert np.allclose(parse_input_spec(f"csv:{path}", grid).values, grid.t * 2)
    with pytest.raises(ValueError, match="grid"):
        parse_input_spec(f"csv:{path}", Grid(1.0, 5))
    for bad in ("step:1", "const:x", "sin:1"):
        with pytest.raises(ValueError):
            parse_input_spec(bad, grid)


def test_write_csv_full_precision():
    buf = io.StringIO()
    write_csv(buf, {"t": np.array([0.0, 0.1]), "y": np.array([1 / 3, 2.0])})
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,y"
    assert float(lines[1].split(",")[1]) == 1 / 3
    assert lines[2] == "0.10000000000000001,2"
