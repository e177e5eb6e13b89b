"""Numerical Chen-Fliess operators on a uniform time grid.

Iterated integrals are built letter by letter from the right with cumulative
trapezoidal sums: ``x0`` integrates against ``dt`` and ``x1`` against
``u dt``.  Rational coefficients become floats here and nowhere else.

The closed-loop simulator solves

    y = F_c[u],   u = v * F_{d1}[y] + F_{d2}[y]

by Picard iteration, which is the signal-level counterpart of
:func:`cfseries.feedback.affine_feedback`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, TextIO

import numpy as np

from cfseries.feedback import AffinePair
from cfseries.series import TruncatedSeries, compose, mixed_compose, shuffle
from cfseries.words import as_word, split_first

__all__ = [
    "Grid",
    "Signal",
    "SimConfig",
    "DivergenceError",
    "ClosedLoop",
    "CrosscheckReport",
    "evaluate_word",
    "evaluate_series",
    "evaluate_affine",
    "simulate_closed_loop",
    "crosscheck_homomorphisms",
    "relative_deviation",
    "parse_input_spec",
    "write_csv",
]


class DivergenceError(RuntimeError):
    """Picard iteration left the amplitude cap or ran out of iterations."""


@dataclass(frozen=True)
class Grid:
    t_max: float
    steps: int

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.steps < 2:
            raise ValueError("a grid needs at least 2 steps")

    @property
    def h(self) -> float:
        return self.t_max / self.steps

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.h


@dataclass(frozen=True, eq=False)
class Signal:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.steps + 1,):
            raise ValueError(
                f"signal has {vals.shape} samples, grid expects {self.grid.steps + 1}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, grid: Grid, a: float) -> "Signal":
        return cls(grid, np.full(grid.steps + 1, float(a)))

    @classmethod
    def from_function(cls, grid: Grid, f) -> "Signal":
        return cls(grid, f(grid.t))

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class SimConfig:
    degree: int = 8
    picard_tol: float = 1e-10
    picard_max_iter: int = 100
    amplitude_cap: float = 1e3

    def __post_init__(self):
        if not self.picard_tol > 0:
            raise ValueError("picard_tol must be positive")
        if self.picard_max_iter < 1:
            raise ValueError("picard_max_iter must be at least 1")
        if not self.amplitude_cap > 0:
            raise ValueError("amplitude_cap must be positive")


def _cumtrapz(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum((f[1:] + f[:-1]) * (0.5 * h), out=out[1:])
    return out


class _Integrator:
    """Iterated integrals of one input, memoised on word suffixes."""

    def __init__(self, u: np.ndarray, h: float):
        self.u = u
        self.h = h
        self.memo: dict[int, np.ndarray] = {1: np.ones_like(u)}

    def __call__(self, key: int) -> np.ndarray:
        got = self.memo.get(key)
        if got is not None:
            return got
        letter, rest = split_first(key)
        inner = self(rest)
        out = _cumtrapz(inner if letter == 0 else self.u * inner, self.h)
        self.memo[key] = out
        return out

    def series(self, c: TruncatedSeries) -> np.ndarray:
        acc = np.zeros_like(self.u)
        for w, r in c.items():
            acc += float(r) * self(int(w))
        return acc


def _values(u: Signal | np.ndarray) -> np.ndarray:
    return u.values if isinstance(u, Signal) else np.asarray(u, dtype=float)


def evaluate_word(w, u: Signal) -> Signal:
    """Iterated integral ``F_w[u]`` on the grid of ``u``."""
    return Signal(u.grid, _Integrator(u.values, u.grid.h)(int(as_word(w))))


def evaluate_series(c: TruncatedSeries, u: Signal) -> Signal:
    return Signal(u.grid, _Integrator(u.values, u.grid.h).series(c))


def evaluate_affine(D: AffinePair, u: Signal) -> Signal:
    """``u F_{d1}[u] + F_{d2}[u]``."""
    it = _Integrator(u.values, u.grid.h)
    return Signal(u.grid, u.values * it.series(D.c1) + it.series(D.c2))


class ClosedLoop(NamedTuple):
    u: Signal
    y: Signal
    iterations: int
    residual: float


def simulate_closed_loop(
    c: TruncatedSeries, D: AffinePair, v: Signal, cfg: SimConfig | None = None
) -> ClosedLoop:
    """Picard-iterate the affine feedback loop driven by the external input ``v``.

    Stops at the first iterate ``u`` whose update is below ``picard_tol``, and
    returns that ``u`` with ``y = F_c[u]``, so the returned pair satisfies the
    loop equation to within the tolerance.
    """
    cfg = cfg or SimConfig()
    if v.sup() > cfg.amplitude_cap:
        raise DivergenceError("input already exceeds the amplitude cap")
    h = v.grid.h
    vv = v.values
    u = vv.copy()
    for k in range(1, cfg.picard_max_iter + 1):
        y = _Integrator(u, h).series(c)
        fy = _Integrator(y, h)
        nxt = vv * fy.series(D.c1) + fy.series(D.c2)
        peak = float(np.max(np.abs(nxt)))
        if not math.isfinite(peak) or peak > cfg.amplitude_cap or float(np.max(np.abs(y))) > cfg.amplitude_cap:
            raise DivergenceError(
                f"Picard iterate {k} left the amplitude cap {cfg.amplitude_cap:g}; "
                "shorten the horizon or shrink the input"
            )
        res = float(np.max(np.abs(nxt - u)))
        if res < cfg.picard_tol:
            return ClosedLoop(Signal(v.grid, u), Signal(v.grid, y), k, res)
        u = nxt
    raise DivergenceError(
        f"Picard iteration did not reach tolerance {cfg.picard_tol:g} "
        f"in {cfg.picard_max_iter} iterations"
    )


def relative_deviation(a, b) -> float:
    """``max|a - b| / max|b|``, falling back to the absolute gap when ``b`` is 0."""
    a = _values(a)
    b = _values(b)
    gap = float(np.max(np.abs(a - b)))
    scale = float(np.max(np.abs(b)))
    return gap / scale if scale > 0 else gap


@dataclass
class CrosscheckReport:
    t: np.ndarray
    u: np.ndarray
    shuffle_alg: np.ndarray
    shuffle_num: np.ndarray
    compose_alg: np.ndarray
    compose_num: np.ndarray
    mixed_alg: np.ndarray
    mixed_num: np.ndarray

    @property
    def shuffle_deviation(self) -> float:
        return relative_deviation(self.shuffle_alg, self.shuffle_num)

    @property
    def compose_deviation(self) -> float:
        return relative_deviation(self.compose_alg, self.compose_num)

    @property
    def mixed_deviation(self) -> float:
        return relative_deviation(self.mixed_alg, self.mixed_num)

    @property
    def max_deviation(self) -> float:
        return max(self.shuffle_deviation, self.compose_deviation, self.mixed_deviation)


def crosscheck_homomorphisms(
    c: TruncatedSeries, d: TruncatedSeries, u: Signal, pair: AffinePair | None = None
) -> CrosscheckReport:
    """Compare algebraic products with the signal operations they encode.

    * ``F_{c sh d}[u]`` against ``F_c[u] * F_d[u]``
    * ``F_{c o d}[u]`` against ``F_c[F_d[u]]``
    * ``F_{c mixed pair}[u]`` against ``F_c[F_pair[u]]``; ``pair`` defaults to
      the additive pair ``(1, d)``.
    """
    if pair is None:
        pair = AffinePair.additive(d)
    h = u.grid.h
    it = _Integrator(u.values, h)
    fc = it.series(c)
    fd = it.series(d)
    shuffle_alg = it.series(shuffle(c, d))
    compose_alg = it.series(compose(c, d))
    compose_num = _Integrator(fd, h).series(c)
    mixed_alg = it.series(mixed_compose(c, pair))
    fpair = u.values * it.series(pair.c1) + it.series(pair.c2)
    mixed_num = _Integrator(fpair, h).series(c)
    return CrosscheckReport(
        t=u.t,
        u=u.values,
        shuffle_alg=shuffle_alg,
        shuffle_num=fc * fd,
        compose_alg=compose_alg,
        compose_num=compose_num,
        mixed_alg=mixed_alg,
        mixed_num=mixed_num,
    )


def parse_input_spec(spec: str, grid: Grid) -> Signal:
    """``const:<a>``, ``sin:<amp>:<freq_hz>`` or ``csv:<path>``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "const":
            return Signal.constant(grid, float(rest))
        if kind == "sin":
            amp, freq = rest.split(":")
            a, f = float(amp), float(freq)
            return Signal.from_function(grid, lambda t: a * np.sin(2 * np.pi * f * t))
        if kind == "csv":
            return _read_signal_csv(Path(rest), grid)
    except ValueError as exc:
        raise ValueError(f"bad input spec {spec!r}: {exc}") from None
    raise ValueError(f"bad input spec {spec!r}: expected const:, sin: or csv:")


def _read_signal_csv(path: Path, grid: Grid) -> Signal:
    ts, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                t, val = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not ts:
                    continue  # header
                raise ValueError(f"{path}: malformed row {row!r}")
            ts.append(t)
            vs.append(val)
    if len(ts) != grid.steps + 1 or not np.allclose(ts, grid.t, rtol=0, atol=1e-9 * max(1.0, grid.t_max)):
        raise ValueError(f"{path}: samples do not match the grid ({grid.steps + 1} points on [0, {grid.t_max}])")
    return Signal(grid, np.array(vs))


def write_csv(out: TextIO, columns: dict[str, np.ndarray]) -> None:
    """One row per grid point, 17 significant digits."""
    names = list(columns)
    out.write(",".join(names) + "\n")
    cols = [np.asarray(columns[n], dtype=float) for n in names]
    for row in zip(*cols):
        out.write(",".join(f"{x:.17g}" for x in row) + "\n")
