"""``cfseries`` command-line front end.

Exit status: 0 success, 1 verification failure, 2 parse or validation error,
3 numerical divergence.
"""

from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

from cfseries import __version__
from cfseries.feedback import (
    AffinePair,
    StarInverseError,
    TangentPair,
    affine_feedback,
    commutator_odot,
    lie_bracket,
    odot,
    odot_inverse,
    residual_loop,
    star,
    star_inverse,
)
from cfseries.series import NotAUnitError, compose, mixed_compose, shuffle, shuffle_inverse
from cfseries.sim import (
    DivergenceError,
    Grid,
    SimConfig,
    crosscheck_homomorphisms,
    evaluate_series,
    parse_input_spec,
    simulate_closed_loop,
    write_csv,
)
from cfseries.textio import (
    FormatError,
    format_pair,
    format_series,
    read_pair_file,
    read_series_file,
    read_tangent_file,
)
from cfseries.verify import verify_group_laws
from cfseries.words import check_degree

EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3


class UsageError(Exception):
    pass


# operand kinds: "s" series, "p" pair, "t" tangent
_ALGEBRAIC = {
    "shuffle": ("ss", "series a sh b"),
    "shinv": ("s", "shuffle inverse of a unit series"),
    "compose": ("ss", "composition product c o d"),
    "mixedcompose": ("sp", "mixed composition of a series with a pair"),
    "odot": ("pp", "semidirect product C . D"),
    "odotinv": ("p", "inverse under odot"),
    "star": ("pp", "affine feedback group product C * D"),
    "starinv": ("p", "inverse under star"),
    "feedback": ("sp", "closed-loop series c @ D"),
    "commutator": ("pp", "odot commutator C D C^-1 D^-1"),
    "bracket": ("tt", "Lie bracket of two tangent pairs"),
}


def _read(kind: str, path: str, degree: int):
    reader = {"s": read_series_file, "p": read_pair_file, "t": read_tangent_file}[kind]
    try:
        obj = reader(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    have = obj.degree
    if have < degree:
        raise UsageError(f"{path}: declares degree {have}, below the requested --degree {degree}")
    if have > degree:
        if kind == "s":
            obj = obj.restrict(degree)
        elif kind == "p":
            obj = obj.restrict(degree)
        else:
            obj = TangentPair(obj.t1.restrict(degree), obj.t2.restrict(degree))
    return obj


def _format(obj) -> str:
    if isinstance(obj, (AffinePair, TangentPair)):
        return format_pair(obj)
    return format_series(obj)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _require_degree(args) -> int:
    if args.degree is None:
        raise UsageError(f"{args.command}: --degree N is required")
    try:
        check_degree(args.degree)
    except ValueError as exc:
        raise UsageError(f"--degree {args.degree}: {exc}") from None
    return args.degree


def _run_algebraic(args) -> int:
    n = _require_degree(args)
    kinds, _ = _ALGEBRAIC[args.command]
    if len(args.files) != len(kinds):
        raise UsageError(
            f"{args.command} takes {len(kinds)} operand file(s), got {len(args.files)}"
        )
    ops = [_read(k, f, n) for k, f in zip(kinds, args.files)]
    fn = {
        "shuffle": shuffle,
        "shinv": shuffle_inverse,
        "compose": compose,
        "mixedcompose": mixed_compose,
        "odot": odot,
        "odotinv": odot_inverse,
        "star": star,
        "starinv": star_inverse,
        "feedback": affine_feedback,
        "commutator": commutator_odot,
        "bracket": lie_bracket,
    }[args.command]
    _emit(_format(fn(*ops)), args.out)
    return 0


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.command}: --{name} is required")


def _run_residual(args) -> int:
    n = _require_degree(args)
    _need(args, "plant", "d1", "d2")
    c = _read("s", args.plant, n)
    d1 = _read("s", args.d1, n)
    d2 = _read("s", args.d2, n)
    if d1.constant_term != 1:
        raise UsageError(f"{args.d1}: d1 must have constant term 1, got {d1.constant_term}")
    omega, net = residual_loop(c, d1, d2)
    _emit(format_pair(net) + "[omega]\n" + format_series(omega), args.out)
    return 0


def _run_verify(args) -> int:
    n = _require_degree(args)
    budget = 100 if args.instances is None else args.instances
    if budget < 0:
        raise UsageError("--instances must be non-negative")
    seed = 0 if args.seed is None else args.seed
    report = verify_group_laws(budget, n, seed, workers=args.workers)
    cx_dir = Path(args.out).with_suffix("").as_posix() + "_counterexamples" if args.out else "counterexamples"
    text = report.to_text(cx_dir if not report.passed else None)
    _emit(text, args.out)
    return 0 if report.passed else EXIT_VERIFY


def _grid_and_input(args):
    tmax = 0.5 if args.tmax is None else args.tmax
    steps = 2000 if args.steps is None else args.steps
    try:
        grid = Grid(tmax, steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    spec = args.input or "const:0.3"
    try:
        return grid, parse_input_spec(spec, grid)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _run_simulate(args) -> int:
    n = _require_degree(args)
    _need(args, "plant", "controller")
    c = _read("s", args.plant, n)
    D = _read("p", args.controller, n)
    grid, v = _grid_and_input(args)
    try:
        cfg = SimConfig(degree=n, picard_tol=1e-10 if args.tol is None else args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    loop = simulate_closed_loop(c, D, v, cfg)
    y_alg = evaluate_series(affine_feedback(c, D), v).values
    buf = io.StringIO()
    write_csv(
        buf,
        {
            "t": grid.t,
            "v": v.values,
            "u": loop.u.values,
            "y": loop.y.values,
            "y_alg": y_alg,
            "abs_err": abs(loop.y.values - y_alg),
        },
    )
    _emit(buf.getvalue(), args.out)
    print(
        f"picard iterations {loop.iterations}, residual {loop.residual:.3g}, "
        f"max |y - y_alg| {float(abs(loop.y.values - y_alg).max()):.3g}",
        file=sys.stderr,
    )
    return 0


def _run_crosscheck(args) -> int:
    n = _require_degree(args)
    if len(args.files) != 2:
        raise UsageError(f"crosscheck takes 2 series files, got {len(args.files)}")
    c, d = (_read("s", f, n) for f in args.files)
    pair = _read("p", args.controller, n) if args.controller else None
    _, u = _grid_and_input(args)
    rep = crosscheck_homomorphisms(c, d, u, pair)
    buf = io.StringIO()
    write_csv(
        buf,
        {
            "t": rep.t,
            "u": rep.u,
            "shuffle_alg": rep.shuffle_alg,
            "shuffle_num": rep.shuffle_num,
            "compose_alg": rep.compose_alg,
            "compose_num": rep.compose_num,
            "mixed_alg": rep.mixed_alg,
            "mixed_num": rep.mixed_num,
        },
    )
    _emit(buf.getvalue(), args.out)
    print(
        f"relative deviation: shuffle {rep.shuffle_deviation:.3g}, "
        f"compose {rep.compose_deviation:.3g}, mixed {rep.mixed_deviation:.3g}",
        file=sys.stderr,
    )
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfseries", description="Truncated Chen-Fliess series and affine feedback.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--degree", type=int, help="truncation degree N (required)")
        sp.add_argument("--out", help="write the result here instead of stdout")
        return sp

    for name, (kinds, help_) in _ALGEBRAIC.items():
        sp = common(sub.add_parser(name, help=help_))
        sp.add_argument("files", nargs="*", metavar="FILE")

    sp = common(sub.add_parser("residual", help="four nested loops and their net additive loop"))
    for opt in ("plant", "d1", "d2"):
        sp.add_argument(f"--{opt}", metavar="FILE")

    sp = common(sub.add_parser("verify", help="seeded sweep of the algebraic identities"))
    sp.add_argument("--seed", type=int)
    sp.add_argument("--instances", type=int, help="random instances per identity (default 100)")
    sp.add_argument("--workers", type=int, default=1)

    sp = common(sub.add_parser("simulate", help="Picard closed-loop simulation vs c @ D"))
    sp.add_argument("--plant", metavar="FILE")
    sp.add_argument("--controller", metavar="FILE")
    sp.add_argument("--tol", type=float, help="Picard tolerance (default 1e-10)")

    sp = common(sub.add_parser("crosscheck", help="numeric check of shuffle/compose/mixed products"))
    sp.add_argument("files", nargs="*", metavar="FILE")
    sp.add_argument("--controller", metavar="FILE", help="pair for the mixed check (default (1, d))")

    for name in ("simulate", "crosscheck"):
        sp = sub.choices[name]
        sp.add_argument("--input", metavar="SPEC", help="const:a | sin:amp:freq | csv:path")
        sp.add_argument("--tmax", type=float)
        sp.add_argument("--steps", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command in _ALGEBRAIC:
            return _run_algebraic(args)
        return {
            "residual": _run_residual,
            "verify": _run_verify,
            "simulate": _run_simulate,
            "crosscheck": _run_crosscheck,
        }[args.command](args)
    except (UsageError, FormatError, NotAUnitError, StarInverseError, ValueError) as exc:
        print(f"cfseries: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"cfseries: diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
