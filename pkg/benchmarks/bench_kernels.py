"""Compiled vs pure-Python shuffle kernel.

    python benchmarks/bench_kernels.py [--repeat R]

Times the raw kernel on dense series and one end-to-end affine feedback
product with each backend swapped in.
"""

from __future__ import annotations

import argparse
import random
import timeit

from cfseries import _backend, _kernels_py
from cfseries import sampling as rs
from cfseries.feedback import affine_feedback

try:
    from cfseries import _kernels as compiled
except ImportError:
    compiled = None


def dense(n: int, seed: int) -> dict[int, int]:
    rng = random.Random(seed)
    return {k: rng.randint(-9, 9) or 1 for k in range(1, 1 << (n + 1))}


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled kernel not built; only the Python timings are shown")
    kernels = {"python": _kernels_py.shuffle_numerators}
    if compiled is not None:
        kernels["compiled"] = compiled.shuffle_numerators

    print(f"{'case':<28}" + "".join(f"{k:>12}" for k in kernels) + f"{'speedup':>10}")
    for n in (6, 8, 10):
        a, b = dense(n, 1), dense(n, 2)
        times = {k: best(lambda f=f: f(a, b, n), args.repeat) for k, f in kernels.items()}
        row(f"dense shuffle N={n}", times)

    rng = rs.instance_rng(0, "bench", 0)
    c, D = rs.random_series(rng, 6), rs.random_pair(rng, 6)
    times = {}
    saved = _backend.shuffle_numerators
    try:
        for k, f in kernels.items():
            _backend.shuffle_numerators = f
            times[k] = best(lambda: affine_feedback(c, D), args.repeat)
    finally:
        _backend.shuffle_numerators = saved
    row("affine_feedback N=6", times)


def row(label: str, times: dict[str, float]) -> None:
    speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
    print(f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values()) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
