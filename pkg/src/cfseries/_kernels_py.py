"""Pure-Python shuffle kernel.

Series reach the kernel as integer numerators keyed by packed words; the
caller owns the common denominator.  This module is the reference the
compiled core is tested against, and the fallback when it is not built.
"""

from __future__ import annotations

from functools import lru_cache

__all__ = ["word_shuffle", "shuffle_numerators"]


@lru_cache(maxsize=1 << 17)
def word_shuffle(u: int, v: int) -> tuple[tuple[int, int], ...]:
    """Shuffle of two packed words as ``((word, multiplicity), ...)``."""
    if u == 1:
        return ((v, 1),)
    if v == 1:
        return ((u, 1),)
    lu = u.bit_length() - 1
    lv = v.bit_length() - 1
    tu = 1 << (lu - 1)
    tv = 1 << (lv - 1)
    au, ru = (u >> (lu - 1)) & 1, (u & (tu - 1)) | tu
    av, rv = (v >> (lv - 1)) & 1, (v & (tv - 1)) | tv
    # (a u') sh (b v') = a (u' sh b v') + b (a u' sh v')
    n = lu + lv - 1
    out: dict[int, int] = {}
    for w, m in word_shuffle(ru, v):
        k = w + (1 << n) + (au << n)
        out[k] = out.get(k, 0) + m
    for w, m in word_shuffle(u, rv):
        k = w + (1 << n) + (av << n)
        out[k] = out.get(k, 0) + m
    return tuple(sorted(out.items()))


def shuffle_numerators(a: dict[int, int], b: dict[int, int], max_len: int) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    bl = sorted(((v.bit_length() - 1, v, cv) for v, cv in b.items()))
    out: dict[int, int] = {}
    get = out.get
    for u, cu in a.items():
        room = max_len - (u.bit_length() - 1)
        for lv, v, cv in bl:
            if lv > room:
                break
            p = cu * cv
            for w, m in word_shuffle(u, v):
                out[w] = get(w, 0) + m * p
    return {w: x for w, x in out.items() if x}
