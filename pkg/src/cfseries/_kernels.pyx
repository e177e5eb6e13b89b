# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shuffle kernel.

Same contract as ``_kernels_py.shuffle_numerators``.  Numerators are carried
as int64 with checked arithmetic; any overflow hands the whole product back
to the pure-Python kernel, so results are exact either way.
"""

from libc.stdlib cimport calloc, malloc, free

from cfseries import _kernels_py

cdef extern from *:
    """
    static inline int cf_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int cf_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int cf_mul_ovf(long long a, long long b, long long *r) nogil
    int cf_add_ovf(long long a, long long b, long long *r) nogil


cdef int _interleave(long long *out, long long ub, int la, long long vb, int lb,
                     long long acc, long long p) noexcept nogil:
    # acc holds the word built so far, sentinel bit included
    cdef long long w, rest
    cdef int f
    if la == 0:
        w = (acc << lb) | vb
        return cf_add_ovf(out[w], p, &out[w])
    if lb == 0:
        w = (acc << la) | ub
        return cf_add_ovf(out[w], p, &out[w])
    f = <int>((ub >> (la - 1)) & 1)
    rest = ub & ((1LL << (la - 1)) - 1)
    if _interleave(out, rest, la - 1, vb, lb, (acc << 1) | f, p):
        return 1
    f = <int>((vb >> (lb - 1)) & 1)
    rest = vb & ((1LL << (lb - 1)) - 1)
    return _interleave(out, ub, la, rest, lb - 1, (acc << 1) | f, p)


cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil


cdef inline int _bitlen(long long k) noexcept nogil:
    return 63 - __builtin_clzll(k)



def shuffle_numerators(dict a, dict b, int max_len):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j, size
    cdef long long *ak
    cdef long long *an
    cdef long long *bk
    cdef long long *bn
    cdef int *al
    cdef int *bl
    cdef long long *out
    cdef long long p
    cdef int top_a = 0, top_b = 0, top, failed = 0
    if na == 0 or nb == 0:
        return {}
    try:
        ka = [int(k) for k in a]
        kb = [int(k) for k in b]
        va = [int(a[k]) for k in a]
        vb = [int(b[k]) for k in b]
        for x in va:
            if not -(1 << 62) < x < (1 << 62):
                raise OverflowError
        for x in vb:
            if not -(1 << 62) < x < (1 << 62):
                raise OverflowError
    except OverflowError:
        return _kernels_py.shuffle_numerators(a, b, max_len)

    ak = <long long *> malloc(na * sizeof(long long))
    an = <long long *> malloc(na * sizeof(long long))
    al = <int *> malloc(na * sizeof(int))
    bk = <long long *> malloc(nb * sizeof(long long))
    bn = <long long *> malloc(nb * sizeof(long long))
    bl = <int *> malloc(nb * sizeof(int))
    out = NULL
    try:
        for i in range(na):
            ak[i] = ka[i]
            an[i] = va[i]
            al[i] = _bitlen(ak[i])
            if al[i] > top_a:
                top_a = al[i]
        for j in range(nb):
            bk[j] = kb[j]
            bn[j] = vb[j]
            bl[j] = _bitlen(bk[j])
            if bl[j] > top_b:
                top_b = bl[j]
        top = top_a + top_b
        if top > max_len:
            top = max_len
        size = (<Py_ssize_t> 1) << (top + 1)
        out = <long long *> calloc(size, sizeof(long long))
        if out == NULL:
            raise MemoryError()
        with nogil:
            for i in range(na):
                if failed:
                    break
                for j in range(nb):
                    if al[i] + bl[j] > max_len:
                        continue
                    if cf_mul_ovf(an[i], bn[j], &p):
                        failed = 1
                        break
                    if _interleave(out, ak[i] ^ (1LL << al[i]), al[i],
                                   bk[j] ^ (1LL << bl[j]), bl[j], 1, p):
                        failed = 1
                        break
        if failed:
            return _kernels_py.shuffle_numerators(a, b, max_len)
        res = {}
        for i in range(1, size):
            if out[i] != 0:
                res[i] = out[i]
        return res
    finally:
        free(ak); free(an); free(al)
        free(bk); free(bn); free(bl)
        if out != NULL:
            free(out)
