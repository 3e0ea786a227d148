# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels for hereditary/saturated subsets (see _kernels_py)."""

from libc.stdlib cimport malloc, free

ctypedef unsigned long long mask_t


cdef mask_t* _load(pred, int n) except NULL:
    if n > 63:
        raise ValueError("at most 63 vertices are supported")
    cdef mask_t* buf = <mask_t*> malloc((n if n > 0 else 1) * sizeof(mask_t))
    if buf == NULL:
        raise MemoryError()
    cdef int v
    for v in range(n):
        buf[v] = <mask_t> pred[v]
    return buf


def classify_mask(pred, int n, s):
    cdef mask_t* p = _load(pred, n)
    cdef mask_t m = <mask_t> s
    cdef bint hereditary = True, saturated = True
    cdef int v
    try:
        for v in range(n):
            if (m >> v) & 1:
                if p[v] & ~m:
                    hereditary = False
            elif p[v] and not (p[v] & ~m):
                saturated = False
    finally:
        free(p)
    return hereditary, saturated


def closure_mask(pred, int n, s):
    cdef mask_t* p = _load(pred, n)
    cdef mask_t m = <mask_t> s, old
    cdef int v
    try:
        while True:
            old = m
            for v in range(n):
                if (m >> v) & 1:
                    m |= p[v]
            for v in range(n):
                if not ((m >> v) & 1) and p[v] and not (p[v] & ~m):
                    m |= (<mask_t> 1) << v
            if m == old:
                break
    finally:
        free(p)
    return m


def hs_scan(pred, int n):
    if n > 30:
        raise ValueError("exhaustive scan is limited to 30 vertices")
    cdef mask_t* p = _load(pred, n)
    cdef mask_t s, total = (<mask_t> 1) << n
    cdef int v
    cdef bint ok
    out = []
    try:
        s = 0
        while s < total:
            ok = True
            for v in range(n):
                if (s >> v) & 1:
                    if p[v] & ~s:
                        ok = False
                        break
                elif p[v] and not (p[v] & ~s):
                    ok = False
                    break
            if ok:
                out.append(s)
            s += 1
    finally:
        free(p)
    return out
