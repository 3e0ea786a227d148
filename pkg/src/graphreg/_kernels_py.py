"""Pure-Python bitmask kernels for hereditary/saturated subsets.

``pred[v]`` is the bitmask of sources of edges with range ``v``; a vertex
receives edges exactly when ``pred[v] != 0``.  Same API as ``_kernels``.
"""


def classify_mask(pred, n, s):
    hereditary = True
    saturated = True
    for v in range(n):
        p = pred[v]
        if s >> v & 1:
            if p & ~s:
                hereditary = False
        elif p and not (p & ~s):
            saturated = False
    return hereditary, saturated


def closure_mask(pred, n, s):
    while True:
        old = s
        for v in range(n):
            if s >> v & 1:
                s |= pred[v]
        for v in range(n):
            p = pred[v]
            if not (s >> v & 1) and p and not (p & ~s):
                s |= 1 << v
        if s == old:
            return s


def hs_scan(pred, n):
    out = []
    for s in range(1 << n):
        ok = True
        for v in range(n):
            p = pred[v]
            if s >> v & 1:
                if p & ~s:
                    ok = False
                    break
            elif p and not (p & ~s):
                ok = False
                break
        if ok:
            out.append(s)
    return out
