"""Pure-Python term kernels.

A polynomial is a dict mapping a packed monomial key to a nonzero int.
Multiplying monomials is adding keys; ``guard`` is the mask of per-field
guard bits used by the divisibility test.
"""

import heapq


def add(a, b):
    r = dict(a)
    for k, v in b.items():
        s = r.get(k, 0) + v
        if s:
            r[k] = s
        else:
            r.pop(k, None)
    return r


def sub(a, b):
    r = dict(a)
    for k, v in b.items():
        s = r.get(k, 0) - v
        if s:
            r[k] = s
        else:
            r.pop(k, None)
    return r


def scale(a, n):
    if not n:
        return {}
    return {k: v * n for k, v in a.items()}


def mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = {}
    get = r.get
    for kb, vb in b.items():
        for ka, va in a.items():
            k = ka + kb
            r[k] = get(k, 0) + va * vb
    return {k: v for k, v in r.items() if v}


def mulsub(a, b, c, d):
    """Return a*b - c*d in a single accumulation pass."""
    r = {}
    get = r.get
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            r[k] = get(k, 0) + va * vb
    for kc, vc in c.items():
        for kd, vd in d.items():
            k = kc + kd
            r[k] = get(k, 0) - vc * vd
    return {k: v for k, v in r.items() if v}


def divides(ka, kb, guard):
    """True when monomial ``ka`` divides monomial ``kb``."""
    return ((kb | guard) - ka) & guard == guard


def divexact(a, b, guard):
    """Quotient a/b when b divides a exactly, else None.

    Terms of the running remainder are consumed from the largest key
    down, so every step cancels the current leading term.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    lc = b[lb]
    rest = [(k, v) for k, v in b.items() if k != lb]
    r = dict(a)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q = {}
    while heap:
        k = -heapq.heappop(heap)
        v = r.pop(k, 0)
        if not v:
            continue
        while heap and -heap[0] == k:
            heapq.heappop(heap)
        if k < lb or not divides(lb, k, guard):
            return None
        qq, rem = divmod(v, lc)
        if rem:
            return None
        qk = k - lb
        q[qk] = qq
        for kb, vb in rest:
            t = qk + kb
            if t in r:
                r[t] -= qq * vb
            else:
                r[t] = -qq * vb
                heapq.heappush(heap, -t)
    return q


def bareiss(m, guard):
    """Determinant of a square matrix of term dicts by fraction-free elimination.

    The matrix is consumed. Zero pivots are handled by a row exchange.
    """
    n = len(m)
    if n == 0:
        return {0: 1}
    prev = {0: 1}
    sign = 1
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return {}
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                x = mulsub(pivot, row_i[j], lead, row_k[j])
                if x:
                    x = divexact(x, prev, guard)
                    if x is None:
                        raise ArithmeticError("inexact Bareiss division")
                row_i[j] = x
            row_i[k] = {}
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else {k: -v for k, v in det.items()}
