# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; same contract as the pure-Python module."""

import heapq

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem, PyDict_DelItem
from cpython.ref cimport PyObject


cpdef dict add(dict a, dict b):
    cdef dict r = dict(a)
    cdef object k, v, s
    for k, v in b.items():
        s = r.get(k, 0) + v
        if s:
            r[k] = s
        else:
            r.pop(k, None)
    return r


cpdef dict sub(dict a, dict b):
    cdef dict r = dict(a)
    cdef object k, v, s
    for k, v in b.items():
        s = r.get(k, 0) - v
        if s:
            r[k] = s
        else:
            r.pop(k, None)
    return r


cpdef dict scale(dict a, object n):
    if not n:
        return {}
    return {k: v * n for k, v in a.items()}


cdef inline void _accum(dict r, list ka, list va, list kb, list vb, bint negate):
    cdef Py_ssize_t i, j, na = len(ka), nb = len(kb)
    cdef object x, y, k, t
    cdef PyObject *old
    for i in range(na):
        x = ka[i]
        y = va[i]
        if negate:
            y = -y
        for j in range(nb):
            k = x + kb[j]
            t = y * vb[j]
            old = PyDict_GetItem(r, k)
            if old is NULL:
                PyDict_SetItem(r, k, t)
            else:
                PyDict_SetItem(r, k, <object>old + t)


cdef dict _prune(dict r):
    return {k: v for k, v in r.items() if v}


cpdef dict mul(dict a, dict b):
    cdef dict r = {}
    if not a or not b:
        return r
    _accum(r, list(a.keys()), list(a.values()), list(b.keys()), list(b.values()), False)
    return _prune(r)


cpdef dict mulsub(dict a, dict b, dict c, dict d):
    """Return a*b - c*d in a single accumulation pass."""
    cdef dict r = {}
    if a and b:
        _accum(r, list(a.keys()), list(a.values()), list(b.keys()), list(b.values()), False)
    if c and d:
        _accum(r, list(c.keys()), list(c.values()), list(d.keys()), list(d.values()), True)
    return _prune(r)


cpdef bint divides(object ka, object kb, object guard):
    return ((kb | guard) - ka) & guard == guard


cpdef object divexact(dict a, dict b, object guard):
    """Quotient a/b when b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    cdef object lb = max(b)
    cdef object lc = b[lb]
    cdef list rk = [k for k in b if k != lb]
    cdef list rv = [b[k] for k in rk]
    cdef Py_ssize_t i, nr = len(rk)
    cdef dict r = dict(a)
    cdef list heap = [-k for k in r]
    heapq.heapify(heap)
    cdef dict q = {}
    cdef object k, v, qq, rem, qk, t
    cdef PyObject *old
    heappop = heapq.heappop
    heappush = heapq.heappush
    while heap:
        k = -heappop(heap)
        old = PyDict_GetItem(r, k)
        if old is NULL:
            continue
        v = <object>old
        PyDict_DelItem(r, k)
        if not v:
            continue
        while heap and -heap[0] == k:
            heappop(heap)
        if k < lb or ((k | guard) - lb) & guard != guard:
            return None
        qq, rem = divmod(v, lc)
        if rem:
            return None
        qk = k - lb
        q[qk] = qq
        for i in range(nr):
            t = qk + rk[i]
            old = PyDict_GetItem(r, t)
            if old is NULL:
                PyDict_SetItem(r, t, -qq * rv[i])
                heappush(heap, -t)
            else:
                PyDict_SetItem(r, t, <object>old - qq * rv[i])
    return q


cpdef dict bareiss(list m, object guard):
    """Determinant of a square matrix of term dicts by fraction-free elimination."""
    cdef Py_ssize_t n = len(m), k, i, j
    if n == 0:
        return {0: 1}
    cdef dict prev = {0: 1}
    cdef int sign = 1
    cdef dict pivot, lead, x
    cdef list row_k, row_i
    cdef object y
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return {}
        row_k = m[k]
        pivot = row_k[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                x = mulsub(pivot, row_i[j], lead, row_k[j])
                if x:
                    y = divexact(x, prev, guard)
                    if y is None:
                        raise ArithmeticError("inexact Bareiss division")
                    x = y
                row_i[j] = x
            row_i[k] = {}
        prev = pivot
    cdef dict det = m[n - 1][n - 1]
    return det if sign > 0 else {kk: -vv for kk, vv in det.items()}
