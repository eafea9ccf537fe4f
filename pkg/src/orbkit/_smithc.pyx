# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 Smith normal form kernel.

Mirrors the pure routine: smallest-pivot selection, floor-division clearing,
divisibility fix-up.  Entries are guarded at 2^31 so every intermediate
product fits in int64; anything larger raises OverflowError and the caller
falls back to the exact pure routine.
"""

from libc.stdlib cimport free, malloc

DEF GUARD = 2147483648  # 2^31


cdef inline long long _floordiv(long long v, long long p):
    cdef long long q = v / p
    if (v % p != 0) and ((v < 0) != (p < 0)):
        q -= 1
    return q


def smith_diagonal(rows):
    """Nonzero Smith diagonal of a list-of-lists integer matrix."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return []
    cdef long long *a = <long long *> malloc(m * n * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, si, bi, bj, off
    cdef long long v, p, q, av, bestabs
    cdef bint dirty
    try:
        for i in range(m):
            row = rows[i]
            if len(row) != n:
                raise ValueError("ragged matrix")
            for j in range(n):
                v = row[j]
                if v > GUARD or v < -GUARD:
                    raise OverflowError("entry exceeds kernel guard")
                a[i * n + j] = v
        diag = []
        si = 0
        while si < m and si < n:
            bi = -1
            bj = -1
            bestabs = 0
            for i in range(si, m):
                off = i * n
                for j in range(si, n):
                    v = a[off + j]
                    if v != 0:
                        av = -v if v < 0 else v
                        if bi < 0 or av < bestabs:
                            bi = i
                            bj = j
                            bestabs = av
            if bi < 0:
                break
            if bi != si:
                for j in range(n):
                    v = a[si * n + j]
                    a[si * n + j] = a[bi * n + j]
                    a[bi * n + j] = v
            if bj != si:
                for i in range(m):
                    v = a[i * n + si]
                    a[i * n + si] = a[i * n + bj]
                    a[i * n + bj] = v
            p = a[si * n + si]
            dirty = False
            for i in range(si + 1, m):
                v = a[i * n + si]
                if v != 0:
                    q = _floordiv(v, p)
                    if q != 0:
                        for j in range(si, n):
                            a[i * n + j] -= q * a[si * n + j]
                            if a[i * n + j] > GUARD or a[i * n + j] < -GUARD:
                                raise OverflowError("entry exceeds kernel guard")
                    if a[i * n + si] != 0:
                        dirty = True
            if dirty:
                continue
            for j in range(si + 1, n):
                v = a[si * n + j]
                if v != 0:
                    q = _floordiv(v, p)
                    if q != 0:
                        for i in range(si, m):
                            a[i * n + j] -= q * a[i * n + si]
                            if a[i * n + j] > GUARD or a[i * n + j] < -GUARD:
                                raise OverflowError("entry exceeds kernel guard")
                    if a[si * n + j] != 0:
                        dirty = True
            if dirty:
                continue
            bi = -1
            for i in range(si + 1, m):
                off = i * n
                for j in range(si + 1, n):
                    if a[off + j] % p != 0:
                        bi = i
                        break
                if bi >= 0:
                    break
            if bi >= 0:
                for j in range(si, n):
                    a[si * n + j] += a[bi * n + j]
                    if a[si * n + j] > GUARD or a[si * n + j] < -GUARD:
                        raise OverflowError("entry exceeds kernel guard")
                continue
            diag.append(-p if p < 0 else p)
            si += 1
        return diag
    finally:
        free(a)
