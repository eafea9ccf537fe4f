"""Integer Smith normal form and mod-p rank for boundary matrices.

The pure routine works on Python ints, so it is exact at any size.  When the
compiled kernel built from _smithc.pyx is importable it is tried first; it
computes over int64 and raises OverflowError past its guard, at which point
the caller falls back to the pure routine on an untouched copy.
"""

try:
    from . import _smithc
except ImportError:
    _smithc = None

HAVE_COMPILED = _smithc is not None


def smith_diagonal_python(mat):
    """Nonzero diagonal of the Smith form, as positive ints with d1 | d2 | ...

    mat is a list of equal-length rows; it is not modified.
    """
    a = [list(row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    for row in a:
        if len(row) != n:
            raise ValueError("ragged matrix")
    diag = []
    si = 0
    while si < m and si < n:
        best = None
        bestabs = None
        for i in range(si, m):
            ai = a[i]
            for j in range(si, n):
                v = ai[j]
                if v:
                    av = -v if v < 0 else v
                    if bestabs is None or av < bestabs:
                        best = (i, j)
                        bestabs = av
        if best is None:
            break
        bi, bj = best
        if bi != si:
            a[si], a[bi] = a[bi], a[si]
        if bj != si:
            for row in a:
                row[si], row[bj] = row[bj], row[si]
        p = a[si][si]
        dirty = False
        for i in range(si + 1, m):
            v = a[i][si]
            if v:
                q = v // p
                if q:
                    ai, ps = a[i], a[si]
                    for j in range(si, n):
                        ai[j] -= q * ps[j]
                if a[i][si]:
                    dirty = True
        if dirty:
            continue
        for j in range(si + 1, n):
            v = a[si][j]
            if v:
                q = v // p
                if q:
                    for i in range(si, m):
                        a[i][j] -= q * a[i][si]
                if a[si][j]:
                    dirty = True
        if dirty:
            continue
        offender = None
        for i in range(si + 1, m):
            ai = a[i]
            for j in range(si + 1, n):
                if ai[j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            ps, orow = a[si], a[offender]
            for j in range(si, n):
                ps[j] += orow[j]
            continue
        diag.append(-p if p < 0 else p)
        si += 1
    return diag


def elementary_divisors(mat, use_compiled=None):
    """Smith diagonal of mat, preferring the compiled kernel when present."""
    rows = [[int(v) for v in row] for row in mat]
    if not rows or not rows[0]:
        return []
    want = HAVE_COMPILED if use_compiled is None else use_compiled
    if want and _smithc is not None:
        try:
            return list(_smithc.smith_diagonal(rows))
        except OverflowError:
            pass
    return smith_diagonal_python(rows)


def integer_rank(mat):
    return len(elementary_divisors(mat))


def rank_mod_p(mat, p):
    """Rank of mat over GF(p) by Gaussian elimination."""
    if p < 2:
        raise ValueError("p must be at least 2")
    a = [[v % p for v in row] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    col = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], p - 2, p) if _is_prime(p) else _modinv(a[rank][col], p)
        arow = a[rank]
        for j in range(col, n):
            arow[j] = arow[j] * inv % p
        for i in range(m):
            if i != rank and a[i][col]:
                f = a[i][col]
                ai = a[i]
                for j in range(col, n):
                    ai[j] = (ai[j] - f * arow[j]) % p
        rank += 1
        if rank == m:
            break
    return rank


def _is_prime(p):
    if p < 4:
        return p > 1
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _modinv(v, p):
    g, x = _egcd(v % p, p)
    if g != 1:
        raise ValueError("not invertible mod %d" % p)
    return x % p


def _egcd(a, b):
    x0, x1 = 1, 0
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
    return a, x0
