"""Fat nerve chains, integer homology, and homotopy invariants.

Chains at level n are n-tuples of composable arrows (a1, ..., an) tracing
x0 -> x1 -> ... -> xn; no degeneracy identifications are made, so identity
arrows stay in the complex and level sizes multiply.  Face 0 drops the first
arrow, face n the last, and inner face i composes a_i with a_{i+1}.
"""

import numpy as np

from . import core
from .errors import PreconditionFailed, SizeLimit
from .smith import elementary_divisors, rank_mod_p

DEFAULT_CHAIN_BUDGET = 10**5


class NerveLevels:
    """Composable-arrow chains of a groupoid, one list per level."""

    def __init__(self, groupoid, chains, index):
        self.groupoid = groupoid
        self.chains = chains
        self.index = index

    @property
    def top(self):
        return len(self.chains) - 1

    def size(self, n):
        return len(self.chains[n])

    def face(self, n, i, chain):
        g = self.groupoid
        if n == 1:
            a = chain[0]
            return g.tgt[a] if i == 0 else g.src[a]
        if i == 0:
            return chain[1:]
        if i == n:
            return chain[:-1]
        return chain[:i - 1] + (g.comp[(chain[i], chain[i - 1])],) + chain[i + 1:]


def nerve(g, top, budget=DEFAULT_CHAIN_BUDGET):
    """Chains of g up to level top, in lexicographic extension order."""
    chains = [list(g.objects)]
    ends = [list(g.objects)]
    index = [{x: x for x in g.objects}]
    for n in range(1, top + 1):
        cur, cend = [], []
        for c, e in zip(chains[-1], ends[-1]):
            base = () if n == 1 else c
            for a in g.arrows_from(e):
                cur.append(base + (a,))
                cend.append(g.tgt[a])
                if len(cur) > budget:
                    raise SizeLimit("nerve")
        chains.append(cur)
        ends.append(cend)
        index.append({c: k for k, c in enumerate(cur)})
    return NerveLevels(g, chains, index)


class ChainComplex:
    """Integer boundary matrices of a levelwise basis, with d.d = 0 checked."""

    def __init__(self, sizes, boundaries):
        self.sizes = list(sizes)
        self.boundaries = boundaries
        for n in range(2, len(self.sizes)):
            if self.sizes[n] == 0 or self.sizes[n - 2] == 0:
                continue
            prev = np.array(self.boundaries[n - 1], dtype=np.int64)
            cur = np.array(self.boundaries[n], dtype=np.int64)
            if np.any(prev @ cur):
                raise PreconditionFailed("boundary squared is nonzero at level %d" % n)

    @property
    def top(self):
        return len(self.sizes) - 1


def _complex_from_faces(sizes, chain_lists, index_lists, face_fn):
    boundaries = {}
    for n in range(1, len(sizes)):
        rows = [[0] * sizes[n] for _ in range(sizes[n - 1])]
        idx = index_lists[n - 1]
        for j, c in enumerate(chain_lists[n]):
            sign = 1
            for i in range(n + 1):
                rows[idx[face_fn(n, i, c)]][j] += sign
                sign = -sign
        boundaries[n] = rows
    return ChainComplex(sizes, boundaries)


def chain_complex(nv):
    """Alternating-sum boundary matrices of a nerve."""
    sizes = [nv.size(n) for n in range(nv.top + 1)]
    return _complex_from_faces(sizes, nv.chains, nv.index, nv.face)


class HomologyTable:
    """Ranks and torsion coefficients, one row per degree."""

    def __init__(self, rows):
        self.rows = [(n, r, tuple(t)) for (n, r, t) in rows]

    def __eq__(self, other):
        return isinstance(other, HomologyTable) and self.rows == other.rows

    def __repr__(self):
        return "HomologyTable(%r)" % (self.rows,)

    def format(self):
        return "\n".join("%d: rank %d, torsion [%s]"
                         % (n, r, ",".join(str(d) for d in t))
                         for (n, r, t) in self.rows)


def homology(cx, p=None):
    """Homology in degrees 0..top-1; integral with torsion, or mod-p ranks."""
    rows = []
    ranks = {0: 0}
    divisors = {}
    for n in range(1, cx.top + 1):
        mat = cx.boundaries[n]
        if not mat or not mat[0]:
            ranks[n] = 0
            divisors[n] = []
            continue
        if p is None:
            divs = elementary_divisors(mat)
            ranks[n] = len(divs)
            divisors[n] = divs
        else:
            ranks[n] = rank_mod_p(mat, p)
            divisors[n] = []
    for n in range(cx.top):
        rank = cx.sizes[n] - ranks[n] - ranks.get(n + 1, 0)
        torsion = tuple(d for d in divisors.get(n + 1, []) if d != 1) if p is None else ()
        rows.append((n, rank, torsion))
    return HomologyTable(rows)


def pi0(g):
    """Connected components of the groupoid."""
    return g.components()


def pi1(g, x):
    """Automorphism group at the base object x."""
    return g.aut_group(x)


class WeakEquivalenceReport:
    def __init__(self, ok, reason=""):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "WeakEquivalenceReport(ok=%r%s)" % (
            self.ok, ", " + self.reason if self.reason else "")


def weak_equivalence_check(f):
    """Bijection on components and isomorphisms on automorphism groups."""
    dom, cod = f.dom, f.cod
    dcomps, ccomps = dom.components(), cod.components()
    comp_of = {}
    for i, comp in enumerate(ccomps):
        for z in comp:
            comp_of[z] = i
    if len(dcomps) != len(ccomps):
        return WeakEquivalenceReport(False, "component counts differ")
    hit = [comp_of[f.obj_map[comp[0]]] for comp in dcomps]
    if len(set(hit)) != len(ccomps):
        return WeakEquivalenceReport(False, "not bijective on components")
    for comp in dcomps:
        x0 = comp[0]
        auts = dom.aut(x0)
        image = {f.arr_map[a] for a in auts}
        if len(image) != len(auts):
            return WeakEquivalenceReport(False, "not injective on aut(%d)" % x0)
        if len(image) != len(cod.aut(f.obj_map[x0])):
            return WeakEquivalenceReport(False, "not surjective on aut(%d)" % x0)
    return WeakEquivalenceReport(True)


def _borel_complex(group, xs, top, budget=DEFAULT_CHAIN_BUDGET):
    """Quotient of (chains of pair(group)) x carrier by the diagonal action.

    Orbit representatives normalize the leading group coordinate to the unit,
    leaving tuples (h1, ..., hn, x); deleting the leading vertex renormalizes
    by h1.
    """
    n_x = xs.n_carrier
    chains = [list(range(n_x))]
    index = [{x: x for x in range(n_x)}]
    for n in range(1, top + 1):
        cur = []
        for c in chains[-1]:
            prev = (c,) if n == 1 else c
            hs, x = prev[:-1], prev[-1]
            for h in group.elements:
                cur.append(hs + (h, x))
                if len(cur) > budget:
                    raise SizeLimit("borel")
        # extension above appends the new letter before x, giving (h1..hn, x)
        chains.append(cur)
        index.append({c: k for k, c in enumerate(cur)})

    def face(n, i, chain):
        hs, x = chain[:-1], chain[-1]
        if i == 0:
            g0 = group.inv[hs[0]]
            moved = tuple(group.mul[g0][h] for h in hs[1:])
            out = moved + (xs.act[g0][x],)
            return out if n > 1 else out[0]
        out = hs[:i - 1] + hs[i:] + (x,)
        return out if n > 1 else out[0]

    sizes = [len(c) for c in chains]
    return _complex_from_faces(sizes, chains, index, face)


class QuotientReport:
    def __init__(self, ok, action_table, borel_table):
        self.ok = ok
        self.action_table = action_table
        self.borel_table = borel_table

    def __bool__(self):
        return self.ok


def homotopy_quotient_check(group, xs, top=3, budget=DEFAULT_CHAIN_BUDGET, p=None):
    """Same homology from the action groupoid nerve and the quotient model."""
    gpd = core.action_groupoid(group, xs)
    t1 = homology(chain_complex(nerve(gpd, top, budget)), p=p)
    t2 = homology(_borel_complex(group, xs, top, budget), p=p)
    return QuotientReport(t1 == t2, t1, t2)
