"""Finite groupoids, finite groups, anchored actions, and basic constructions.

Everything lives on dense integer ids.  The composite comp[(a, b)] is defined
exactly when src[a] == tgt[b] and means "b first, then a"; group tables follow
the same convention, mul[g][h] acts by h first when elements act on the left.
Constructors enumerate in lexicographic input order so rebuilt values are
identical run to run.
"""

from .errors import (
    BadInverse,
    EndpointMismatch,
    GroupoidError,
    Indeterminate,
    MissingIdentity,
    NonAssociative,
    NotACover,
    NotFree,
    NotPrincipal,
)

DEFAULT_NODE_BUDGET = 10**6


class FinGroupoid:
    """Finite groupoid given by total src/tgt, partial comp, ident and inv tables."""

    def __init__(self, n_objects, src, tgt, comp, ident, inv,
                 object_labels=None, arrow_labels=None):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.n_arrows = len(self.src)
        self.comp = dict(comp)
        self.ident = tuple(ident)
        self.inv = tuple(inv)
        if object_labels is None:
            object_labels = range(n_objects)
        if arrow_labels is None:
            arrow_labels = range(self.n_arrows)
        self.object_labels = tuple(object_labels)
        self.arrow_labels = tuple(arrow_labels)
        self._hom = None
        self._aut_order = None

    def __repr__(self):
        return "FinGroupoid(%d objects, %d arrows)" % (self.n_objects, self.n_arrows)

    @property
    def objects(self):
        return range(self.n_objects)

    @property
    def arrows(self):
        return range(self.n_arrows)

    def compose(self, a, b):
        try:
            return self.comp[(a, b)]
        except KeyError:
            raise EndpointMismatch((a, b), "composite undefined")

    def identity(self, x):
        return self.ident[x]

    def inverse(self, a):
        return self.inv[a]

    def _hom_table(self):
        if self._hom is None:
            hom = {}
            for a in range(self.n_arrows):
                hom.setdefault((self.src[a], self.tgt[a]), []).append(a)
            self._hom = {k: tuple(v) for k, v in hom.items()}
        return self._hom

    def hom(self, x, y):
        """Arrows x -> y in increasing id order."""
        return self._hom_table().get((x, y), ())

    def arrows_from(self, x):
        """All arrows with source x, in increasing id order."""
        if not hasattr(self, "_from"):
            table = {}
            for a in range(self.n_arrows):
                table.setdefault(self.src[a], []).append(a)
            self._from = {k: tuple(v) for k, v in table.items()}
        return self._from.get(x, ())

    def aut(self, x):
        return self.hom(x, x)

    def aut_group(self, x):
        """Automorphisms at x as a FinGroup; labels are the arrow ids."""
        auts = self.aut(x)
        index = {a: i for i, a in enumerate(auts)}
        mul = [[index[self.comp[(a, b)]] for b in auts] for a in auts]
        return FinGroup(mul, labels=auts)

    def components(self):
        """Partition of objects by zigzags of arrows, sorted by least member."""
        parent = list(range(self.n_objects))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(self.n_arrows):
            rx, ry = find(self.src[a]), find(self.tgt[a])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        groups = {}
        for x in range(self.n_objects):
            groups.setdefault(find(x), []).append(x)
        return [tuple(groups[r]) for r in sorted(groups)]

    def object_signature(self, x):
        """Iso-invariant fingerprint of an object, used to prune searches."""
        hom = self._hom_table()
        out = sorted(len(v) for (s, _), v in hom.items() if s == x)
        into = sorted(len(v) for (_, t), v in hom.items() if t == x)
        return (len(self.aut(x)), tuple(out), tuple(into))


def validate_groupoid(g):
    """Check every groupoid axiom on g, returning g; raises the first failure.

    Check order: endpoint coherence of comp, identities, inverses,
    associativity.
    """
    if not isinstance(g, FinGroupoid):
        raise GroupoidError("expected a FinGroupoid, got %r" % (g,))
    n_obj, n_arr = g.n_objects, g.n_arrows
    for a in range(n_arr):
        if not (0 <= g.src[a] < n_obj and 0 <= g.tgt[a] < n_obj):
            raise EndpointMismatch((a,), "src/tgt out of range")
    for (a, b), c in g.comp.items():
        if not (0 <= a < n_arr and 0 <= b < n_arr and 0 <= c < n_arr):
            raise EndpointMismatch((a, b), "composite out of range")
        if g.src[a] != g.tgt[b]:
            raise EndpointMismatch((a, b), "composite defined on non-composable pair")
        if g.src[c] != g.src[b] or g.tgt[c] != g.tgt[a]:
            raise EndpointMismatch((a, b), "composite has wrong endpoints")
    for a in range(n_arr):
        for b in range(n_arr):
            if g.src[a] == g.tgt[b] and (a, b) not in g.comp:
                raise EndpointMismatch((a, b), "composable pair without composite")
    if len(g.ident) != n_obj:
        raise MissingIdentity(len(g.ident))
    for x in range(n_obj):
        e = g.ident[x]
        if not (0 <= e < n_arr) or g.src[e] != x or g.tgt[e] != x:
            raise MissingIdentity(x)
        for a in range(n_arr):
            if g.src[a] == x and g.comp[(a, e)] != a:
                raise MissingIdentity(x)
            if g.tgt[a] == x and g.comp[(e, a)] != a:
                raise MissingIdentity(x)
    if len(g.inv) != n_arr:
        raise BadInverse(len(g.inv))
    for a in range(n_arr):
        b = g.inv[a]
        if not (0 <= b < n_arr) or g.src[b] != g.tgt[a] or g.tgt[b] != g.src[a]:
            raise BadInverse(a)
        if g.comp[(b, a)] != g.ident[g.src[a]] or g.comp[(a, b)] != g.ident[g.tgt[a]]:
            raise BadInverse(a)
    by_src = {}
    for b in range(n_arr):
        by_src.setdefault(g.src[b], []).append(b)
    for b in range(n_arr):
        for a in by_src.get(g.tgt[b], ()):
            ab = g.comp[(a, b)]
            for c in by_src.get(g.tgt[a], ()):
                if g.comp[(c, ab)] != g.comp[(g.comp[(c, a)], b)]:
                    raise NonAssociative((c, a, b))
    return g


class FinGroup:
    """Finite group as a multiplication table mul[g][h] over ids 0..n-1.

    validate=False skips the cubic associativity sweep; identities and
    inverses are always checked.
    """

    def __init__(self, mul, labels=None, name=None, validate=True):
        self.n = len(mul)
        self.mul = tuple(tuple(row) for row in mul)
        self.name = name
        if labels is None:
            labels = range(self.n)
        self.labels = tuple(labels)
        for row in self.mul:
            if len(row) != self.n or any(not (0 <= v < self.n) for v in row):
                raise GroupoidError("multiplication table is not square over ids")
        unit = None
        for e in range(self.n):
            if all(self.mul[e][g] == g and self.mul[g][e] == g for g in range(self.n)):
                unit = e
                break
        if unit is None:
            raise MissingIdentity("group unit")
        self.unit = unit
        inv = [None] * self.n
        for g in range(self.n):
            for h in range(self.n):
                if self.mul[g][h] == unit and self.mul[h][g] == unit:
                    inv[g] = h
                    break
            if inv[g] is None:
                raise BadInverse(g)
        self.inv = tuple(inv)
        if validate:
            for a in range(self.n):
                for b in range(self.n):
                    for c in range(self.n):
                        if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                            raise NonAssociative((a, b, c))

    def __repr__(self):
        return "FinGroup(%s, order %d)" % (self.name or "?", self.n)

    @property
    def elements(self):
        return range(self.n)

    def op(self, g, h):
        return self.mul[g][h]

    def conj(self, g, h):
        """h^{-1} g h."""
        return self.mul[self.mul[self.inv[h]][g]][h]

    def order_of(self, g):
        k, x = 1, g
        while x != self.unit:
            x = self.mul[x][g]
            k += 1
        return k

    def subgroup_closure(self, gens):
        """Smallest subgroup containing gens, as a sorted tuple of ids."""
        seen = {self.unit}
        frontier = [self.unit]
        gens = sorted(set(gens) | {self.unit})
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.mul[x][g], self.mul[g][x], self.inv[x]):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return tuple(sorted(seen))

    def is_subgroup(self, elems):
        s = set(elems)
        if self.unit not in s:
            return False
        return all(self.mul[a][b] in s and self.inv[a] in s for a in s for b in s)

    def subgroup_as_group(self, elems):
        """The subgroup on elems as its own FinGroup; labels are parent ids."""
        elems = tuple(sorted(elems))
        index = {g: i for i, g in enumerate(elems)}
        mul = [[index[self.mul[a][b]] for b in elems] for a in elems]
        return FinGroup(mul, labels=elems)

    def left_cosets(self, sub):
        """Left cosets gH as sorted tuples, listed by least representative."""
        sub = tuple(sorted(sub))
        seen = set()
        cosets = []
        for g in range(self.n):
            if g in seen:
                continue
            coset = tuple(sorted(self.mul[g][h] for h in sub))
            seen.update(coset)
            cosets.append(coset)
        return cosets


def trivial_group():
    return FinGroup([[0]], name="1")


def cyclic_group(n):
    mul = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FinGroup(mul, name="Z/%d" % n)


def _perms(n):
    if n == 0:
        return [()]
    out = []
    for p in _perms(n - 1):
        for i in range(n):
            out.append(p[:i] + (n - 1,) + p[i:])
    return sorted(out)


def symmetric_group(n):
    """S_n on 0..n-1; labels are permutation tuples, composed h first."""
    perms = _perms(n)
    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FinGroup(mul, labels=perms, name="S%d" % n)


def product_group(a, b):
    n = a.n * b.n
    mul = [[0] * n for _ in range(n)]
    for g1 in range(a.n):
        for g2 in range(b.n):
            for h1 in range(a.n):
                for h2 in range(b.n):
                    mul[g1 * b.n + g2][h1 * b.n + h2] = a.mul[g1][h1] * b.n + b.mul[g2][h2]
    labels = [(a.labels[g1], b.labels[g2]) for g1 in range(a.n) for g2 in range(b.n)]
    name = None
    if a.name and b.name:
        name = "%sx%s" % (a.name, b.name)
    return FinGroup(mul, labels=labels, name=name)


class GSet:
    """Left action of a group or groupoid on a finite anchored carrier.

    For a FinGroup the whole carrier sits over the one implicit object and
    act is a full table act[g][x].  For a FinGroupoid the anchor assigns each
    carrier point an object and act[(a, x)] is defined exactly when
    anchor[x] == src(a), landing over tgt(a).
    """

    def __init__(self, structure, n_carrier, act, anchor=None, labels=None):
        self.structure = structure
        self.n_carrier = n_carrier
        if labels is None:
            labels = range(n_carrier)
        self.labels = tuple(labels)
        if isinstance(structure, FinGroup):
            self.anchor = None
            self.act = tuple(tuple(row) for row in act)
        else:
            self.anchor = tuple(anchor)
            self.act = dict(act)

    def apply(self, g, x):
        if self.anchor is None:
            return self.act[g][x]
        return self.act[(g, x)]


def coset_gset(group, sub):
    """Left translation action on left cosets of sub, as a GSet."""
    cosets = group.left_cosets(sub)
    index = {c: i for i, c in enumerate(cosets)}
    act = [[index[tuple(sorted(group.mul[g][h] for h in cosets[i]))]
            for i in range(len(cosets))] for g in range(group.n)]
    return GSet(group, len(cosets), act, labels=cosets)


def validate_gset(xs):
    """Check the unit and associativity squares of an action."""
    s = xs.structure
    if isinstance(s, FinGroup):
        for x in range(xs.n_carrier):
            if xs.act[s.unit][x] != x:
                raise GroupoidError("unit acts nontrivially at %r" % (x,))
        for g in range(s.n):
            for h in range(s.n):
                for x in range(xs.n_carrier):
                    if xs.act[s.mul[g][h]][x] != xs.act[g][xs.act[h][x]]:
                        raise NonAssociative((g, h, x))
        return xs
    for x in range(xs.n_carrier):
        e = s.ident[xs.anchor[x]]
        if xs.act.get((e, x)) != x:
            raise GroupoidError("identity acts nontrivially at %r" % (x,))
    for (a, x), y in xs.act.items():
        if s.src[a] != xs.anchor[x] or s.tgt[a] != xs.anchor[y]:
            raise EndpointMismatch((a, x), "action leaves its anchor")
    for a in range(s.n_arrows):
        for x in range(xs.n_carrier):
            defined = (a, x) in xs.act
            if defined != (s.src[a] == xs.anchor[x]):
                raise EndpointMismatch((a, x), "action domain mismatch")
    for (b, x), y in xs.act.items():
        for a in range(s.n_arrows):
            if s.src[a] == s.tgt[b]:
                if xs.act[(s.comp[(a, b)], x)] != xs.act[(a, y)]:
                    raise NonAssociative((a, b, x))
    return xs


def delooping(group):
    """One object, one arrow per group element."""
    n = group.n
    comp = {(a, b): group.mul[a][b] for a in range(n) for b in range(n)}
    return FinGroupoid(
        1, [0] * n, [0] * n, comp, [group.unit], group.inv,
        object_labels=["*"], arrow_labels=group.labels,
    )


def unit_groupoid(n, labels=None):
    """Only identity arrows."""
    comp = {(x, x): x for x in range(n)}
    return FinGroupoid(n, range(n), range(n), comp, range(n), range(n),
                       object_labels=labels, arrow_labels=labels)


def pair_groupoid(n, labels=None):
    """Exactly one arrow (u, v): u -> v between any two of n objects."""
    if labels is None:
        labels = range(n)
    src = [u for u in range(n) for _ in range(n)]
    tgt = [v for _ in range(n) for v in range(n)]
    comp = {}
    for u in range(n):
        for v in range(n):
            for w in range(n):
                comp[(v * n + w, u * n + v)] = u * n + w
    ident = [u * n + u for u in range(n)]
    inv = [(a % n) * n + a // n for a in range(n * n)]
    arrow_labels = [(labels[u], labels[v]) for u in range(n) for v in range(n)]
    return FinGroupoid(n, src, tgt, comp, ident, inv,
                       object_labels=labels, arrow_labels=arrow_labels)


def restriction(g, cover, n_cover=None, cover_labels=None):
    """Pull g back along a surjection cover: U -> objects of g.

    Arrows are triples (u, a, v) with a: cover[u] -> cover[v], enumerated in
    lexicographic (u, a, v) order.
    """
    cover = tuple(cover)
    if n_cover is None:
        n_cover = len(cover)
    missing = sorted(set(g.objects) - set(cover))
    if missing:
        raise NotACover(missing)
    triples = []
    index = {}
    for u in range(n_cover):
        for a in g.arrows:
            if g.src[a] != cover[u]:
                continue
            for v in range(n_cover):
                if g.tgt[a] == cover[v]:
                    index[(u, a, v)] = len(triples)
                    triples.append((u, a, v))
    src = [t[0] for t in triples]
    tgt = [t[2] for t in triples]
    comp = {}
    for i, (v1, b, w) in enumerate(triples):
        for j, (u, a, v2) in enumerate(triples):
            if v1 == v2:
                comp[(i, j)] = index[(u, g.comp[(b, a)], w)]
    ident = [index[(u, g.ident[cover[u]], u)] for u in range(n_cover)]
    inv = [index[(v, g.inv[a], u)] for (u, a, v) in triples]
    if cover_labels is None:
        cover_labels = range(n_cover)
    r = FinGroupoid(n_cover, src, tgt, comp, ident, inv,
                    object_labels=cover_labels,
                    arrow_labels=[(cover_labels[u], g.arrow_labels[a], cover_labels[v])
                                  for (u, a, v) in triples])
    r.cover = cover
    r.triples = tuple(triples)
    r.triple_index = index
    return r


def action_groupoid(structure, xs):
    """Arrows (g, x): x -> g.x for a left action, in lexicographic (g, x) order."""
    if isinstance(structure, FinGroup):
        group = structure
        n_x = xs.n_carrier
        pairs = [(g, x) for g in range(group.n) for x in range(n_x)]
        index = {p: i for i, p in enumerate(pairs)}
        src = [x for (_, x) in pairs]
        tgt = [xs.act[g][x] for (g, x) in pairs]
        comp = {}
        for (h, y) in pairs:
            for (g, x) in pairs:
                if xs.act[g][x] == y:
                    comp[(index[(h, y)], index[(g, x)])] = index[(group.mul[h][g], x)]
        ident = [index[(group.unit, x)] for x in range(n_x)]
        inv = [index[(group.inv[g], xs.act[g][x])] for (g, x) in pairs]
        labels = [(group.labels[g], xs.labels[x]) for (g, x) in pairs]
        return FinGroupoid(n_x, src, tgt, comp, ident, inv,
                           object_labels=xs.labels, arrow_labels=labels)
    g0 = structure
    pairs = [(a, x) for a in g0.arrows for x in range(xs.n_carrier)
             if g0.src[a] == xs.anchor[x]]
    index = {p: i for i, p in enumerate(pairs)}
    src = [x for (_, x) in pairs]
    tgt = [xs.act[(a, x)] for (a, x) in pairs]
    comp = {}
    for i, (b, y) in enumerate(pairs):
        for j, (a, x) in enumerate(pairs):
            if xs.act[(a, x)] == y:
                comp[(i, j)] = index[(g0.comp[(b, a)], x)]
    ident = [index[(g0.ident[xs.anchor[x]], x)] for x in range(xs.n_carrier)]
    inv = [index[(g0.inv[a], xs.act[(a, x)])] for (a, x) in pairs]
    labels = [(g0.arrow_labels[a], xs.labels[x]) for (a, x) in pairs]
    return FinGroupoid(xs.n_carrier, src, tgt, comp, ident, inv,
                       object_labels=xs.labels, arrow_labels=labels)


def translation_groupoid(g):
    """g acting on its own arrows by postcomposition; level n counts shift by one."""
    act = {}
    for a in g.arrows:
        for x in g.arrows:
            if g.src[a] == g.tgt[x]:
                act[(a, x)] = g.comp[(a, x)]
    xs = GSet(g, g.n_arrows, act, anchor=g.tgt, labels=g.arrow_labels)
    return action_groupoid(g, xs)


def product(g, h):
    """Componentwise product groupoid; ids are row-major pairs."""
    no = g.n_objects * h.n_objects
    pairs_a = [(a, b) for a in g.arrows for b in h.arrows]

    def oid(x, y):
        return x * h.n_objects + y

    def aid(a, b):
        return a * h.n_arrows + b

    src = [oid(g.src[a], h.src[b]) for (a, b) in pairs_a]
    tgt = [oid(g.tgt[a], h.tgt[b]) for (a, b) in pairs_a]
    comp = {}
    for (a1, b1), c1 in g.comp.items():
        for (a2, b2), c2 in h.comp.items():
            comp[(aid(a1, a2), aid(b1, b2))] = aid(c1, c2)
    ident = [aid(g.ident[x], h.ident[y]) for x in g.objects for y in h.objects]
    inv = [aid(g.inv[a], h.inv[b]) for (a, b) in pairs_a]
    olabels = [(g.object_labels[x], h.object_labels[y]) for x in g.objects for y in h.objects]
    alabels = [(g.arrow_labels[a], h.arrow_labels[b]) for (a, b) in pairs_a]
    return FinGroupoid(no, src, tgt, comp, ident, inv,
                       object_labels=olabels, arrow_labels=alabels)


def coproduct(g, h):
    """Disjoint union; g's ids first."""
    src = list(g.src) + [x + g.n_objects for x in h.src]
    tgt = list(g.tgt) + [x + g.n_objects for x in h.tgt]
    comp = dict(g.comp)
    for (a, b), c in h.comp.items():
        comp[(a + g.n_arrows, b + g.n_arrows)] = c + g.n_arrows
    ident = list(g.ident) + [a + g.n_arrows for a in h.ident]
    inv = list(g.inv) + [a + g.n_arrows for a in h.inv]
    return FinGroupoid(g.n_objects + h.n_objects, src, tgt, comp, ident, inv,
                       object_labels=list(g.object_labels) + list(h.object_labels),
                       arrow_labels=list(g.arrow_labels) + list(h.arrow_labels))


def opposite_groupoid(g):
    """Same arrows with src and tgt exchanged; composition reversed."""
    comp = {(a, b): c for (b, a), c in g.comp.items()}
    return FinGroupoid(g.n_objects, g.tgt, g.src, comp, g.ident, g.inv,
                       object_labels=g.object_labels,
                       arrow_labels=g.arrow_labels)


def quotient_groupoid(g, obj_perms, arr_perms):
    """Quotient of g by a free action through automorphisms.

    obj_perms/arr_perms list one permutation pair per acting element; the
    identity permutation must be included.  Freeness on objects is required
    so composition descends; orbit representatives are least ids.
    """
    for op, ap in zip(obj_perms, arr_perms):
        for a in g.arrows:
            if g.src[ap[a]] != op[g.src[a]] or g.tgt[ap[a]] != op[g.tgt[a]]:
                raise EndpointMismatch((a,), "permutation is not a functor")
        if any(op[x] == x for x in g.objects) and any(op[x] != x for x in g.objects):
            raise NotFree([x for x in g.objects if op[x] == x][:1])

    def orbits(n, perms):
        rep = list(range(n))
        changed = True
        while changed:
            changed = False
            for p in perms:
                for x in range(n):
                    m = min(rep[x], rep[p[x]])
                    if rep[x] != m or rep[p[x]] != m:
                        rep[x] = rep[p[x]] = m
                        changed = True
        reps = sorted(set(rep))
        return rep, reps

    orep, oreps = orbits(g.n_objects, obj_perms)
    arep, areps = orbits(g.n_arrows, arr_perms)
    oindex = {r: i for i, r in enumerate(oreps)}
    aindex = {r: i for i, r in enumerate(areps)}
    src = [oindex[orep[g.src[r]]] for r in areps]
    tgt = [oindex[orep[g.tgt[r]]] for r in areps]
    comp = {}
    for i, a in enumerate(areps):
        for j, b in enumerate(areps):
            if src[i] != tgt[j]:
                continue
            aligned = None
            for op, ap in zip(obj_perms, arr_perms):
                if op[g.tgt[b]] == g.src[a]:
                    aligned = ap[b]
                    break
            if aligned is None:
                raise NotFree((a, b))
            comp[(i, j)] = aindex[arep[g.comp[(a, aligned)]]]
    ident = [aindex[arep[g.ident[r]]] for r in oreps]
    inv = [aindex[arep[g.inv[r]]] for r in areps]
    return FinGroupoid(len(oreps), src, tgt, comp, ident, inv,
                       object_labels=[g.object_labels[r] for r in oreps],
                       arrow_labels=[g.arrow_labels[r] for r in areps])


def gauge_groupoid(bundle):
    """Objects the base, arrows orbits [(p, q)] of the diagonal action.

    bundle must carry a FinGroup structure acting freely and fiberwise
    transitively on total points over proj; the unique aligning element
    realizes composition.
    """
    group = bundle.structure
    if not isinstance(group, FinGroup):
        raise NotPrincipal("gauge needs a group structure")
    n_p, n_t = bundle.n_total, bundle.n_base
    proj, act = bundle.proj, bundle.act
    for g in range(group.n):
        for p in range(n_p):
            if proj[act[g][p]] != proj[p]:
                raise NotPrincipal("action moves points across fibers")
            if g != group.unit and act[g][p] == p:
                raise NotPrincipal("action not free at point %d" % p)
    fibers = {}
    for p in range(n_p):
        fibers.setdefault(proj[p], []).append(p)
    for t in range(n_t):
        fib = fibers.get(t, [])
        if len(fib) != group.n:
            raise NotPrincipal("fiber over %d has size %d, need %d"
                               % (t, len(fib), group.n))
        orbit = {act[g][fib[0]] for g in range(group.n)}
        if orbit != set(fib):
            raise NotPrincipal("fiber over %d is not a single orbit" % t)

    def orbit_rep(p, q):
        return min((act[g][p], act[g][q]) for g in range(group.n))

    reps = []
    index = {}
    for p in range(n_p):
        for q in range(n_p):
            r = orbit_rep(p, q)
            if r not in index:
                index[r] = len(reps)
                reps.append(r)
    src = [proj[p] for (p, q) in reps]
    tgt = [proj[q] for (p, q) in reps]
    comp = {}
    for i, (q1, r) in enumerate(reps):
        for j, (p, q) in enumerate(reps):
            if proj[q1] != proj[q]:
                continue
            g = next(g for g in range(group.n) if act[g][q1] == q)
            comp[(i, j)] = index[orbit_rep(p, act[g][r])]
    ident = []
    for t in range(n_t):
        p = min(fibers[t])
        ident.append(index[orbit_rep(p, p)])
    inv = [index[orbit_rep(q, p)] for (p, q) in reps]
    return FinGroupoid(n_t, src, tgt, comp, ident, inv,
                       object_labels=getattr(bundle, "base_labels", None),
                       arrow_labels=reps)


class Iso:
    """A groupoid isomorphism as explicit object and arrow bijections."""

    def __init__(self, obj_map, arr_map):
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)

    def inverse(self):
        obj = [0] * len(self.obj_map)
        arr = [0] * len(self.arr_map)
        for x, y in enumerate(self.obj_map):
            obj[y] = x
        for a, b in enumerate(self.arr_map):
            arr[b] = a
        return Iso(obj, arr)

    def __repr__(self):
        return "Iso(%d objects, %d arrows)" % (len(self.obj_map), len(self.arr_map))


class _Budget(Exception):
    pass


def iso_check(g, h, budget=None):
    """Exhaustive isomorphism search with invariant pruning.

    Returns an Iso, None when refuted, or Indeterminate past the node budget.
    """
    if budget is None:
        budget = DEFAULT_NODE_BUDGET
    if g.n_objects != h.n_objects or g.n_arrows != h.n_arrows:
        return None
    gsig = [g.object_signature(x) for x in g.objects]
    hsig = [h.object_signature(x) for x in h.objects]
    if sorted(gsig) != sorted(hsig):
        return None

    order = sorted(g.objects, key=lambda x: (gsig[x], x))
    nodes = 0

    obj_map = [None] * g.n_objects
    used_obj = [False] * h.n_objects

    def extend_arrows():
        """Biject arrows respecting the fixed object map, by propagation."""
        arr_map = [None] * g.n_arrows
        used = [False] * h.n_arrows
        for x in g.objects:
            e, e2 = g.ident[x], h.ident[obj_map[x]]
            arr_map[e] = e2
            used[e2] = True

        def assign(a, b, trail):
            nonlocal nodes
            queue = [(a, b)]
            while queue:
                a, b = queue.pop()
                if arr_map[a] is not None:
                    if arr_map[a] != b:
                        return False
                    continue
                if used[b]:
                    return False
                if (h.src[b], h.tgt[b]) != (obj_map[g.src[a]], obj_map[g.tgt[a]]):
                    return False
                nodes += 1
                arr_map[a] = b
                used[b] = True
                trail.append((a, b))
                queue.append((g.inv[a], h.inv[b]))
                for c in range(g.n_arrows):
                    mc = arr_map[c]
                    if mc is None:
                        continue
                    if g.src[c] == g.tgt[a]:
                        queue.append((g.comp[(c, a)], h.comp[(mc, b)]))
                    if g.src[a] == g.tgt[c]:
                        queue.append((g.comp[(a, c)], h.comp[(b, mc)]))
            return True

        def solve(i):
            nonlocal nodes
            if nodes > budget:
                raise _Budget()
            while i < g.n_arrows and arr_map[i] is not None:
                i += 1
            if i == g.n_arrows:
                return True
            want = (obj_map[g.src[i]], obj_map[g.tgt[i]])
            for b in h.hom(*want):
                if used[b]:
                    continue
                trail = []
                if assign(i, b, trail) and solve(i + 1):
                    return True
                for (a2, b2) in trail:
                    arr_map[a2] = None
                    used[b2] = False
            return False

        if solve(0):
            return arr_map
        return None

    def place(k):
        nonlocal nodes
        if nodes > budget:
            raise _Budget()
        if k == len(order):
            got = extend_arrows()
            return got
        x = order[k]
        for y in h.objects:
            if used_obj[y] or hsig[y] != gsig[x]:
                continue
            ok = all(
                len(g.hom(x, x2)) == len(h.hom(y, obj_map[x2]))
                and len(g.hom(x2, x)) == len(h.hom(obj_map[x2], y))
                for x2 in order[:k]
            )
            if not ok:
                continue
            nodes += 1
            obj_map[x] = y
            used_obj[y] = True
            got = place(k + 1)
            if got is not None:
                return got
            obj_map[x] = None
            used_obj[y] = False
        return None

    try:
        arr_map = place(0)
    except _Budget:
        return Indeterminate("iso_check", nodes)
    if arr_map is None:
        return None
    return Iso(obj_map, arr_map)
