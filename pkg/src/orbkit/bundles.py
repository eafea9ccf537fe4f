"""Principal bundles, the cocycle dictionary, moduli groupoids, and descent."""

from itertools import product as iproduct

from . import core
from . import functors
from .errors import (OrbkitError, GroupoidError, NonAssociative,
                     EndpointMismatch, NotACover, NotFree, NotPrincipal,
                     ShearNotBijective, PreconditionFailed, SizeLimit)

DEFAULT_SIZE_LIMIT = 10 ** 6


def structure_groupoid(structure):
    """The groupoid a FinGroup or FinGroupoid structure acts through."""
    if isinstance(structure, core.FinGroup):
        return core.delooping(structure)
    return structure


class PrincipalBundle:
    """Left structure action on a finite anchored total set over a base set.

    For a FinGroup structure act is a dense table act[g][p] and every point
    anchors at the single delooping object; for a FinGroupoid structure act
    is a dict act[(a, p)] defined exactly when anchor[p] == src(a).
    """

    def __init__(self, structure, n_base, proj, act, anchor=None,
                 point_labels=None, base_labels=None):
        self.structure = structure
        self.sgpd = structure_groupoid(structure)
        self.n_base = n_base
        self.proj = tuple(proj)
        self.n_total = len(self.proj)
        if isinstance(structure, core.FinGroup):
            self.act = tuple(tuple(row) for row in act)
            self.anchor = (0,) * self.n_total
            self._dict = {(g, p): self.act[g][p]
                          for g in range(structure.n)
                          for p in range(self.n_total)}
        else:
            self.act = dict(act)
            self.anchor = tuple(anchor)
            self._dict = self.act
        if point_labels is None:
            point_labels = range(self.n_total)
        self.point_labels = tuple(point_labels)
        self.point_index = {lab: i for i, lab in enumerate(self.point_labels)}
        if base_labels is None:
            base_labels = range(self.n_base)
        self.base_labels = tuple(base_labels)
        self._trans = None

    def __repr__(self):
        return ("PrincipalBundle(%d points over %d)"
                % (self.n_total, self.n_base))

    def apply(self, a, p):
        return self._dict[(a, p)]

    def fiber(self, t):
        return [p for p in range(self.n_total) if self.proj[p] == t]

    def translator(self, p, q):
        """The unique structure arrow carrying p to q inside its fiber."""
        if self._trans is None:
            self._trans = {(p0, q0): a for (a, p0), q0 in self._dict.items()}
        return self._trans[(p, q)]


def validate_bundle(b):
    """Check cover surjectivity, the action axioms, freeness, and the shear."""
    for p in range(b.n_total):
        if not 0 <= b.proj[p] < b.n_base:
            raise EndpointMismatch((p,), "projection leaves the base")
    fibers = [b.fiber(t) for t in range(b.n_base)]
    empty = [t for t in range(b.n_base) if not fibers[t]]
    if empty:
        raise NotACover(empty)
    s = b.sgpd
    core.validate_gset(core.GSet(s, b.n_total, b._dict, anchor=b.anchor))
    for (a, p), q in b._dict.items():
        if b.proj[q] != b.proj[p]:
            raise ShearNotBijective("action crosses fibers at point %d" % p)
        if q == p and a != s.ident[b.anchor[p]]:
            raise NotFree(b.proj[p])
    for t in range(b.n_base):
        p0 = fibers[t][0]
        orbit = {b._dict[(a, p0)] for a in s.arrows if s.src[a] == b.anchor[p0]}
        if orbit != set(fibers[t]):
            raise ShearNotBijective("fiber over %d is not one orbit" % t)
    return b


def trivial_bundle(structure, n_base, z=None):
    """Points (t, g) with g out of the anchor choice z[t]; left translation."""
    s = structure_groupoid(structure)
    if z is None:
        z = [0] * n_base
    pts = [(t, g) for t in range(n_base) for g in s.arrows if s.src[g] == z[t]]
    index = {lab: i for i, lab in enumerate(pts)}
    proj = [t for (t, g) in pts]
    if isinstance(structure, core.FinGroup):
        act = [[index[(t, structure.mul[g][h])] for (t, h) in pts]
               for g in range(structure.n)]
        return PrincipalBundle(structure, n_base, proj, act, point_labels=pts)
    anchor = [s.tgt[g] for (t, g) in pts]
    act = {(a, i): index[(t, s.comp[(a, g)])]
           for i, (t, g) in enumerate(pts)
           for a in s.arrows if s.src[a] == s.tgt[g]}
    return PrincipalBundle(structure, n_base, proj, act, anchor=anchor,
                           point_labels=pts)


class HSBundle:
    """A left principal structure action with a commuting right base action."""

    def __init__(self, bundle, h, ract):
        self.bundle = bundle
        self.h = h
        self.ract = dict(ract)

    def __repr__(self):
        return "HSBundle(%r)" % (self.bundle,)

    def rapply(self, p, a):
        return self.ract[(p, a)]


def validate_hs(hs):
    """Left principality, right unit and square laws, commutation, bijectivity."""
    b = validate_bundle(hs.bundle)
    h = hs.h
    if h.n_objects != b.n_base:
        raise PreconditionFailed("base groupoid does not match the bundle base")
    for (p, a), q in hs.ract.items():
        if h.src[a] != b.proj[p]:
            raise EndpointMismatch((p, a), "right action off its source fiber")
        if b.proj[q] != h.tgt[a]:
            raise EndpointMismatch((p, a), "right action misses its target fiber")
        if b.anchor[q] != b.anchor[p]:
            raise EndpointMismatch((p, a), "right action moves the anchor")
    for p in range(b.n_total):
        for a in h.arrows:
            if ((p, a) in hs.ract) != (h.src[a] == b.proj[p]):
                raise EndpointMismatch((p, a), "right action domain mismatch")
        if hs.rapply(p, h.ident[b.proj[p]]) != p:
            raise GroupoidError("right identity moves point %r" % (p,))
    for (a2, a1), c in h.comp.items():
        for p in b.fiber(h.src[a1]):
            if hs.rapply(hs.rapply(p, a1), a2) != hs.rapply(p, c):
                raise NonAssociative((a2, a1, p))
    for (g, p), q in b._dict.items():
        for a in h.arrows:
            if h.src[a] == b.proj[p]:
                if hs.rapply(q, a) != b.apply(g, hs.rapply(p, a)):
                    raise GroupoidError(
                        "actions fail to commute at %r" % ((g, p, a),))
    for a in h.arrows:
        image = [hs.rapply(p, a) for p in b.fiber(h.src[a])]
        if len(set(image)) != len(image) or set(image) != set(b.fiber(h.tgt[a])):
            raise ShearNotBijective("right action not bijective along %d" % a)
    return hs


class Cocycle:
    """A cover U onto the base objects with a functor restriction(H, U) -> G."""

    def __init__(self, h, cover, structure, functor, mode=None):
        self.h = h
        self.cover = tuple(cover)
        self.structure = structure
        self.sgpd = structure_groupoid(structure)
        self.restriction = core.restriction(h, self.cover)
        if isinstance(functor, functors.GroupoidFunctor):
            obj_map, arr_map = functor.obj_map, functor.arr_map
        else:
            obj_map, arr_map = functor
        self.functor = functors.GroupoidFunctor(
            self.restriction, self.sgpd, obj_map, arr_map).verify()
        observed = functors.FAITHFUL if self.functor.is_faithful() else functors.ALL
        if mode == functors.FAITHFUL and observed != functors.FAITHFUL:
            raise PreconditionFailed("cocycle functor is not faithful")
        self.mode = observed if mode is None else mode

    def __repr__(self):
        return "Cocycle(%d-point cover over %d objects)" % (
            len(self.cover), self.h.n_objects)


def identity_cocycle(h, structure, functor):
    """Reindex a plain functor H -> G as a cocycle over the identity cover."""
    cover = list(range(h.n_objects))
    r = core.restriction(h, cover)
    if isinstance(functor, functors.GroupoidFunctor):
        obj_map, arr_map = functor.obj_map, functor.arr_map
    else:
        obj_map, arr_map = functor
    lifted = [arr_map[a] for (u, a, v) in r.triples]
    return Cocycle(h, cover, structure, (list(obj_map), lifted))


def cocycle_to_hs(c):
    """Glue the trivial bundle along the cocycle transitions.

    Points are classes of pairs (u, g) with g out of the functor image of u,
    identified across each cover fiber by the identity-lift transitions;
    representatives sit at the least cover point of the fiber.
    """
    h, r, s = c.h, c.restriction, c.sgpd
    F0, F1 = c.functor.obj_map, c.functor.arr_map
    umin = {}
    for u in range(len(c.cover)):
        umin.setdefault(c.cover[u], u)

    def rep(u, g):
        u0 = umin[c.cover[u]]
        t = F1[r.triple_index[(u0, h.ident[c.cover[u]], u)]]
        return (u0, s.comp[(g, t)])

    pts = sorted({rep(u, g)
                  for u in range(len(c.cover))
                  for g in s.arrows if s.src[g] == F0[u]})
    index = {lab: i for i, lab in enumerate(pts)}
    proj = [c.cover[u] for (u, g) in pts]
    if isinstance(c.structure, core.FinGroup):
        act = [[index[(u, c.structure.mul[g][k])] for (u, k) in pts]
               for g in range(c.structure.n)]
        pb = PrincipalBundle(c.structure, h.n_objects, proj, act,
                             point_labels=pts)
    else:
        anchor = [s.tgt[g] for (u, g) in pts]
        act = {(a, i): index[(u, s.comp[(a, g)])]
               for i, (u, g) in enumerate(pts)
               for a in s.arrows if s.src[a] == s.tgt[g]}
        pb = PrincipalBundle(c.structure, h.n_objects, proj, act,
                             anchor=anchor, point_labels=pts)
    ract = {}
    for i, (u, g) in enumerate(pts):
        for a in h.arrows:
            if h.src[a] != c.cover[u]:
                continue
            v = umin[h.tgt[a]]
            tr = F1[r.triple_index[(u, a, v)]]
            ract[(i, a)] = index[(v, s.comp[(g, s.inv[tr])])]
    return validate_hs(HSBundle(pb, h, ract))


def hs_to_cocycle(hs, cover="total"):
    """Extract transition data along the least-id section per base point.

    cover="total" indexes the cover by the whole point set over its
    projection; cover="section" uses the base objects themselves.
    """
    b, h = hs.bundle, hs.h
    sec = [min(b.fiber(t)) for t in range(b.n_base)]
    if cover == "total":
        cov = list(b.proj)
    elif cover == "section":
        cov = list(range(h.n_objects))
    else:
        raise PreconditionFailed("unknown cover flavor %r" % (cover,))
    sigma = [sec[cov[u]] for u in range(len(cov))]
    r = core.restriction(h, cov)
    obj_map = [b.anchor[sigma[u]] for u in range(len(cov))]
    arr_map = [b.translator(hs.rapply(sigma[u], a), sigma[v])
               for (u, a, v) in r.triples]
    return Cocycle(h, cov, b.structure, (obj_map, arr_map))


def faithful_bundle(hs):
    """No non-identity loop of the base fixes its whole fiber."""
    b, h = hs.bundle, hs.h
    for t in range(b.n_base):
        for a in h.hom(t, t):
            if a == h.ident[t]:
                continue
            if all(hs.rapply(p, a) == p for p in b.fiber(t)):
                return False
    return True


def hs_isos(hs1, hs2, limit=None):
    """All equivariant point bijections between two bundles, in fixed order.

    A candidate is built per base point from a target of the least fiber
    point and extended by the left action, then checked against the whole
    right action; left equivariance holds by construction.
    """
    b1, b2 = hs1.bundle, hs2.bundle
    if (b1.n_base != b2.n_base or b1.n_total != b2.n_total
            or b1.sgpd.n_objects != b2.sgpd.n_objects
            or b1.sgpd.n_arrows != b2.sgpd.n_arrows
            or hs1.h.n_objects != hs2.h.n_objects
            or hs1.h.n_arrows != hs2.h.n_arrows):
        return []
    per_t = []
    for t in range(b1.n_base):
        f1, f2 = b1.fiber(t), b2.fiber(t)
        if len(f1) != len(f2):
            return []
        p0 = f1[0]
        cands = [q for q in f2 if b2.anchor[q] == b1.anchor[p0]]
        per_t.append((p0, f1, cands))
    out = []
    for choice in iproduct(*[cands for (_, _, cands) in per_t]):
        m = [None] * b1.n_total
        for t, (p0, fib, _) in enumerate(per_t):
            for p in fib:
                m[p] = b2.apply(b1.translator(p0, p), choice[t])
        if all(m[hs1.rapply(p, a)] == hs2.rapply(m[p], a)
               for (p, a) in hs1.ract):
            out.append(tuple(m))
            if limit is not None and len(out) >= limit:
                break
    return out


def hs_iso(hs1, hs2):
    """One equivariant bijection as an isomorphism certificate, or None."""
    found = hs_isos(hs1, hs2, limit=1)
    return found[0] if found else None


def moduli_groupoid(base, structure, mode=functors.ALL,
                    max_count=DEFAULT_SIZE_LIMIT):
    """Skeletal groupoid of principal structure-bundles over the base.

    Objects are bundle isomorphism classes, found by invariant hashing and
    an exhaustive iso search inside each bucket; arrows are all equivariant
    bijections between class representatives.  The returned groupoid
    carries the classifying functor from the mapping groupoid and its
    equivalence certificate.
    """
    h = core.unit_groupoid(base) if isinstance(base, int) else base
    sg = structure_groupoid(structure)
    mg = functors.mapping_groupoid(h, sg, mode=mode, max_count=max_count)
    built = [cocycle_to_hs(identity_cocycle(h, structure, f))
             for f in mg.functors]

    def invariant(hs):
        b = hs.bundle
        per = []
        for t in range(b.n_base):
            fib = b.fiber(t)
            fixed = tuple(sorted(sum(1 for p in fib if hs.rapply(p, a) == p)
                                 for a in h.hom(t, t)))
            per.append((len(fib), tuple(sorted(b.anchor[p] for p in fib)),
                        fixed))
        return tuple(per)

    reps, cls, to_rep, buckets = [], [], [], {}
    for i, hs in enumerate(built):
        key = invariant(hs)
        hit = None
        for j in buckets.get(key, []):
            m = hs_iso(hs, built[reps[j]])
            if m is not None:
                hit = (j, m)
                break
        if hit is None:
            buckets.setdefault(key, []).append(len(reps))
            cls.append(len(reps))
            to_rep.append(tuple(range(hs.bundle.n_total)))
            reps.append(i)
        else:
            cls.append(hit[0])
            to_rep.append(hit[1])
    rep_bundles = [built[i] for i in reps]
    arrows, arrow_index = [], {}
    for i in range(len(reps)):
        for j in range(len(reps)):
            for m in hs_isos(rep_bundles[i], rep_bundles[j]):
                arrow_index[(i, j, m)] = len(arrows)
                arrows.append((i, j, m))
    if len(arrows) > max_count:
        raise SizeLimit("moduli", len(arrows))
    src = [i for (i, j, m) in arrows]
    tgt = [j for (i, j, m) in arrows]
    comp = {}
    for a2, (j2, k, m2) in enumerate(arrows):
        for a1, (i, j1, m1) in enumerate(arrows):
            if j1 == j2:
                comp[(a2, a1)] = arrow_index[(i, k, tuple(m2[p] for p in m1))]
    ident = [arrow_index[(i, i, tuple(range(rep_bundles[i].bundle.n_total)))]
             for i in range(len(reps))]
    inv = []
    for (i, j, m) in arrows:
        minv = [None] * len(m)
        for p, q in enumerate(m):
            minv[q] = p
        inv.append(arrow_index[(j, i, tuple(minv))])
    moduli = core.FinGroupoid(len(reps), src, tgt, comp, ident, inv,
                              object_labels=reps, arrow_labels=arrows)
    inv_to_rep = []
    for m in to_rep:
        mi = [None] * len(m)
        for p, q in enumerate(m):
            mi[q] = p
        inv_to_rep.append(tuple(mi))
    carr = []
    for (i, j, eta) in mg.transformations:
        bi, bj = built[i].bundle, built[j].bundle
        moved = [bj.point_index[(u, sg.comp[(g, sg.inv[eta[u]])])]
                 for (u, g) in bi.point_labels]
        full = tuple(to_rep[j][moved[inv_to_rep[i][q]]]
                     for q in range(bi.n_total))
        carr.append(arrow_index[(cls[i], cls[j], full)])
    classifier = functors.GroupoidFunctor(mg, moduli, cls, carr).verify()
    certificate = functors.categorical_equivalence(classifier)
    if certificate is None:
        raise GroupoidError("classifying functor is not an equivalence")
    moduli.bundles = rep_bundles
    moduli.classes = tuple(cls)
    moduli.mapping = mg
    moduli.classifier = classifier
    moduli.certificate = certificate
    return moduli


def bgstr_check(bundle):
    """Certify that the gauge groupoid of a group bundle is one delooping."""
    b = validate_bundle(bundle)
    if not isinstance(b.structure, core.FinGroup):
        raise NotPrincipal("gauge comparison needs a group structure")
    gauge = core.gauge_groupoid(b)
    bg = core.delooping(b.structure)
    sec = [min(b.fiber(t)) for t in range(b.n_base)]
    arr = []
    for (p, q) in gauge.arrow_labels:
        # the element moving the source section to the transported target
        # section; inverted so composition reads in diagram order
        g1 = b.translator(p, sec[b.proj[p]])
        arr.append(b.translator(b.apply(g1, q), sec[b.proj[q]]))
    f = functors.GroupoidFunctor(gauge, bg, [0] * b.n_base, arr).verify()
    return functors.categorical_equivalence(f) is not None


def groupoid_equivalence(a, b, max_count=DEFAULT_SIZE_LIMIT):
    """Search for a functor a -> b that is an equivalence; certificate or None."""
    for f in functors.enumerate_functors(a, b, mode=functors.ALL,
                                         max_count=max_count):
        cert = functors.categorical_equivalence(f)
        if cert is not None:
            return cert
    return None


def _one_object_group(g):
    """Read a one-object groupoid back as the group of its arrows."""
    if g.n_objects != 1:
        raise PreconditionFailed("not a one-object groupoid")
    n = g.n_arrows
    return core.FinGroup([[g.comp[(x, y)] for y in range(n)]
                          for x in range(n)], labels=g.arrow_labels)


def flip(hs):
    """The point set as a bundle for the opposite base, acting by inverses."""
    b, h = hs.bundle, hs.h
    n_base = b.sgpd.n_objects
    if h.n_objects == 1:
        hg = _one_object_group(h)
        op = core.FinGroup([[hg.mul[y][x] for y in range(hg.n)]
                            for x in range(hg.n)], labels=hg.labels)
        rows = [[hs.rapply(p, h.inv[a]) for p in range(b.n_total)]
                for a in range(h.n_arrows)]
        return PrincipalBundle(op, n_base, b.anchor, rows,
                               point_labels=b.point_labels)
    hop = core.opposite_groupoid(h)
    act = {(a, p): hs.rapply(p, h.inv[a])
           for p in range(b.n_total)
           for a in h.arrows if h.tgt[a] == b.proj[p]}
    return PrincipalBundle(hop, n_base, b.anchor, act, anchor=b.proj,
                           point_labels=b.point_labels)


def is_biprincipal(hs):
    """Whether the flipped side is itself a principal bundle."""
    try:
        validate_bundle(flip(hs))
    except OrbkitError:
        return False
    return True


class MoritaReport:
    """Biprincipality witness with both gauge groupoids compared."""

    def __init__(self, biprincipal, gauge_left, gauge_right, certificate):
        self.biprincipal = biprincipal
        self.gauge_left = gauge_left
        self.gauge_right = gauge_right
        self.certificate = certificate
        self.ok = biprincipal and certificate is not None

    def __bool__(self):
        return self.ok


def morita_report(hs):
    """Check biprincipality and compare the two gauge groupoids."""
    if not is_biprincipal(hs):
        return MoritaReport(False, None, None, None)
    gl = core.gauge_groupoid(hs.bundle)
    gr = core.gauge_groupoid(flip(hs))
    return MoritaReport(True, gl, gr, groupoid_equivalence(gl, gr))


class GroupoidLevel:
    """Protocol adapter exposing a FinGroupoid to the holim machinery."""

    def __init__(self, g):
        self.g = g

    def objects(self):
        return iter(self.g.objects)

    def arrows(self):
        return iter(self.g.arrows)

    def hom(self, x, y):
        return iter(self.g.hom(x, y))

    def comp(self, a, b):
        return self.g.comp[(a, b)]

    def inv(self, a):
        return self.g.inv[a]

    def ident(self, x):
        return self.g.ident[x]

    def src(self, a):
        return self.g.src[a]

    def tgt(self, a):
        return self.g.tgt[a]


class PowerLevel:
    """Tuple families in a groupoid, exposed without materializing them."""

    def __init__(self, g, n):
        self.g = g
        self.n = n

    def objects(self):
        return iproduct(range(self.g.n_objects), repeat=self.n)

    def arrows(self):
        return iproduct(range(self.g.n_arrows), repeat=self.n)

    def hom(self, x, y):
        return iproduct(*[self.g.hom(xi, yi) for xi, yi in zip(x, y)])

    def comp(self, a, b):
        return tuple(self.g.comp[(ai, bi)] for ai, bi in zip(a, b))

    def inv(self, a):
        return tuple(self.g.inv[ai] for ai in a)

    def ident(self, x):
        return tuple(self.g.ident[xi] for xi in x)

    def src(self, a):
        return tuple(self.g.src[ai] for ai in a)

    def tgt(self, a):
        return tuple(self.g.tgt[ai] for ai in a)


class LevelFunctor:
    """A functor between levels given by explicit object and arrow callables."""

    def __init__(self, dom, cod, on_object, on_arrow, setmap=None, base=None):
        self.dom = dom
        self.cod = cod
        self.on_object = on_object
        self.on_arrow = on_arrow
        self.setmap = setmap
        self.base = base


def wrap_functor(f, dom_level, cod_level):
    """Expose a verified GroupoidFunctor as a level functor."""
    f.verify()
    return LevelFunctor(dom_level, cod_level,
                        lambda x: f.obj_map[x],
                        lambda a: f.arr_map[a], base=f)


def pullback_functor(setmap, dom_level, cod_level):
    """Precompose tuple families along a map of index sets."""
    sm = tuple(setmap)
    return LevelFunctor(dom_level, cod_level,
                        lambda x: tuple(x[i] for i in sm),
                        lambda a: tuple(a[i] for i in sm), setmap=sm)


def compose_level(outer, inner):
    """outer after inner; pullbacks compose to a pullback."""
    if outer.setmap is not None and inner.setmap is not None:
        combined = tuple(inner.setmap[i] for i in outer.setmap)
        return pullback_functor(combined, inner.dom, outer.cod)
    return LevelFunctor(inner.dom, outer.cod,
                        lambda x: outer.on_object(inner.on_object(x)),
                        lambda a: outer.on_arrow(inner.on_arrow(a)))


# which least-to-greatest coface composite each (upper, lower) pair equals
COMP2 = {(0, 0): 2, (0, 1): 1, (1, 0): 2, (1, 1): 0, (2, 0): 1, (2, 1): 0}


class GammaDiagram:
    """Three levels, two lower and three upper coface functors, six 2-cells.

    cells[(i, j)] maps a level-0 object x to the level-2 arrow from the
    image of x under upper[i] after lower[j] to its image under the named
    composite; omitted cells default to identities, the strict case.
    """

    def __init__(self, levels, lower, upper, composites=None, cells=None):
        self.levels = tuple(levels)
        self.lower = tuple(lower)
        self.upper = tuple(upper)
        if composites is None:
            composites = {2: compose_level(self.upper[0], self.lower[0]),
                          1: compose_level(self.upper[0], self.lower[1]),
                          0: compose_level(self.upper[1], self.lower[1])}
        self.composites = dict(composites)
        if cells is None:
            cells = {}
            l2 = self.levels[2]
            for (i, j), k in COMP2.items():
                m = self.composites[k]
                cells[(i, j)] = (
                    lambda x, m=m, l2=l2: l2.ident(m.on_object(x)))
        self.cells = dict(cells)


def validate_diagram(d):
    """Endpoints and naturality of the six 2-cells; composite coherence."""
    l0, l1, l2 = d.levels
    for f in d.lower + d.upper + tuple(d.composites.values()):
        if f.base is not None:
            f.base.verify()
    for (i, j), k in COMP2.items():
        gi, fj, m = d.upper[i], d.lower[j], d.composites[k]
        if (gi.setmap is not None and fj.setmap is not None
                and m.setmap is not None):
            combined = tuple(fj.setmap[t] for t in gi.setmap)
            if combined != m.setmap:
                raise PreconditionFailed(
                    "composite (%d,%d) disagrees with m%d" % (i, j, k))
        cell = d.cells[(i, j)]
        for x in l0.objects():
            th = cell(x)
            if (l2.src(th) != gi.on_object(fj.on_object(x))
                    or l2.tgt(th) != m.on_object(x)):
                raise EndpointMismatch(((i, j), x), "2-cell endpoints")
        for a in l0.arrows():
            x, y = l0.src(a), l0.tgt(a)
            lhs = l2.comp(cell(y), gi.on_arrow(fj.on_arrow(a)))
            rhs = l2.comp(m.on_arrow(a), cell(x))
            if lhs != rhs:
                raise PreconditionFailed(
                    "2-cell (%d,%d) is not natural" % (i, j))
    return d


def holim_gamma(d, budget=DEFAULT_SIZE_LIMIT):
    """Objects (x, a) under the lax cocycle equation; arrows strict squares.

    Both sides of the equation transport a: lower1 x -> lower0 x into the
    top level and must agree as arrows into the (1,1,2)-coordinate
    composite image of x.
    """
    l0, l1, l2 = d.levels
    f0, f1 = d.lower
    g0, g1, g2 = d.upper
    cells = d.cells
    objs = []
    for x in l0.objects():
        c00, c01 = cells[(0, 0)](x), cells[(0, 1)](x)
        c10, c11 = cells[(1, 0)](x), cells[(1, 1)](x)
        c20, c21 = cells[(2, 0)](x), cells[(2, 1)](x)
        for alpha in l1.hom(f1.on_object(x), f0.on_object(x)):
            lhs = l2.comp(c20, g2.on_arrow(alpha))
            lhs = l2.comp(l2.inv(c01), lhs)
            lhs = l2.comp(g0.on_arrow(alpha), lhs)
            lhs = l2.comp(c00, lhs)
            rhs = l2.comp(l2.inv(c11), c21)
            rhs = l2.comp(g1.on_arrow(alpha), rhs)
            rhs = l2.comp(c10, rhs)
            if lhs == rhs:
                objs.append((x, alpha))
                if len(objs) > budget:
                    raise SizeLimit("holim objects", len(objs))
    arrows = []
    for i, (xi, ai) in enumerate(objs):
        for j, (xj, aj) in enumerate(objs):
            for t in l0.hom(xi, xj):
                if l1.comp(aj, f1.on_arrow(t)) == l1.comp(f0.on_arrow(t), ai):
                    arrows.append((i, j, t))
                    if len(arrows) > budget:
                        raise SizeLimit("holim arrows", len(arrows))
    aindex = {lab: i for i, lab in enumerate(arrows)}
    src = [i for (i, j, t) in arrows]
    tgt = [j for (i, j, t) in arrows]
    comp = {}
    for a2, (j2, k, t2) in enumerate(arrows):
        for a1, (i, j1, t1) in enumerate(arrows):
            if j1 == j2:
                comp[(a2, a1)] = aindex[(i, k, l0.comp(t2, t1))]
    ident = [aindex[(i, i, l0.ident(x))] for i, (x, a) in enumerate(objs)]
    inv = [aindex[(j, i, l0.inv(t))] for (i, j, t) in arrows]
    hol = core.FinGroupoid(len(objs), src, tgt, comp, ident, inv,
                           object_labels=objs, arrow_labels=arrows)
    hol.object_index = {ob: i for i, ob in enumerate(objs)}
    hol.arrow_index = aindex
    return hol


def constant_gamma(a):
    """The strict constant diagram at a single groupoid."""
    lev = GroupoidLevel(a)
    idf = wrap_functor(functors.identity_functor(a), lev, lev)
    return GammaDiagram((lev, lev, lev), (idf, idf), (idf, idf, idf),
                        composites={0: idf, 1: idf, 2: idf})


def power_groupoid(g, n, max_size=DEFAULT_SIZE_LIMIT):
    """Families indexed by n points, as an honest FinGroupoid."""
    if g.n_objects ** n > max_size or g.n_arrows ** n > max_size:
        raise SizeLimit("power", g.n_arrows ** n)
    objs = list(iproduct(range(g.n_objects), repeat=n))
    arrs = list(iproduct(range(g.n_arrows), repeat=n))
    oi = {x: i for i, x in enumerate(objs)}
    ai = {a: i for i, a in enumerate(arrs)}
    src = [oi[tuple(g.src[x] for x in a)] for a in arrs]
    tgt = [oi[tuple(g.tgt[x] for x in a)] for a in arrs]
    comp = {}
    for i2, a2 in enumerate(arrs):
        for i1, a1 in enumerate(arrs):
            if all(g.tgt[x] == g.src[y] for x, y in zip(a1, a2)):
                comp[(i2, i1)] = ai[tuple(g.comp[(y, x)]
                                          for x, y in zip(a1, a2))]
    ident = [ai[tuple(g.ident[t] for t in x)] for x in objs]
    inv = [ai[tuple(g.inv[x] for x in a)] for a in arrs]
    pg = core.FinGroupoid(len(objs), src, tgt, comp, ident, inv,
                          object_labels=objs, arrow_labels=arrs)
    pg.object_index = oi
    pg.arrow_index = ai
    return pg


def cech_gamma(cover, g):
    """The two-level diagram of a cover with families of g as values.

    cover maps index points onto base points; level n holds families over
    the (n+1)-fold fiber products of the cover, pulled back along the
    coordinate-deleting faces.
    """
    cover = tuple(cover)
    nu = len(cover)
    pairs = [(u, v) for u in range(nu) for v in range(nu)
             if cover[u] == cover[v]]
    triples = [(u, v, w)
               for u in range(nu) for v in range(nu) for w in range(nu)
               if cover[u] == cover[v] == cover[w]]
    pi = {p: i for i, p in enumerate(pairs)}
    l0 = PowerLevel(g, nu)
    l1 = PowerLevel(g, len(pairs))
    l2 = PowerLevel(g, len(triples))
    f0 = pullback_functor([p[1] for p in pairs], l0, l1)
    f1 = pullback_functor([p[0] for p in pairs], l0, l1)
    g0 = pullback_functor([pi[(t[1], t[2])] for t in triples], l1, l2)
    g1 = pullback_functor([pi[(t[0], t[2])] for t in triples], l1, l2)
    g2 = pullback_functor([pi[(t[0], t[1])] for t in triples], l1, l2)
    m = {k: pullback_functor([t[k] for t in triples], l0, l2)
         for k in range(3)}
    d = GammaDiagram((l0, l1, l2), (f0, f1), (g0, g1, g2), composites=m)
    d.cover = cover
    d.pairs = pairs
    d.triples = triples
    return d


class DescentReport:
    """Holim of a cover diagram compared against the global families."""

    def __init__(self, diagram, holim, value, functor, certificate):
        self.diagram = diagram
        self.holim = holim
        self.value = value
        self.functor = functor
        self.certificate = certificate
        self.ok = certificate is not None

    def __bool__(self):
        return self.ok


def descent_check(cover, g, budget=DEFAULT_SIZE_LIMIT):
    """Compare global families against the holim of the cover diagram."""
    d = validate_diagram(cech_gamma(cover, g))
    hol = holim_gamma(d, budget=budget)
    n_base = max(cover) + 1
    value = power_groupoid(g, n_base, max_size=budget)
    cov = d.cover
    obj_map = []
    for x in value.object_labels:
        x0 = tuple(x[cov[u]] for u in range(len(cov)))
        alpha = d.levels[1].ident(d.lower[1].on_object(x0))
        obj_map.append(hol.object_index[(x0, alpha)])
    arr_map = []
    for idx, a in enumerate(value.arrow_labels):
        a0 = tuple(a[cov[u]] for u in range(len(cov)))
        arr_map.append(hol.arrow_index[(obj_map[value.src[idx]],
                                        obj_map[value.tgt[idx]], a0)])
    f = functors.GroupoidFunctor(value, hol, obj_map, arr_map).verify()
    return DescentReport(d, hol, value, f,
                         functors.categorical_equivalence(f))
