"""Orbit categories of group families and groupoid-valued diagrams on them.

The orbit category of a family of finite groups has one object per group
and the mapping groupoid between deloopings as each hom.  A diagram assigns
a value groupoid to every group together with a contravariant action of
every hom groupoid, and all structure laws are checked as exact table
identities.  Free diagrams and the represented diagram of a target groupoid
are built explicitly; a quotient presentation plays left adjoint to the
represented diagram, with the adjunction verified arrow for arrow and its
unit and counit certified as categorical equivalences.
"""

from . import core
from . import functors
from . import present
from .errors import (BudgetExceeded, GroupoidError, PreconditionFailed,
                     SizeLimit)

DEFAULT_BLOCK_LIMIT = 10 ** 6


def _whisker_tables(ab, bc, ac, target):
    """Precomposition tables Map(B,C) x Map(A,B) -> Map(A,C) on one target."""
    co = {}
    for pi, phi in enumerate(ab.functors):
        for ui, u in enumerate(bc.functors):
            key = u.compose(phi).key()
            if key not in ac.functor_index:
                raise PreconditionFailed(
                    "composite functor missing from mapping groupoid")
            co[(pi, ui)] = ac.functor_index[key]
    ca = {}
    # the pasted component is the second component after the first functor's
    # image of the first component
    for ai, (p1, p2, pc) in enumerate(ab.transformations):
        c = pc[0]
        for bi, (u1, u2, uc) in enumerate(bc.transformations):
            m = target.comp[(uc[0], bc.functors[u1].arr_map[c])]
            ca[(ai, bi)] = ac.arrow_index[(co[(p1, u1)], co[(p2, u2)], (m,))]
    return co, ca


class OrbCategory:
    """Groups as objects and mapping groupoids of deloopings as homs."""

    def __init__(self, family, mode, deloopings, homs, ident_obj,
                 compose_obj, compose_arr):
        self.family = family
        self.mode = mode
        self.deloopings = deloopings
        self.homs = homs
        self.ident_obj = ident_obj
        self.compose_obj = compose_obj
        self.compose_arr = compose_arr

    def hom(self, i, j):
        return self.homs[(i, j)]


def build_orb(family, mode=functors.ALL,
              max_count=functors.DEFAULT_SIZE_LIMIT):
    """Orbit category of a group family with strict composition tables."""
    family = tuple(family)
    if not family:
        raise PreconditionFailed("family must contain at least one group")
    n = len(family)
    dls = tuple(core.delooping(g) for g in family)
    homs = {}
    for i in range(n):
        for j in range(n):
            homs[(i, j)] = functors.mapping_groupoid(
                dls[i], dls[j], mode=mode, max_count=max_count)
    ident_obj = []
    for i in range(n):
        key = functors.identity_functor(dls[i]).key()
        if key not in homs[(i, i)].functor_index:
            raise PreconditionFailed("identity endomorphism missing")
        ident_obj.append(homs[(i, i)].functor_index[key])
    compose_obj, compose_arr = {}, {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                co, ca = _whisker_tables(homs[(i, j)], homs[(j, k)],
                                         homs[(i, k)], dls[k])
                compose_obj[(i, j, k)] = co
                compose_arr[(i, j, k)] = ca
    orb = OrbCategory(family, mode, dls, homs, tuple(ident_obj),
                      compose_obj, compose_arr)
    _check_strict(orb)
    return orb


def _check_strict(orb):
    """Unit, associativity, and interchange for the composition tables."""
    n = len(orb.family)
    for i in range(n):
        for j in range(n):
            h = orb.hom(i, j)
            ei = orb.hom(i, i).ident[orb.ident_obj[i]]
            ej = orb.hom(j, j).ident[orb.ident_obj[j]]
            left, right = orb.compose_arr[(i, i, j)], orb.compose_arr[(i, j, j)]
            for eta in range(h.n_arrows):
                if right[(eta, ej)] != eta or left[(ei, eta)] != eta:
                    raise GroupoidError("orbit composition is not unital")
    for i in range(n):
        for j in range(n):
            hij = orb.hom(i, j)
            for k in range(n):
                hjk = orb.hom(j, k)
                ca = orb.compose_arr[(i, j, k)]
                co = orb.compose_obj[(i, j, k)]
                hik = orb.hom(i, k)
                # identity two-cells compose to the object composite
                for p in range(hij.n_objects):
                    for q in range(hjk.n_objects):
                        if ca[(hij.ident[p], hjk.ident[q])] != \
                                hik.ident[co[(p, q)]]:
                            raise GroupoidError(
                                "composition tables disagree on identities")
                # whisker functoriality plus the two pasting splittings
                # force the full interchange law
                for (z2, z1), zc in hjk.comp.items():
                    q = hjk.src[z1]
                    for p in range(hij.n_objects):
                        e = hij.ident[p]
                        if ca[(e, zc)] != hik.comp[(ca[(e, z2)], ca[(e, z1)])]:
                            raise GroupoidError("whiskering is not functorial")
                for (e2, e1), ec in hij.comp.items():
                    for q in range(hjk.n_objects):
                        e = hjk.ident[q]
                        if ca[(ec, e)] != hik.comp[(ca[(e2, e)], ca[(e1, e)])]:
                            raise GroupoidError("whiskering is not functorial")
                for eta in range(hij.n_arrows):
                    for zeta in range(hjk.n_arrows):
                        a = ca[(eta, hjk.ident[hjk.tgt[zeta]])]
                        b = ca[(hij.ident[hij.src[eta]], zeta)]
                        if ca[(eta, zeta)] != hik.comp[(a, b)]:
                            raise GroupoidError("pasting does not interchange")
                        a = ca[(hij.ident[hij.tgt[eta]], zeta)]
                        b = ca[(eta, hjk.ident[hjk.src[zeta]])]
                        if ca[(eta, zeta)] != hik.comp[(a, b)]:
                            raise GroupoidError("pasting does not interchange")
                for l in range(n):
                    hkl = orb.hom(k, l)
                    outer = orb.compose_arr[(i, k, l)]
                    inner = orb.compose_arr[(j, k, l)]
                    other = orb.compose_arr[(i, j, l)]
                    for eta in range(hij.n_arrows):
                        for zeta in range(hjk.n_arrows):
                            first = ca[(eta, zeta)]
                            for theta in range(hkl.n_arrows):
                                if outer[(first, theta)] != \
                                        other[(eta, inner[(zeta, theta)])]:
                                    raise GroupoidError(
                                        "orbit composition not associative")


class OrbSpace:
    """Per-group value groupoids with a contravariant hom action."""

    def __init__(self, orb, values, act_obj, act_arr):
        self.orb = orb
        self.values = tuple(values)
        self.act_obj = act_obj
        self.act_arr = act_arr


def validate_orbspace(x):
    """Exact endpoint, bifunctor, unit, and mixed composition laws."""
    orb = x.orb
    n = len(orb.family)
    if len(x.values) != n:
        raise GroupoidError("one value groupoid per family member required")
    for i in range(n):
        for j in range(n):
            h, v, vi = orb.hom(i, j), x.values[j], x.values[i]
            ao, aa = x.act_obj[(i, j)], x.act_arr[(i, j)]
            if len(ao) != h.n_objects * v.n_objects or \
                    len(aa) != h.n_arrows * v.n_arrows:
                raise GroupoidError("action table has the wrong domain")
            for eta in range(h.n_arrows):
                se, te = h.src[eta], h.tgt[eta]
                for xi in range(v.n_arrows):
                    img = aa[(eta, xi)]
                    if vi.src[img] != ao[(se, v.src[xi])] or \
                            vi.tgt[img] != ao[(te, v.tgt[xi])]:
                        raise GroupoidError("action endpoints break")
                    # the two pasting splittings; with slotwise
                    # functoriality they force the joint bifunctor law
                    a = aa[(eta, v.ident[v.tgt[xi]])]
                    b = aa[(h.ident[se], xi)]
                    if img != vi.comp[(a, b)]:
                        raise GroupoidError("action does not interchange")
                    a = aa[(h.ident[te], xi)]
                    b = aa[(eta, v.ident[v.src[xi]])]
                    if img != vi.comp[(a, b)]:
                        raise GroupoidError("action does not interchange")
            for phi in range(h.n_objects):
                e = h.ident[phi]
                for xo in range(v.n_objects):
                    if aa[(e, v.ident[xo])] != vi.ident[ao[(phi, xo)]]:
                        raise GroupoidError("action drops identities")
            for (e2, e1), ec in h.comp.items():
                for xo in range(v.n_objects):
                    one = v.ident[xo]
                    if aa[(ec, one)] != vi.comp[(aa[(e2, one)],
                                                 aa[(e1, one)])]:
                        raise GroupoidError("action not functorial in homs")
            for (x2, x1), xc in v.comp.items():
                for phi in range(h.n_objects):
                    one = h.ident[phi]
                    if aa[(one, xc)] != vi.comp[(aa[(one, x2)],
                                                 aa[(one, x1)])]:
                        raise GroupoidError("action not functorial in values")
    for i in range(n):
        h = orb.hom(i, i)
        e = h.ident[orb.ident_obj[i]]
        ao, aa = x.act_obj[(i, i)], x.act_arr[(i, i)]
        for xo in range(x.values[i].n_objects):
            if ao[(orb.ident_obj[i], xo)] != xo:
                raise GroupoidError("identity hom must act as identity")
        for xi in range(x.values[i].n_arrows):
            if aa[(e, xi)] != xi:
                raise GroupoidError("identity hom must act as identity")
    # mixed composition on the identity-split instances; the bifunctor law
    # extends them to arbitrary triples
    for i in range(n):
        for j in range(n):
            hij = orb.hom(i, j)
            for k in range(n):
                hjk = orb.hom(j, k)
                v = x.values[k]
                ca = orb.compose_arr[(i, j, k)]
                co = orb.compose_obj[(i, j, k)]
                hik = orb.hom(i, k)
                aik, aij, ajk = (x.act_arr[(i, k)], x.act_arr[(i, j)],
                                 x.act_arr[(j, k)])
                for eta in range(hij.n_arrows):
                    for zeta in range(hjk.n_arrows):
                        paste = ca[(eta, zeta)]
                        for xo in range(v.n_objects):
                            one = v.ident[xo]
                            if aik[(paste, one)] != \
                                    aij[(eta, ajk[(zeta, one)])]:
                                raise GroupoidError(
                                    "action breaks mixed composition")
                for phi in range(hij.n_objects):
                    e1 = hij.ident[phi]
                    for psi in range(hjk.n_objects):
                        e2 = hjk.ident[psi]
                        e12 = hik.ident[co[(phi, psi)]]
                        for xi in range(v.n_arrows):
                            if aik[(e12, xi)] != aij[(e1, ajk[(e2, xi)])]:
                                raise GroupoidError(
                                    "action breaks mixed composition")
    return x


class OrbMap:
    """Level functors commuting strictly with both hom actions."""

    def __init__(self, dom, cod, levels):
        self.dom = dom
        self.cod = cod
        self.levels = tuple(levels)

    def key(self):
        return tuple(f.key() for f in self.levels)

    def verify(self):
        if self.dom.orb is not self.cod.orb:
            raise PreconditionFailed("map needs one orbit category")
        n = len(self.dom.orb.family)
        if len(self.levels) != n:
            raise PreconditionFailed("one level functor per group required")
        for i in range(n):
            self.levels[i].verify()
        for i in range(n):
            for j in range(n):
                h = self.dom.orb.hom(i, j)
                dx, dy = self.dom.act_arr[(i, j)], self.cod.act_arr[(i, j)]
                fi, fj = self.levels[i].arr_map, self.levels[j].arr_map
                for eta in range(h.n_arrows):
                    for xi in range(self.dom.values[j].n_arrows):
                        if fi[dx[(eta, xi)]] != dy[(eta, fj[xi])]:
                            raise GroupoidError(
                                "level functors break the action")
        return self


class FreeOrbSpace(OrbSpace):
    """Free diagram on finite per-group cell sets."""


def _free_on(orb, spaces, size_limit=DEFAULT_BLOCK_LIMIT, cls=OrbSpace):
    """Diagram of hom-by-space product blocks with precomposition action."""
    n = len(orb.family)
    spaces = tuple(spaces)
    total = 0
    for i in range(n):
        for j in range(n):
            h = orb.hom(i, j)
            total += h.n_arrows * spaces[j].n_arrows
            total += len(h.comp) * len(spaces[j].comp)
    if total > size_limit:
        raise SizeLimit("free diagram blocks", total)
    values, pieces, obj_decode, arr_decode = [], [], [], []
    for i in range(n):
        val = None
        ps, odec, adec = [], [], []
        for j in range(n):
            h = orb.hom(i, j)
            block = core.product(h, spaces[j])
            ooff = 0 if val is None else val.n_objects
            aoff = 0 if val is None else val.n_arrows
            ps.append((ooff, aoff))
            for phi in range(h.n_objects):
                for y in range(spaces[j].n_objects):
                    odec.append((j, phi, y))
            for eta in range(h.n_arrows):
                for b in range(spaces[j].n_arrows):
                    adec.append((j, eta, b))
            val = block if val is None else core.coproduct(val, block)
        values.append(val)
        pieces.append(ps)
        obj_decode.append(tuple(odec))
        arr_decode.append(tuple(adec))
    act_obj, act_arr = {}, {}
    for k in range(n):
        for i in range(n):
            h = orb.hom(k, i)
            ao, aa = {}, {}
            for chi in range(h.n_objects):
                for o, (j, phi, y) in enumerate(obj_decode[i]):
                    ao[(chi, o)] = (pieces[k][j][0] +
                                    orb.compose_obj[(k, i, j)][(chi, phi)] *
                                    spaces[j].n_objects + y)
            for theta in range(h.n_arrows):
                for a, (j, eta, b) in enumerate(arr_decode[i]):
                    aa[(theta, a)] = (pieces[k][j][1] +
                                      orb.compose_arr[(k, i, j)][(theta, eta)]
                                      * spaces[j].n_arrows + b)
            act_obj[(k, i)] = ao
            act_arr[(k, i)] = aa
    x = cls(orb, values, act_obj, act_arr)
    x.spaces = spaces
    x.pieces = pieces
    x.obj_decode = obj_decode
    x.arr_decode = arr_decode
    return validate_orbspace(x)


def free_orbspace(orb, cells):
    """Free diagram on per-group cell sets; values are hom-by-cell blocks."""
    n = len(orb.family)
    if len(cells) != n:
        raise PreconditionFailed("one cell set per group required")
    norm = tuple(tuple(range(c)) if isinstance(c, int) else tuple(c)
                 for c in cells)
    spaces = [core.unit_groupoid(len(c)) for c in norm]
    x = _free_on(orb, spaces, cls=FreeOrbSpace)
    x.cells = norm
    return x


def R_functor(target, orb, max_count=functors.DEFAULT_SIZE_LIMIT):
    """Represented diagram: each value is the mapping groupoid into target."""
    n = len(orb.family)
    values = [functors.mapping_groupoid(orb.deloopings[i], target,
                                        mode=orb.mode, max_count=max_count)
              for i in range(n)]
    act_obj, act_arr = {}, {}
    for i in range(n):
        for j in range(n):
            co, ca = _whisker_tables(orb.hom(i, j), values[j], values[i],
                                     target)
            act_obj[(i, j)] = co
            act_arr[(i, j)] = ca
    return validate_orbspace(OrbSpace(orb, values, act_obj, act_arr))


def r_map(w, orb, max_count=functors.DEFAULT_SIZE_LIMIT):
    """Postcomposition map between represented diagrams."""
    w.verify()
    xs = R_functor(w.dom, orb, max_count=max_count)
    ys = R_functor(w.cod, orb, max_count=max_count)
    n = len(orb.family)
    levels = []
    for i in range(n):
        vx, vy = xs.values[i], ys.values[i]
        om = []
        for u in vx.functors:
            key = w.compose(u).key()
            if key not in vy.functor_index:
                raise PreconditionFailed(
                    "postcomposite leaves the enumerated mapping groupoid")
            om.append(vy.functor_index[key])
        am = []
        for (u1, u2, comps) in vx.transformations:
            am.append(vy.arrow_index[(om[u1], om[u2],
                                      (w.arr_map[comps[0]],))])
        levels.append(functors.GroupoidFunctor(vx, vy, om, am))
    return OrbMap(xs, ys, levels).verify()


def orbspace_weq(f):
    """Levelwise categorical equivalence of a diagram map."""
    f.verify()
    return all(functors.categorical_equivalence(lvl) is not None
               for lvl in f.levels)


def L_functor(x, route=None):
    """Quotient presentation realizing the left adjoint on a diagram."""
    if route is None:
        route = "free" if isinstance(x, FreeOrbSpace) else "general"
    if route == "free":
        if not isinstance(x, FreeOrbSpace):
            raise PreconditionFailed("free route needs a free diagram")
        return _l_free(x)
    return _l_general(x)


def _l_free(x):
    """One delooping component per cell."""
    orb = x.orb
    n = len(orb.family)
    verts, cell_vertex = [], {}
    for j in range(n):
        for t in range(len(x.cells[j])):
            cell_vertex[(j, t)] = len(verts)
            verts.append((j, t))
    gen_src, gen_tgt, labels = [], [], []
    loop_gen, gen_info = {}, []
    for (j, t) in verts:
        grp = orb.family[j]
        for g in grp.elements:
            if g == grp.unit:
                continue
            loop_gen[(j, t, g)] = len(gen_src)
            gen_info.append(("cell", j, t, g))
            gen_src.append(cell_vertex[(j, t)])
            gen_tgt.append(cell_vertex[(j, t)])
            labels.append("l%d.%d.%d" % (j, t, g))
    rels = []
    for (j, t) in verts:
        grp = orb.family[j]
        for g in grp.elements:
            if g == grp.unit:
                continue
            for h in grp.elements:
                if h == grp.unit:
                    continue
                word = [loop_gen[(j, t, g)] + 1, loop_gen[(j, t, h)] + 1]
                c = grp.mul[h][g]
                if c != grp.unit:
                    word.append(-(loop_gen[(j, t, c)] + 1))
                rels.append(tuple(word))
    p = present.GroupoidPresentation(len(verts), gen_src, gen_tgt, rels,
                                     gen_labels=labels)
    p.route = "free"
    p.cell_list = tuple(verts)
    p.cell_vertex = cell_vertex
    p.loop_gen = loop_gen
    p.gen_info = tuple(gen_info)
    p.orbspace = x
    return p


def _l_general(x):
    """Coequalizer presentation: value groupoids glued along the action."""
    orb = x.orb
    n = len(orb.family)
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(n):
        for xo in range(x.values[i].n_objects):
            parent[(i, xo)] = (i, xo)
    for i in range(n):
        for j in range(n):
            h = orb.hom(i, j)
            ao = x.act_obj[(i, j)]
            for phi in range(h.n_objects):
                for xo in range(x.values[j].n_objects):
                    union((i, ao[(phi, xo)]), (j, xo))
    roots = sorted({find(k) for k in parent})
    vertex_of = {k: roots.index(find(k)) for k in parent}
    classes = [[] for _ in roots]
    for k in sorted(parent):
        classes[vertex_of[k]].append(k)
    gen_src, gen_tgt, labels = [], [], []
    loop_gen, arrow_gen, gen_info = {}, {}, []
    for i in range(n):
        grp, v = orb.family[i], x.values[i]
        for xo in range(v.n_objects):
            for g in grp.elements:
                if g == grp.unit:
                    continue
                loop_gen[(i, xo, g)] = len(gen_src)
                gen_info.append(("loop", i, xo, g))
                gen_src.append(vertex_of[(i, xo)])
                gen_tgt.append(vertex_of[(i, xo)])
                labels.append("l%d.%d.%d" % (i, xo, g))
        for a in range(v.n_arrows):
            if a == v.ident[v.src[a]]:
                continue
            arrow_gen[(i, a)] = len(gen_src)
            gen_info.append(("arrow", i, a))
            gen_src.append(vertex_of[(i, v.src[a])])
            gen_tgt.append(vertex_of[(i, v.tgt[a])])
            labels.append("a%d.%d" % (i, a))
    rels, seen = [], set()

    def emit(word):
        word = tuple(word)
        if word and word not in seen:
            seen.add(word)
            rels.append(word)

    # each level carries its group law, its value composition, and the
    # commutation making the level a product with the delooping
    for i in range(n):
        grp, v = orb.family[i], x.values[i]
        for xo in range(v.n_objects):
            for g in grp.elements:
                if g == grp.unit:
                    continue
                for h in grp.elements:
                    if h == grp.unit:
                        continue
                    word = [loop_gen[(i, xo, g)] + 1, loop_gen[(i, xo, h)] + 1]
                    c = grp.mul[h][g]
                    if c != grp.unit:
                        word.append(-(loop_gen[(i, xo, c)] + 1))
                    emit(word)
        for (a2, a1), c in sorted(v.comp.items()):
            if a1 == v.ident[v.src[a1]] or a2 == v.ident[v.src[a2]]:
                continue
            word = [arrow_gen[(i, a1)] + 1, arrow_gen[(i, a2)] + 1]
            if c != v.ident[v.src[c]]:
                word.append(-(arrow_gen[(i, c)] + 1))
            emit(word)
        for a in range(v.n_arrows):
            if a == v.ident[v.src[a]]:
                continue
            xo, yo = v.src[a], v.tgt[a]
            for g in grp.elements:
                if g == grp.unit:
                    continue
                emit([loop_gen[(i, xo, g)] + 1, arrow_gen[(i, a)] + 1,
                      -(loop_gen[(i, yo, g)] + 1), -(arrow_gen[(i, a)] + 1)])
    # the action identifies loops, value arrows, and hom arrows across levels
    for i in range(n):
        grpi = orb.family[i]
        vi = x.values[i]
        for j in range(n):
            h, v, grpj = orb.hom(i, j), x.values[j], orb.family[j]
            ao, aa = x.act_obj[(i, j)], x.act_arr[(i, j)]
            for phi in range(h.n_objects):
                fun = h.functors[phi]
                for xo in range(v.n_objects):
                    xpr = ao[(phi, xo)]
                    for g in grpi.elements:
                        if g == grpi.unit:
                            continue
                        c = fun.arr_map[g]
                        left = loop_gen[(i, xpr, g)]
                        if c == grpj.unit:
                            emit([left + 1])
                        elif (i, xpr, g) != (j, xo, c):
                            emit([left + 1, -(loop_gen[(j, xo, c)] + 1)])
                for a in range(v.n_arrows):
                    if a == v.ident[v.src[a]]:
                        continue
                    apr = aa[(h.ident[phi], a)]
                    if apr == vi.ident[vi.src[apr]]:
                        emit([arrow_gen[(j, a)] + 1])
                    elif (i, apr) != (j, a):
                        emit([arrow_gen[(j, a)] + 1,
                              -(arrow_gen[(i, apr)] + 1)])
            for eta in range(h.n_arrows):
                if eta == h.ident[h.src[eta]]:
                    continue
                c = h.transformations[eta][2][0]
                for xo in range(v.n_objects):
                    apr = aa[(eta, v.ident[xo])]
                    apr_id = apr == vi.ident[vi.src[apr]]
                    if apr_id and c == grpj.unit:
                        continue
                    if c == grpj.unit:
                        emit([arrow_gen[(i, apr)] + 1])
                    elif apr_id:
                        emit([loop_gen[(j, xo, c)] + 1])
                    else:
                        emit([arrow_gen[(i, apr)] + 1,
                              -(loop_gen[(j, xo, c)] + 1)])
    p = present.GroupoidPresentation(len(roots), gen_src, gen_tgt, rels,
                                     gen_labels=labels)
    p.route = "general"
    p.vertex_of = vertex_of
    p.classes = tuple(tuple(c) for c in classes)
    p.loop_gen = loop_gen
    p.arrow_gen = arrow_gen
    p.gen_info = tuple(gen_info)
    p.orbspace = x
    return p


class DiagramMappingGroupoid(core.FinGroupoid):
    """Strictly compatible diagram maps and their modifications."""

    def __init__(self, maps, transformations, src, tgt, comp, ident, inv):
        super().__init__(len(maps), src, tgt, comp, ident, inv,
                         arrow_labels=list(transformations))
        self.maps = maps
        self.map_index = {m.key(): k for k, m in enumerate(maps)}
        self.transformations = list(transformations)
        self.arrow_index = {t: k for k, t in enumerate(transformations)}


def orbspace_mapping_groupoid(x, y, max_count=functors.DEFAULT_SIZE_LIMIT):
    """Diagram maps x -> y with modification families as arrows."""
    if x.orb is not y.orb:
        raise PreconditionFailed("diagrams live over different families")
    orb = x.orb
    n = len(orb.family)

    def compatible(i, j, fi, fj):
        h = orb.hom(i, j)
        dx, dy = x.act_arr[(i, j)], y.act_arr[(i, j)]
        for eta in range(h.n_arrows):
            for xi in range(x.values[j].n_arrows):
                if fi.arr_map[dx[(eta, xi)]] != dy[(eta, fj.arr_map[xi])]:
                    return False
        return True

    cands = []
    for i in range(n):
        fs = [f for f in functors.enumerate_functors(
            x.values[i], y.values[i], mode=functors.ALL, max_count=max_count)
            if compatible(i, i, f, f)]
        cands.append(fs)
    maps = []

    def assemble(k, chosen):
        if k == n:
            maps.append(OrbMap(x, y, list(chosen)))
            if len(maps) > max_count:
                raise SizeLimit("diagram maps", len(maps))
            return
        for f in cands[k]:
            ok = True
            for i in range(k):
                if not (compatible(i, k, chosen[i], f) and
                        compatible(k, i, f, chosen[i])):
                    ok = False
                    break
            if ok:
                chosen.append(f)
                assemble(k + 1, chosen)
                chosen.pop()

    assemble(0, [])
    maps.sort(key=lambda m: m.key())

    def mod_ok(i, j, ci, cj):
        h = orb.hom(i, j)
        ao, ay = x.act_obj[(i, j)], y.act_arr[(i, j)]
        for phi in range(h.n_objects):
            e = h.ident[phi]
            for xo in range(x.values[j].n_objects):
                if ay[(e, cj[xo])] != ci[ao[(phi, xo)]]:
                    return False
        return True

    # per-level candidates pruned by the self law first, then a levelwise
    # join under the cross-level law
    trans = []
    for mi, m1 in enumerate(maps):
        for mj, m2 in enumerate(maps):
            per_level, dead = [], False
            for i in range(n):
                lvl = [t.components for t in functors.transformations_between(
                    m1.levels[i], m2.levels[i])]
                lvl = [c for c in lvl if mod_ok(i, i, c, c)]
                if not lvl:
                    dead = True
                    break
                per_level.append(lvl)
            if dead:
                continue
            partial = [()]
            for k in range(n):
                grown = []
                for got in partial:
                    for c in per_level[k]:
                        if all(mod_ok(i, k, got[i], c) and
                               mod_ok(k, i, c, got[i]) for i in range(k)):
                            grown.append(got + (c,))
                partial = grown
                if not partial:
                    break
            trans.extend((mi, mj, comps) for comps in partial)
    index = {t: k for k, t in enumerate(trans)}
    src = [t[0] for t in trans]
    tgt = [t[1] for t in trans]
    ident = []
    for mi, m in enumerate(maps):
        comps = tuple(tuple(y.values[i].ident[m.levels[i].obj_map[o]]
                            for o in range(x.values[i].n_objects))
                      for i in range(n))
        ident.append(index[(mi, mi, comps)])
    inv = []
    for (mi, mj, comps) in trans:
        flipped = tuple(tuple(y.values[i].inv[c] for c in comps[i])
                        for i in range(n))
        inv.append(index[(mj, mi, flipped)])
    comp = {}
    by_src = {}
    for k, t in enumerate(trans):
        by_src.setdefault(t[0], []).append(k)
    for k1, (m1, m2, c1) in enumerate(trans):
        for k2 in by_src[m2]:
            _, m3, c2 = trans[k2]
            comps = tuple(tuple(y.values[i].comp[(c2[i][o], c1[i][o])]
                                for o in range(x.values[i].n_objects))
                          for i in range(n))
            comp[(k2, k1)] = index[(m1, m3, comps)]
    return DiagramMappingGroupoid(maps, trans, src, tgt, comp, ident, inv)


def _vertex_at(p, i, o):
    """Presentation vertex carrying object o of value level i."""
    if p.route == "free":
        j, phi, t = p.orbspace.obj_decode[i][o]
        return p.cell_vertex[(j, t)]
    return p.vertex_of[(i, o)]


def _solution_map(p, rw, vo, gi):
    """Diagram map induced by one solver solution."""
    x = p.orbspace
    orb = x.orb
    w = rw.values[0].mapping_cod
    n = len(orb.family)
    levels = []
    for i in range(n):
        vi, ri = x.values[i], rw.values[i]
        grpi = orb.family[i]
        om = []
        for o in range(vi.n_objects):
            base = vo[_vertex_at(p, i, o)]
            arr = []
            if p.route == "free":
                j, phi, t = x.obj_decode[i][o]
                fun = orb.hom(i, j).functors[phi]
                unit = orb.family[j].unit
                for g in grpi.elements:
                    c = fun.arr_map[g]
                    arr.append(w.ident[base] if c == unit
                               else gi[p.loop_gen[(j, t, c)]])
            else:
                for g in grpi.elements:
                    arr.append(w.ident[base] if g == grpi.unit
                               else gi[p.loop_gen[(i, o, g)]])
            key = ((base,), tuple(arr))
            if key not in ri.functor_index:
                raise GroupoidError("solution image is not a level functor")
            om.append(ri.functor_index[key])
        am = []
        for a in range(vi.n_arrows):
            so, to = vi.src[a], vi.tgt[a]
            if p.route == "free":
                j, eta, t = x.arr_decode[i][a]
                c = orb.hom(i, j).transformations[eta][2][0]
                m = (w.ident[vo[_vertex_at(p, i, so)]]
                     if c == orb.family[j].unit
                     else gi[p.loop_gen[(j, t, c)]])
            else:
                if a == vi.ident[so]:
                    m = w.ident[vo[_vertex_at(p, i, so)]]
                else:
                    m = gi[p.arrow_gen[(i, a)]]
            am.append(ri.arrow_index[(om[so], om[to], (m,))])
        levels.append(functors.GroupoidFunctor(vi, ri, om, am))
    return OrbMap(x, rw, levels)


def adjunction_check(x, w, budget=present.DEFAULT_SOLVE_BUDGET,
                     max_count=functors.DEFAULT_SIZE_LIMIT):
    """Functors off the quotient presentation match diagram maps exactly."""
    orb = x.orb
    if orb.mode != functors.ALL:
        raise PreconditionFailed("comparison needs the all-functors mode")
    p = L_functor(x)
    sol = present.hom_solver(p, w, normalize=False, budget=budget,
                             max_count=max_count)
    g1 = sol.transformation_groupoid(budget=budget)
    rw = R_functor(w, orb, max_count=max_count)
    g2 = orbspace_mapping_groupoid(x, rw, max_count=max_count)
    if g1.n_objects != g2.n_objects or g1.n_arrows != g2.n_arrows:
        return False
    n = len(orb.family)
    dic, maps = [], []
    for (vo, gi) in sol.assignments:
        m = _solution_map(p, rw, vo, gi).verify()
        k = g2.map_index.get(m.key())
        if k is None:
            return False
        dic.append(k)
        maps.append(m)
    if len(set(dic)) != len(dic):
        return False
    adic = []
    for (f1, f2, fam) in g1.arrow_labels:
        comps = []
        for i in range(n):
            lvl = []
            ri = rw.values[i]
            for o in range(x.values[i].n_objects):
                m = fam[_vertex_at(p, i, o)]
                key = (maps[f1].levels[i].obj_map[o],
                       maps[f2].levels[i].obj_map[o], (m,))
                if key not in ri.arrow_index:
                    return False
                lvl.append(ri.arrow_index[key])
            comps.append(tuple(lvl))
        k = g2.arrow_index.get((dic[f1], dic[f2], tuple(comps)))
        if k is None:
            return False
        adic.append(k)
    if len(set(adic)) != len(adic):
        return False
    for k, m in enumerate(g1.ident):
        if adic[m] != g2.ident[dic[k]]:
            return False
    for k, m in enumerate(g1.inv):
        if adic[m] != g2.inv[adic[k]]:
            return False
    for (a2, a1), c in g1.comp.items():
        if g2.comp[(adic[a2], adic[a1])] != adic[c]:
            return False
    return True


def unit_check(x, budget=present.DEFAULT_COSET_BUDGET,
               max_count=functors.DEFAULT_SIZE_LIMIT):
    """The comparison of a free diagram into its rebuilt representation."""
    if not isinstance(x, FreeOrbSpace):
        raise PreconditionFailed("unit is certified on free diagrams")
    orb = x.orb
    n = len(orb.family)
    p = L_functor(x)
    m = present.materialize(p, budget=budget)
    rlx = R_functor(m, orb, max_count=max_count)
    levels = []
    for i in range(n):
        vi, ri = x.values[i], rlx.values[i]
        grpi = orb.family[i]
        om = []
        for o in range(vi.n_objects):
            j, phi, t = x.obj_decode[i][o]
            vtx = p.cell_vertex[(j, t)]
            fun = orb.hom(i, j).functors[phi]
            unit = orb.family[j].unit
            arr = []
            for g in grpi.elements:
                c = fun.arr_map[g]
                arr.append(m.ident[vtx] if c == unit
                           else m.gen_arrow(p.loop_gen[(j, t, c)]))
            om.append(ri.functor_index[((vtx,), tuple(arr))])
        am = []
        for a in range(vi.n_arrows):
            j, eta, t = x.arr_decode[i][a]
            vtx = p.cell_vertex[(j, t)]
            c = orb.hom(i, j).transformations[eta][2][0]
            ma = (m.ident[vtx] if c == orb.family[j].unit
                  else m.gen_arrow(p.loop_gen[(j, t, c)]))
            am.append(ri.arrow_index[(om[vi.src[a]], om[vi.tgt[a]], (ma,))])
        levels.append(functors.GroupoidFunctor(vi, ri, om, am))
    eta_map = OrbMap(x, rlx, levels).verify()
    return all(functors.categorical_equivalence(lvl) is not None
               for lvl in eta_map.levels)


def _functor_from_generators(m, p, obj_img, gen_img, target):
    """Extend generator images along a materialized presentation."""
    arr_img = [None] * m.n_arrows
    todo = []
    for v in range(m.n_objects):
        a = m.ident[v]
        arr_img[a] = target.ident[obj_img[v]]
        todo.append(a)
    by_src = {}
    for g in range(p.n_gens):
        ga = m.gen_arrow(g)
        by_src.setdefault(m.src[ga], []).append((ga, gen_img[g]))
        by_src.setdefault(m.tgt[ga], []).append((m.inv[ga],
                                                 target.inv[gen_img[g]]))
    while todo:
        a = todo.pop()
        for (ga, wimg) in by_src.get(m.tgt[a], ()):
            b = m.comp[(ga, a)]
            img = target.comp[(wimg, arr_img[a])]
            if arr_img[b] is None:
                arr_img[b] = img
                todo.append(b)
            elif arr_img[b] != img:
                raise GroupoidError("generator images are inconsistent")
    if any(v is None for v in arr_img):
        raise GroupoidError("generators do not span the groupoid")
    f = functors.GroupoidFunctor(m, target, list(obj_img), arr_img)
    f.verify()
    return f


def counit_check(target, orb, budget=present.DEFAULT_COSET_BUDGET,
                 max_count=functors.DEFAULT_SIZE_LIMIT):
    """The comparison from the rebuilt representation onto the target."""
    x = R_functor(target, orb, max_count=max_count)
    p = L_functor(x)
    m = present.materialize(p, budget=budget)
    obj_img = []
    for cls in p.classes:
        imgs = {x.values[i].functors[o].obj_map[0] for (i, o) in cls}
        if len(imgs) != 1:
            raise GroupoidError("merged vertices map to several objects")
        obj_img.append(imgs.pop())
    gen_img = []
    for info in p.gen_info:
        if info[0] == "loop":
            _, i, o, g = info
            gen_img.append(x.values[i].functors[o].arr_map[g])
        else:
            _, i, a = info
            gen_img.append(x.values[i].transformations[a][2][0])
    eps = _functor_from_generators(m, p, obj_img, gen_img, target)
    return functors.categorical_equivalence(eps) is not None


def coequalizer_check(x, size_limit=DEFAULT_BLOCK_LIMIT):
    """Split coequalizer identities for the free resolution of a diagram."""
    orb = x.orb
    n = len(orb.family)
    fx = _free_on(orb, x.values, size_limit)
    f2x = _free_on(orb, fx.values, size_limit)
    e_arrow = [orb.hom(i, i).ident[orb.ident_obj[i]] for i in range(n)]
    mu, s, amaps, bmaps, tmaps = [], [], [], [], []
    for i in range(n):
        om = [x.act_obj[(i, j)][(phi, y)] for (j, phi, y) in fx.obj_decode[i]]
        am = [x.act_arr[(i, j)][(eta, b)] for (j, eta, b) in fx.arr_decode[i]]
        f = functors.GroupoidFunctor(fx.values[i], x.values[i], om, am)
        f.verify()
        mu.append(f)
    for i in range(n):
        ooff, aoff = fx.pieces[i][i]
        ny, na = x.values[i].n_objects, x.values[i].n_arrows
        om = [ooff + orb.ident_obj[i] * ny + y for y in range(ny)]
        am = [aoff + e_arrow[i] * na + a for a in range(na)]
        f = functors.GroupoidFunctor(x.values[i], fx.values[i], om, am)
        f.verify()
        s.append(f)
    for i in range(n):
        om, am, om2, am2 = [], [], [], []
        for (j, phi, y) in f2x.obj_decode[i]:
            ny = x.values[j].n_objects
            om.append(fx.pieces[i][j][0] + phi * ny + mu[j].obj_map[y])
            k, psi, z = fx.obj_decode[j][y]
            nz = x.values[k].n_objects
            om2.append(fx.pieces[i][k][0] +
                       orb.compose_obj[(i, j, k)][(phi, psi)] * nz + z)
        for (j, eta, b) in f2x.arr_decode[i]:
            na = x.values[j].n_arrows
            am.append(fx.pieces[i][j][1] + eta * na + mu[j].arr_map[b])
            k, zeta, c = fx.arr_decode[j][b]
            nc = x.values[k].n_arrows
            am2.append(fx.pieces[i][k][1] +
                       orb.compose_arr[(i, j, k)][(eta, zeta)] * nc + c)
        f = functors.GroupoidFunctor(f2x.values[i], fx.values[i], om, am)
        f.verify()
        amaps.append(f)
        f = functors.GroupoidFunctor(f2x.values[i], fx.values[i], om2, am2)
        f.verify()
        bmaps.append(f)
        ooff, aoff = f2x.pieces[i][i]
        ny, na = fx.values[i].n_objects, fx.values[i].n_arrows
        om3 = [ooff + orb.ident_obj[i] * ny + o for o in range(ny)]
        am3 = [aoff + e_arrow[i] * na + a for a in range(na)]
        f = functors.GroupoidFunctor(fx.values[i], f2x.values[i], om3, am3)
        f.verify()
        tmaps.append(f)
    OrbMap(fx, x, mu).verify()
    OrbMap(f2x, fx, amaps).verify()
    OrbMap(f2x, fx, bmaps).verify()
    for i in range(n):
        idx = functors.identity_functor(x.values[i]).key()
        idf = functors.identity_functor(fx.values[i]).key()
        if mu[i].compose(s[i]).key() != idx:
            return False
        if mu[i].compose(amaps[i]).key() != mu[i].compose(bmaps[i]).key():
            return False
        if bmaps[i].compose(tmaps[i]).key() != idf:
            return False
        if amaps[i].compose(tmaps[i]).key() != s[i].compose(mu[i]).key():
            return False
    return True
