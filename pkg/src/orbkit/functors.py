"""Functors, natural transformations, and mapping groupoids.

A functor out of a connected groupoid is parametrized by the image of a base
object, a group homomorphism out of its automorphism group, and images of one
star arrow per remaining object; transformations are parametrized by one
component at each base object commuting with the two homomorphisms.  Mapping
groupoids come in two modes: "all" takes every functor, "faithful" only those
injective on every hom-set.
"""

from itertools import product as iproduct

from . import core
from .errors import PreconditionFailed, SizeLimit

ALL = "all"
FAITHFUL = "faithful"
MODES = (ALL, FAITHFUL)

DEFAULT_SIZE_LIMIT = 10**5


class GroupoidFunctor:
    """A functor as explicit object and arrow maps."""

    def __init__(self, dom, cod, obj_map, arr_map):
        self.dom = dom
        self.cod = cod
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)

    def __repr__(self):
        return "GroupoidFunctor(%r -> %r)" % (self.dom, self.cod)

    def key(self):
        return (self.obj_map, self.arr_map)

    def verify(self):
        d, c = self.dom, self.cod
        for a in d.arrows:
            b = self.arr_map[a]
            if c.src[b] != self.obj_map[d.src[a]] or c.tgt[b] != self.obj_map[d.tgt[a]]:
                raise PreconditionFailed("functor breaks endpoints at arrow %d" % a)
        for x in d.objects:
            if self.arr_map[d.ident[x]] != c.ident[self.obj_map[x]]:
                raise PreconditionFailed("functor breaks identity at object %d" % x)
        for (a, b), ab in d.comp.items():
            if c.comp[(self.arr_map[a], self.arr_map[b])] != self.arr_map[ab]:
                raise PreconditionFailed("functor breaks composition at (%d, %d)" % (a, b))
        return self

    def compose(self, other):
        """self after other."""
        if other.cod is not self.dom and other.cod != self.dom:
            raise PreconditionFailed("functors do not align for composition")
        return GroupoidFunctor(
            other.dom, self.cod,
            [self.obj_map[x] for x in other.obj_map],
            [self.arr_map[a] for a in other.arr_map],
        )

    def is_faithful(self):
        d = self.dom
        for x in d.objects:
            for y in d.objects:
                hs = d.hom(x, y)
                if len({self.arr_map[a] for a in hs}) != len(hs):
                    return False
        return True

    def is_full(self):
        d, c = self.dom, self.cod
        for x in d.objects:
            for y in d.objects:
                image = {self.arr_map[a] for a in d.hom(x, y)}
                if len(image) != len(c.hom(self.obj_map[x], self.obj_map[y])):
                    return False
        return True

    def is_essentially_surjective(self):
        c = self.cod
        comp_of = {}
        comps = c.components()
        for i, comp in enumerate(comps):
            for z in comp:
                comp_of[z] = i
        reached = {comp_of[self.obj_map[x]] for x in self.dom.objects}
        return reached == set(range(len(comps)))


def identity_functor(g):
    return GroupoidFunctor(g, g, range(g.n_objects), range(g.n_arrows))


class NatTransformation:
    """Natural transformation source => target with one component per object."""

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = tuple(components)

    def verify(self):
        f, g = self.source, self.target
        d, c = f.dom, f.cod
        for x in d.objects:
            e = self.components[x]
            if c.src[e] != f.obj_map[x] or c.tgt[e] != g.obj_map[x]:
                raise PreconditionFailed("component at %d has wrong endpoints" % x)
        for a in d.arrows:
            x, y = d.src[a], d.tgt[a]
            lhs = c.comp[(g.arr_map[a], self.components[x])]
            rhs = c.comp[(self.components[y], f.arr_map[a])]
            if lhs != rhs:
                raise PreconditionFailed("naturality fails at arrow %d" % a)
        return self

    def then(self, later):
        """Vertical composite: self first, later after."""
        c = self.source.cod
        comps = [c.comp[(later.components[x], self.components[x])]
                 for x in self.source.dom.objects]
        return NatTransformation(self.source, later.target, comps)

    def inverse(self):
        c = self.source.cod
        return NatTransformation(self.target, self.source,
                                 [c.inv[e] for e in self.components])


def whisker_functor(f, eta):
    """f . eta: apply f after both sides of eta."""
    comps = [f.arr_map[e] for e in eta.components]
    return NatTransformation(f.compose(eta.source), f.compose(eta.target), comps)


def whisker_along(eta, e):
    """eta . e: restrict eta along a functor e into its domain."""
    comps = [eta.components[e.obj_map[x]] for x in e.dom.objects]
    return NatTransformation(eta.source.compose(e), eta.target.compose(e), comps)


class _SkelComponent:
    def __init__(self, objects, base, tree, aut, arrows):
        self.objects = objects
        self.base = base
        self.tree = tree
        self.aut = aut
        self.arrows = arrows
        self.aut_index = {a: i for i, a in enumerate(aut.labels)}


def component_skeleton(g):
    """Per component: base object, star of arrows from it, base automorphisms."""
    if getattr(g, "_skel", None) is None:
        skel = []
        arrows_by_comp = {}
        comp_of = {}
        comps = g.components()
        for i, comp in enumerate(comps):
            for x in comp:
                comp_of[x] = i
            arrows_by_comp[i] = []
        for a in g.arrows:
            arrows_by_comp[comp_of[g.src[a]]].append(a)
        for i, comp in enumerate(comps):
            x0 = comp[0]
            tree = {x0: g.ident[x0]}
            for x in comp[1:]:
                tree[x] = g.hom(x0, x)[0]
            skel.append(_SkelComponent(comp, x0, tree, g.aut_group(x0),
                                       tuple(arrows_by_comp[i])))
        g._skel = skel
    return g._skel


def generating_sequence(group):
    """Greedy minimal-id generating elements."""
    gens = []
    closure = {group.unit}
    while len(closure) < group.n:
        x = min(set(group.elements) - closure)
        gens.append(x)
        closure = set(group.subgroup_closure(gens))
    return gens


def _expression_words(group, gens):
    word = {group.unit: ()}
    frontier = [group.unit]
    while frontier:
        x = frontier.pop(0)
        for i, gv in enumerate(gens):
            y = group.mul[x][gv]
            if y not in word:
                word[y] = word[x] + (i,)
                frontier.append(y)
    return [word[x] for x in range(group.n)]


def group_homs(a, b):
    """All homomorphisms a -> b as image tuples, sorted."""
    gens = generating_sequence(a)
    if not gens:
        return [tuple([b.unit] * a.n)]
    words = _expression_words(a, gens)
    orders = [a.order_of(g) for g in gens]
    cands = [[h for h in b.elements if orders[i] % b.order_of(h) == 0]
             for i in range(len(gens))]
    out = []
    for imgs in iproduct(*cands):
        phi = []
        for x in a.elements:
            acc = b.unit
            for i in words[x]:
                acc = b.mul[acc][imgs[i]]
            phi.append(acc)
        if all(phi[a.mul[x][y]] == b.mul[phi[x]][phi[y]]
               for x in a.elements for y in a.elements):
            out.append(tuple(phi))
    return sorted(out)


def enumerate_functors(h, g, mode=ALL, max_count=DEFAULT_SIZE_LIMIT):
    """All functors h -> g in canonical order; "faithful" keeps hom-injective ones."""
    if mode not in MODES:
        raise PreconditionFailed("unknown mode %r" % (mode,))
    skel = component_skeleton(h)
    per_comp = []
    for data in skel:
        frags = []
        aut = data.aut
        n_others = len(data.objects) - 1
        for z in g.objects:
            gz = g.aut_group(z)
            homs = group_homs(aut, gz)
            if mode == FAITHFUL:
                homs = [p for p in homs if len(set(p)) == aut.n]
            if not homs:
                continue
            star_pool = g.arrows_from(z)
            if n_others and not star_pool:
                continue
            if len(homs) * len(star_pool) ** n_others > max_count:
                raise SizeLimit("enumerate_functors")
            others = [x for x in data.objects if x != data.base]
            for psi in homs:
                for star in iproduct(*([star_pool] * n_others)):
                    timg = {data.base: g.ident[z]}
                    for x, m in zip(others, star):
                        timg[x] = m
                    obj = {x: g.tgt[timg[x]] for x in data.objects}
                    arr = {}
                    for a in data.arrows:
                        x, y = h.src[a], h.tgt[a]
                        loop = h.comp[(h.inv[data.tree[y]], h.comp[(a, data.tree[x])])]
                        img = gz.labels[psi[data.aut_index[loop]]]
                        arr[a] = g.comp[(timg[y], g.comp[(img, g.inv[timg[x]])])]
                    frags.append((obj, arr))
        if not frags:
            return []
        per_comp.append(frags)
        total = 1
        for fr in per_comp:
            total *= len(fr)
        if total > max_count:
            raise SizeLimit("enumerate_functors")
    out = []
    for combo in iproduct(*per_comp):
        obj_map = [0] * h.n_objects
        arr_map = [0] * h.n_arrows
        for obj, arr in combo:
            for x, v in obj.items():
                obj_map[x] = v
            for a, v in arr.items():
                arr_map[a] = v
        out.append(GroupoidFunctor(h, g, obj_map, arr_map).verify())
    out.sort(key=lambda f: f.key())
    return out


class MappingGroupoid(core.FinGroupoid):
    """Groupoid of functors h -> g and natural transformations between them.

    Extra fields: functors, functor_index (key -> object id), transformations
    (object pair plus component tuple per arrow), arrow_index, mode, dom, cod.
    """


def transformations_between(f1, f2):
    """All natural transformations f1 => f2, in canonical component order."""
    h, g = f1.dom, f1.cod
    skel = component_skeleton(h)
    per_comp = []
    for data in skel:
        x0 = data.base
        cands = []
        for e in g.hom(f1.obj_map[x0], f2.obj_map[x0]):
            if all(g.comp[(f2.arr_map[l], e)] == g.comp[(e, f1.arr_map[l])]
                   for l in data.aut.labels):
                cands.append(e)
        if not cands:
            return []
        per_comp.append((data, cands))
    out = []
    for bases in iproduct(*[c for (_, c) in per_comp]):
        components = [None] * h.n_objects
        for (data, _), e in zip(per_comp, bases):
            for x in data.objects:
                t = data.tree[x]
                components[x] = g.comp[(f2.arr_map[t], g.comp[(e, g.inv[f1.arr_map[t]])])]
        out.append(NatTransformation(f1, f2, components).verify())
    return out


def mapping_groupoid(h, g, mode=ALL, max_count=DEFAULT_SIZE_LIMIT):
    """The groupoid Map(h, g) in the given mode."""
    functors = enumerate_functors(h, g, mode=mode, max_count=max_count)
    trans = []
    for i, f1 in enumerate(functors):
        for j, f2 in enumerate(functors):
            for eta in transformations_between(f1, f2):
                trans.append((i, j, eta.components))
                if len(trans) > max_count:
                    raise SizeLimit("mapping_groupoid")
    index = {t: k for k, t in enumerate(trans)}
    n = len(functors)
    src = [t[0] for t in trans]
    tgt = [t[1] for t in trans]
    comp = {}
    gq = g
    for k2, (j2, l, mu) in enumerate(trans):
        for k1, (i, j1, eta) in enumerate(trans):
            if j2 != j1:
                continue
            comps = tuple(gq.comp[(m, e)] for m, e in zip(mu, eta))
            comp[(k2, k1)] = index[(i, l, comps)]
    ident = []
    for i, f in enumerate(functors):
        ident.append(index[(i, i, tuple(gq.ident[z] for z in f.obj_map))])
    inv = [index[(j, i, tuple(gq.inv[e] for e in eta))] for (i, j, eta) in trans]
    m = MappingGroupoid(n, src, tgt, comp, ident, inv,
                        object_labels=[f.key() for f in functors],
                        arrow_labels=trans)
    m.functors = functors
    m.functor_index = {f.key(): i for i, f in enumerate(functors)}
    m.transformations = trans
    m.arrow_index = index
    m.mode = mode
    m.mapping_dom = h
    m.mapping_cod = g
    return m


def conj_action_model(hgrp, ggrp, mode=ALL):
    """Hom set with g acting by pointwise conjugation, as an action groupoid."""
    homs = group_homs(hgrp, ggrp)
    if mode == FAITHFUL:
        homs = [p for p in homs if len(set(p)) == hgrp.n]
    index = {p: i for i, p in enumerate(homs)}
    act = []
    for g in ggrp.elements:
        row = []
        for p in homs:
            moved = tuple(ggrp.mul[ggrp.mul[g][p[x]]][ggrp.inv[g]] for x in hgrp.elements)
            row.append(index[moved])
        act.append(row)
    xs = core.GSet(ggrp, len(homs), act, labels=homs)
    return core.action_groupoid(ggrp, xs)


class EquivalenceCertificate:
    """Quasi-inverse, unit, and counit certifying a categorical equivalence."""

    def __init__(self, functor, inverse, unit, counit):
        self.functor = functor
        self.inverse = inverse
        self.unit = unit
        self.counit = counit


def categorical_equivalence(f):
    """Certificate that f is fully faithful and essentially surjective, or None."""
    dom, cod = f.dom, f.cod
    ffinv = {}
    for x in dom.objects:
        for y in dom.objects:
            hs = dom.hom(x, y)
            image = {f.arr_map[a]: a for a in hs}
            if len(image) != len(hs) or len(hs) != len(cod.hom(f.obj_map[x], f.obj_map[y])):
                return None
            ffinv[(x, y)] = image
    gobj = []
    counit_comp = []
    for z in cod.objects:
        found = None
        for x in dom.objects:
            hs = cod.hom(f.obj_map[x], z)
            if hs:
                found = (x, hs[0])
                break
        if found is None:
            return None
        gobj.append(found[0])
        counit_comp.append(found[1])
    garr = []
    for c in cod.arrows:
        z, w = cod.src[c], cod.tgt[c]
        moved = cod.comp[(cod.inv[counit_comp[w]], cod.comp[(c, counit_comp[z])])]
        garr.append(ffinv[(gobj[z], gobj[w])][moved])
    ginv = GroupoidFunctor(cod, dom, gobj, garr).verify()
    unit_comp = [ffinv[(x, gobj[f.obj_map[x]])][cod.inv[counit_comp[f.obj_map[x]]]]
                 for x in dom.objects]
    unit = NatTransformation(identity_functor(dom), ginv.compose(f), unit_comp).verify()
    counit = NatTransformation(f.compose(ginv), identity_functor(cod), counit_comp).verify()
    for x in dom.objects:
        fx = f.obj_map[x]
        if cod.comp[(counit_comp[fx], f.arr_map[unit_comp[x]])] != cod.ident[fx]:
            raise PreconditionFailed("triangle identity fails at object %d" % x)
    for z in cod.objects:
        if dom.comp[(garr[counit_comp[z]], unit_comp[gobj[z]])] != dom.ident[gobj[z]]:
            raise PreconditionFailed("dual triangle identity fails at object %d" % z)
    return EquivalenceCertificate(f, ginv, unit, counit)


class ExponentialReport:
    """Outcome of comparing Map(k x h, g) with Map(k, Map(h, g))."""

    def __init__(self, mode, ok, counts, obj_map=None, arr_map=None):
        self.mode = mode
        self.ok = ok
        self.counts = counts
        self.obj_map = obj_map
        self.arr_map = arr_map


def _curry_functor(kk, hh, mh, func):
    """Split a functor on a product domain into a functor kk -> mh."""
    nh_obj, nh_arr = hh.n_objects, hh.n_arrows
    obj = []
    for kx in kk.objects:
        key_obj = tuple(func.obj_map[kx * nh_obj + hx] for hx in hh.objects)
        key_arr = tuple(func.arr_map[kk.ident[kx] * nh_arr + ha] for ha in hh.arrows)
        obj.append(mh.functor_index[(key_obj, key_arr)])
    arr = []
    for b in kk.arrows:
        kx, ky = kk.src[b], kk.tgt[b]
        comps = tuple(func.arr_map[b * nh_arr + hh.ident[hx]] for hx in hh.objects)
        arr.append(mh.arrow_index[(obj[kx], obj[ky], comps)])
    return GroupoidFunctor(kk, mh, obj, arr).verify()


def _uncurry_functor(kk, hh, mh, func):
    """Assemble a functor on the product from a functor kk -> mh."""
    g = mh.mapping_cod
    nh_obj, nh_arr = hh.n_objects, hh.n_arrows
    obj = [0] * (kk.n_objects * nh_obj)
    for kx in kk.objects:
        inner = mh.functors[func.obj_map[kx]]
        for hx in hh.objects:
            obj[kx * nh_obj + hx] = inner.obj_map[hx]
    arr = [0] * (kk.n_arrows * nh_arr)
    for b in kk.arrows:
        kx = kk.src[b]
        inner = mh.functors[func.obj_map[kx]]
        comps = mh.transformations[func.arr_map[b]][2]
        for ha in hh.arrows:
            hy = hh.tgt[ha]
            arr[b * nh_arr + ha] = g.comp[(comps[hy], inner.arr_map[ha])]
    kh = core.product(kk, hh)
    return GroupoidFunctor(kh, g, obj, arr).verify()


def exponential_compare(kk, hh, g, mode=ALL, max_count=DEFAULT_SIZE_LIMIT):
    """Certify currying as an isomorphism ("all") or an inclusion chain ("faithful").

    In "all" mode the currying map is checked to be a bijective functor
    between Map(k x h, g) and Map(k, Map(h, g)).  In "faithful" mode it is
    checked to embed Map_f(k x h, g) into Map_f(k, Map_f(h, g)), whose
    objects and arrows in turn uncurry to functors in the unrestricted
    Map(k x h, g).
    """
    kh = core.product(kk, hh)
    if mode == ALL:
        mkh = mapping_groupoid(kh, g, ALL, max_count)
        mh = mapping_groupoid(hh, g, ALL, max_count)
        mkmh = mapping_groupoid(kk, mh, ALL, max_count)
        counts = {
            "product_objects": mkh.n_objects, "product_arrows": mkh.n_arrows,
            "curried_objects": mkmh.n_objects, "curried_arrows": mkmh.n_arrows,
        }
        if (mkh.n_objects, mkh.n_arrows) != (mkmh.n_objects, mkmh.n_arrows):
            return ExponentialReport(mode, False, counts)
        obj_map = []
        for func in mkh.functors:
            lam = _curry_functor(kk, hh, mh, func)
            obj_map.append(mkmh.functor_index[lam.key()])
        if len(set(obj_map)) != len(obj_map):
            return ExponentialReport(mode, False, counts)
        arr_map = []
        for (i, j, comps) in mkh.transformations:
            lam_comps = []
            for kx in kk.objects:
                inner = tuple(comps[kx * hh.n_objects + hx] for hx in hh.objects)
                src_idx = _curry_obj(kk, hh, mh, mkh.functors[i], kx)
                tgt_idx = _curry_obj(kk, hh, mh, mkh.functors[j], kx)
                lam_comps.append(mh.arrow_index[(src_idx, tgt_idx, inner)])
            arr_map.append(mkmh.arrow_index[(obj_map[i], obj_map[j], tuple(lam_comps))])
        if len(set(arr_map)) != len(arr_map):
            return ExponentialReport(mode, False, counts)
        for (pair, c) in mkh.comp.items():
            a2, a1 = pair
            if mkmh.comp[(arr_map[a2], arr_map[a1])] != arr_map[c]:
                return ExponentialReport(mode, False, counts)
        return ExponentialReport(mode, True, counts, obj_map, arr_map)

    mkh_f = mapping_groupoid(kh, g, FAITHFUL, max_count)
    mh_f = mapping_groupoid(hh, g, FAITHFUL, max_count)
    mkmh_f = mapping_groupoid(kk, mh_f, FAITHFUL, max_count)
    mkh_all = mapping_groupoid(kh, g, ALL, max_count)
    counts = {
        "faithful_product_objects": mkh_f.n_objects,
        "faithful_curried_objects": mkmh_f.n_objects,
        "all_product_objects": mkh_all.n_objects,
    }
    obj_map = []
    for func in mkh_f.functors:
        lam = _curry_functor(kk, hh, mh_f, func)
        if lam.key() not in mkmh_f.functor_index:
            return ExponentialReport(mode, False, counts)
        obj_map.append(mkmh_f.functor_index[lam.key()])
    if len(set(obj_map)) != len(obj_map):
        return ExponentialReport(mode, False, counts)
    back = []
    for func in mkmh_f.functors:
        unc = _uncurry_functor(kk, hh, mh_f, func)
        if unc.key() not in mkh_all.functor_index:
            return ExponentialReport(mode, False, counts)
        back.append(mkh_all.functor_index[unc.key()])
    if len(set(back)) != len(back):
        return ExponentialReport(mode, False, counts)
    return ExponentialReport(mode, True, counts, obj_map, back)


def _curry_obj(kk, hh, mh, func, kx):
    nh_obj, nh_arr = hh.n_objects, hh.n_arrows
    key_obj = tuple(func.obj_map[kx * nh_obj + hx] for hx in hh.objects)
    key_arr = tuple(func.arr_map[kk.ident[kx] * nh_arr + ha] for ha in hh.arrows)
    return mh.functor_index[(key_obj, key_arr)]
