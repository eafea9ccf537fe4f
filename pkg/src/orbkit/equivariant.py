"""Orbit categories of a fixed group and their conjugation comparison.

A family of subgroups of one finite group models the orbit category twice
over: concretely, with orbits G/H as objects and equivariant maps computed
as cosets {g : H^g <= K}/K, and abstractly, with the subgroups' delooping
mapping groupoids as homs.  A spanning category whose hom groupoids are the
conjugator sets {g : H^g <= K} with right translation by K projects onto
both models.  The projection onto cosets collapses each translation
groupoid onto its orbit set; the projection onto mapping groupoids sends a
conjugator to the homomorphism it induces, and is an equivalence exactly
when conjugation realizes every admissible homomorphism between family
members once.  tvc_compare certifies both legs hom by hom.
"""

from . import core
from . import functors
from .errors import GroupoidError, NotASubgroup, PreconditionFailed
from .orb import OrbCategory


class _Subgroup:
    """A verified subgroup with its own group structure and delooping."""

    def __init__(self, group, elems):
        elems = tuple(sorted(set(elems)))
        if any(not (0 <= g < group.n) for g in elems) or not group.is_subgroup(elems):
            raise NotASubgroup(elems)
        self.elems = elems
        self.index = {g: t for t, g in enumerate(elems)}
        self.group = group.subgroup_as_group(elems)
        self.delooping = core.delooping(self.group)


def _records(group, family):
    return tuple(_Subgroup(group, elems) for elems in family)


def _conjugators(group, src, dst):
    """Elements g with src^g inside dst, in increasing id order."""
    kset = frozenset(dst)
    return tuple(g for g in group.elements
                 if all(group.conj(h, g) in kset for h in src))


class OrbitCategory:
    """Orbits G/H of a subgroup family with equivariant maps as cosets."""

    def __init__(self, group, records):
        self.group = group
        self.subgroups = tuple(r.elems for r in records)
        self.n_objects = len(records)
        self.cosets = tuple(tuple(group.left_cosets(r.elems)) for r in records)
        self.coset_of = tuple({g: c for c, coset in enumerate(cs) for g in coset}
                              for cs in self.cosets)
        self.homs = {}
        for i in range(self.n_objects):
            for j in range(self.n_objects):
                hit = {self.coset_of[j][g]
                       for g in _conjugators(group, self.subgroups[i],
                                             self.subgroups[j])}
                self.homs[(i, j)] = tuple(sorted(hit))
        self._hom_sets = {p: frozenset(cs) for p, cs in self.homs.items()}

    def hom(self, i, j):
        """Equivariant maps G/H_i -> G/H_j as coset ids of subgroup j."""
        return self.homs[(i, j)]

    def hom_fixed(self, i, j):
        """The same maps recomputed as translation-fixed cosets of G/H_j."""
        mul = self.group.mul
        out = []
        for c, coset in enumerate(self.cosets[j]):
            g0 = coset[0]
            if all(self.coset_of[j][mul[h][g0]] == c for h in self.subgroups[i]):
                out.append(c)
        return tuple(out)

    def ident(self, i):
        return self.coset_of[i][self.group.unit]

    def compose(self, i, j, k, a, b):
        """The class of a: G/H_i -> G/H_j followed by b: G/H_j -> G/H_k."""
        if a not in self._hom_sets[(i, j)] or b not in self._hom_sets[(j, k)]:
            raise GroupoidError("cosets do not define composable maps")
        g = self.cosets[j][a][0]
        return self.coset_of[k][self.group.mul[g][self.cosets[k][b][0]]]


def orbit_category(group, family):
    """Orbits G/H and their equivariant maps for a family of subgroups."""
    return OrbitCategory(group, _records(group, family))


def _translation_groupoid(group, carrier, sub):
    """Objects carrier, one arrow g -> g*k per k in sub; arrow id a*|sub|+t."""
    nk = len(sub)
    kindex = {k: t for t, k in enumerate(sub)}
    cindex = {g: a for a, g in enumerate(carrier)}
    src, tgt, inv, labels = [], [], [], []
    for a, g in enumerate(carrier):
        for k in sub:
            src.append(a)
            tgt.append(cindex[group.mul[g][k]])
            labels.append((g, k))
    comp = {}
    for a in range(len(carrier)):
        for t, k in enumerate(sub):
            first = a * nk + t
            b = tgt[first]
            for u, m in enumerate(sub):
                comp[(b * nk + u, first)] = a * nk + kindex[group.mul[k][m]]
    for a in range(len(carrier)):
        for t, k in enumerate(sub):
            inv.append(tgt[a * nk + t] * nk + kindex[group.inv[k]])
    ident = [a * nk + kindex[group.unit] for a in range(len(carrier))]
    return core.FinGroupoid(len(carrier), src, tgt, comp, ident, inv,
                            object_labels=carrier, arrow_labels=labels)


class AuxCategory:
    """Spanning category whose homs are conjugator translation groupoids."""

    def __init__(self, group, records):
        self.group = group
        self.subgroups = tuple(r.elems for r in records)
        self.n_objects = len(records)
        self._sub_index = tuple(r.index for r in records)
        self.carriers, self.carrier_index, self.homs = {}, {}, {}
        for i in range(self.n_objects):
            for j in range(self.n_objects):
                s = _conjugators(group, records[i].elems, records[j].elems)
                self.carriers[(i, j)] = s
                self.carrier_index[(i, j)] = {g: a for a, g in enumerate(s)}
                self.homs[(i, j)] = _translation_groupoid(group, s,
                                                          records[j].elems)

    def hom(self, i, j):
        return self.homs[(i, j)]

    def ident_obj(self, i):
        return self.carrier_index[(i, i)][self.group.unit]

    def compose_obj(self, i, j, k, a, b):
        """Conjugator product g*g' of a in hom (i, j) and b in hom (j, k)."""
        g = self.carriers[(i, j)][a]
        return self.carrier_index[(i, k)][self.group.mul[g][self.carriers[(j, k)][b]]]

    def compose_arr(self, i, j, k, x, y):
        """Sideways composite of hom-groupoid arrows x of (i, j), y of (j, k)."""
        nj, nk = len(self.subgroups[j]), len(self.subgroups[k])
        a, t = divmod(x, nj)
        b, u = divmod(y, nk)
        gp = self.carriers[(j, k)][b]
        # g k g' m = (g g') (g'^-1 k g') m, and the conjugate lands in sub k
        trans = self.group.mul[self.group.conj(self.subgroups[j][t], gp)][self.subgroups[k][u]]
        c = self.compose_obj(i, j, k, a, b)
        return c * nk + self._sub_index[k][trans]


def aux_category(group, family):
    """The spanning category over a subgroup family."""
    return AuxCategory(group, _records(group, family))


def _f_contractible(group, records, mode):
    for rs in records:
        for rd in records:
            table = {}
            for g in _conjugators(group, rs.elems, rd.elems):
                image = tuple(rd.index[group.conj(h, g)] for h in rs.elems)
                table[image] = table.get(image, 0) + 1
            homs = functors.enumerate_functors(rs.delooping, rd.delooping,
                                               mode=mode)
            if set(table) != {f.arr_map for f in homs}:
                return False
            if any(count != 1 for count in table.values()):
                return False
    return True


def f_contractible_check(group, family, mode=functors.ALL):
    """True when conjugation hits each admissible homomorphism exactly once."""
    return _f_contractible(group, _records(group, family), mode)


class ComparisonReport:
    """Pairwise certificates that both orbit category models agree."""

    def __init__(self, group, mode, subgroups, matching, orbit, aux, orb,
                 pairs, ok):
        self.group = group
        self.mode = mode
        self.subgroups = subgroups
        self.matching = matching
        self.orbit = orbit
        self.aux = aux
        self.orb = orb
        self.pairs = pairs
        self.ok = ok

    def lines(self):
        out = ["orbit comparison: group order %d, %d subgroups, mode %s"
               % (self.group.n, len(self.subgroups), self.mode)]
        for i, elems in enumerate(self.subgroups):
            out.append("object %d: subgroup order %d -> abstract member %d"
                       % (i, len(elems), self.matching[i]))
        for (i, j) in sorted(self.pairs):
            d = self.pairs[(i, j)]
            out.append("pair (%d, %d): %d cosets (fixed-point route %d), "
                       "carrier %d, %d functors; coset leg %s, hom leg %s"
                       % (i, j, d["cosets"], d["fixed"], d["carrier"],
                          d["functors"],
                          "ok" if d["coset_leg"] else "FAIL",
                          "ok" if d["hom_leg"] else "FAIL"))
        out.append("overall: %s" % ("equivalent" if self.ok else "NOT equivalent"))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _match_family(records, orb):
    """For each subgroup pick an isomorphic abstract member, both directions."""
    matching, sigmas = [], []
    for r in records:
        found = None
        for j, dl in enumerate(orb.deloopings):
            iso = core.iso_check(r.delooping, dl)
            if isinstance(iso, core.Iso):
                found = (j, iso.arr_map)
                break
        if found is None:
            raise PreconditionFailed(
                "a family subgroup has no isomorphic abstract member")
        matching.append(found[0])
        sigmas.append(found[1])
    for dl in orb.deloopings:
        if not any(isinstance(core.iso_check(dl, r.delooping), core.Iso)
                   for r in records):
            raise PreconditionFailed(
                "an abstract family member has no isomorphic subgroup")
    return tuple(matching), tuple(sigmas)


def tvc_compare(group, family, orb, mode=None):
    """Certify the span between concrete orbits and the abstract orbit category."""
    records = _records(group, family)
    if orb is None:
        orb = OrbCategory((), functors.ALL if mode is None else mode,
                          (), {}, (), {}, {})
    if mode is None:
        mode = orb.mode
    if mode != orb.mode:
        raise PreconditionFailed(
            "mode %r does not match the orbit category mode %r"
            % (mode, orb.mode))
    if not _f_contractible(group, records, mode):
        raise PreconditionFailed(
            "conjugation does not realize the admissible homomorphisms freely")
    matching, sigmas = _match_family(records, orb)
    sigma_inv = []
    for sig in sigmas:
        back = [0] * len(sig)
        for x, y in enumerate(sig):
            back[y] = x
        sigma_inv.append(back)
    orbit = OrbitCategory(group, records)
    aux = AuxCategory(group, records)
    n = len(records)
    pfun, qfun, pairs = {}, {}, {}
    ok = True
    for i in range(n):
        for j in range(n):
            aux_ij = aux.homs[(i, j)]
            s = aux.carriers[(i, j)]
            hom_ij = orbit.homs[(i, j)]
            pos = {c: p for p, c in enumerate(hom_ij)}
            obj_map = [pos[orbit.coset_of[j][g]] for g in s]
            arr_map = [obj_map[aux_ij.src[x]] for x in aux_ij.arrows]
            p_pair = functors.GroupoidFunctor(
                aux_ij, core.unit_groupoid(len(hom_ij)), obj_map, arr_map)
            p_pair.verify()
            mg = orb.homs[(matching[i], matching[j])]
            elems_i, rj = records[i].elems, records[j]
            q_obj = []
            for g in s:
                arr = tuple(sigmas[j][rj.index[group.conj(elems_i[sigma_inv[i][x]], g)]]
                            for x in range(len(sigmas[i])))
                key = ((0,), arr)
                if key not in mg.functor_index:
                    raise GroupoidError(
                        "conjugation functor missing from the mapping groupoid")
                q_obj.append(mg.functor_index[key])
            nk = len(rj.elems)
            q_arr = []
            for x in aux_ij.arrows:
                a, t = divmod(x, nk)
                comp_elem = sigmas[j][rj.index[group.inv[rj.elems[t]]]]
                q_arr.append(mg.arrow_index[(q_obj[a], q_obj[aux_ij.tgt[x]],
                                             (comp_elem,))])
            q_pair = functors.GroupoidFunctor(aux_ij, mg, q_obj, q_arr)
            q_pair.verify()
            pfun[(i, j)], qfun[(i, j)] = p_pair, q_pair
            fixed = orbit.hom_fixed(i, j)
            d = {"carrier": len(s), "cosets": len(hom_ij), "fixed": len(fixed),
                 "routes_agree": fixed == hom_ij,
                 "functors": mg.n_objects, "transformations": mg.n_arrows,
                 "coset_leg": functors.categorical_equivalence(p_pair) is not None,
                 "hom_leg": functors.categorical_equivalence(q_pair) is not None}
            pairs[(i, j)] = d
            ok = ok and d["routes_agree"] and d["coset_leg"] and d["hom_leg"]
    for i in range(n):
        e = aux.ident_obj(i)
        if orbit.homs[(i, i)][pfun[(i, i)].obj_map[e]] != orbit.ident(i):
            raise GroupoidError("coset projection breaks identities")
        if qfun[(i, i)].obj_map[e] != orb.ident_obj[matching[i]]:
            raise GroupoidError("abstract projection breaks identities")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                sij, sjk = aux.carriers[(i, j)], aux.carriers[(j, k)]
                sik = aux.carriers[(i, k)]
                co = orb.compose_obj[(matching[i], matching[j], matching[k])]
                ca = orb.compose_arr[(matching[i], matching[j], matching[k])]
                qij, qjk, qik = qfun[(i, j)], qfun[(j, k)], qfun[(i, k)]
                for a in range(len(sij)):
                    pa = orbit.coset_of[j][sij[a]]
                    for b in range(len(sjk)):
                        c = aux.compose_obj(i, j, k, a, b)
                        if orbit.compose(i, j, k, pa, orbit.coset_of[k][sjk[b]]) \
                                != orbit.coset_of[k][sik[c]]:
                            raise GroupoidError(
                                "coset projection breaks composition")
                        if co[(qij.obj_map[a], qjk.obj_map[b])] != qik.obj_map[c]:
                            raise GroupoidError(
                                "abstract projection breaks composition")
                qij_arr, qjk_arr, qik_arr = qij.arr_map, qjk.arr_map, qik.arr_map
                for x in aux.homs[(i, j)].arrows:
                    qx = qij_arr[x]
                    for y in aux.homs[(j, k)].arrows:
                        z = aux.compose_arr(i, j, k, x, y)
                        if ca[(qx, qjk_arr[y])] != qik_arr[z]:
                            raise GroupoidError(
                                "abstract projection breaks arrow composition")
    return ComparisonReport(group, mode, tuple(r.elems for r in records),
                            matching, orbit, aux, orb, pairs, ok)
