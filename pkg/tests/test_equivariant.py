"""Orbit categories of a fixed group, conjugator freeness, and the span comparison."""

import random

import pytest
from hypothesis import given, settings, strategies as st

import util
from orbkit import core, equivariant, functors, orb
from orbkit.errors import GroupoidError, NotASubgroup, PreconditionFailed

Z4 = core.cyclic_group(4)
S3 = core.symmetric_group(3)
S4 = core.symmetric_group(4)
TAU = next(g for g in S3.elements if S3.labels[g] == (1, 0, 2))
SUB12 = S3.subgroup_closure({TAU})
A3 = S3.subgroup_closure({next(g for g in S3.elements
                                if S3.labels[g] == (1, 2, 0))})
S4LAB = {l: g for g, l in enumerate(S4.labels)}
STAB3 = tuple(g for g in S4.elements if S4.labels[g][3] == 3)
V4 = (S4LAB[(0, 1, 2, 3)], S4LAB[(1, 0, 3, 2)],
      S4LAB[(2, 3, 0, 1)], S4LAB[(3, 2, 1, 0)])
FLIP01 = S4.subgroup_closure({S4LAB[(1, 0, 2, 3)]})


def test_hom_counts_on_symmetric_and_cyclic_families():
    oc = equivariant.orbit_category(S3, [SUB12, range(6)])
    assert len(oc.hom(0, 1)) == 1
    assert len(oc.hom(1, 0)) == 0
    for i in range(2):
        assert oc.ident(i) in oc.hom(i, i)
    oc4 = equivariant.orbit_category(Z4, [(0, 2), range(4)])
    assert len(oc4.hom(0, 0)) == 2
    assert oc4.ident(0) in oc4.hom(0, 0)


def test_s4_hom_matrix():
    # row by row: V4 is normal with quotient of order 6; the letter
    # stabilizer is self-normalizing; a transposition meets the stabilizer
    # in 12 conjugators over 6 coset elements and has centralizer of order
    # 4; a larger subgroup never lands in a smaller one
    oc = equivariant.orbit_category(S4, [V4, STAB3, FLIP01, range(24)])
    want = [[6, 0, 0, 1], [0, 1, 0, 1], [0, 2, 2, 1], [0, 0, 0, 1]]
    for i in range(4):
        for j in range(4):
            assert len(oc.hom(i, j)) == want[i][j]


def test_hom_routes_agree_on_order_24_families():
    cases = [
        (S3, [SUB12, A3, range(6)]),
        (Z4, [(0, 2), range(4)]),
        (S4, [V4, STAB3, FLIP01, range(24)]),
        (core.product_group(core.cyclic_group(2), core.cyclic_group(4)),
         [(0,), (0, 4), (0, 1, 2, 3), range(8)]),
    ]
    for group, family in cases:
        oc = equivariant.orbit_category(group, family)
        for i in range(oc.n_objects):
            for j in range(oc.n_objects):
                assert oc.hom(i, j) == oc.hom_fixed(i, j)


def test_composition_is_rep_independent_unital_and_associative():
    oc = equivariant.orbit_category(S3, [SUB12, A3, range(6)])
    n = oc.n_objects
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for a in oc.hom(i, j):
                    for b in oc.hom(j, k):
                        c = oc.compose(i, j, k, a, b)
                        assert c in oc.hom(i, k)
                        for g1 in oc.cosets[j][a]:
                            for g2 in oc.cosets[k][b]:
                                assert oc.coset_of[k][S3.mul[g1][g2]] == c
    for i in range(n):
        for j in range(n):
            for a in oc.hom(i, j):
                assert oc.compose(i, i, j, oc.ident(i), a) == a
                assert oc.compose(i, j, j, a, oc.ident(j)) == a
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    for a in oc.hom(i, j):
                        for b in oc.hom(j, k):
                            for c in oc.hom(k, l):
                                ab = oc.compose(i, j, k, a, b)
                                bc = oc.compose(j, k, l, b, c)
                                assert oc.compose(i, k, l, ab, c) == \
                                    oc.compose(i, j, l, a, bc)
    with pytest.raises(GroupoidError):
        oc.compose(0, 1, 2, oc.ident(0), oc.hom(1, 2)[0])


def test_rejects_non_subgroups():
    rho = next(g for g in S3.elements if S3.labels[g] == (1, 2, 0))
    for bad in ([0, rho], [0, 17], []):
        with pytest.raises(NotASubgroup):
            equivariant.orbit_category(S3, [bad])
        with pytest.raises(NotASubgroup):
            equivariant.f_contractible_check(S3, [bad])
        with pytest.raises(NotASubgroup):
            equivariant.aux_category(S3, [bad])


def test_translation_groupoid_laws():
    aux = equivariant.aux_category(Z4, [range(4)])
    g = aux.hom(0, 0)
    assert (g.n_objects, g.n_arrows) == (4, 16)
    for (a, b), c in g.comp.items():
        assert g.tgt[b] == g.src[a]
        assert g.src[c] == g.src[b] and g.tgt[c] == g.tgt[a]
    for a in range(g.n_arrows):
        assert g.comp[(g.inv[a], a)] == g.ident[g.src[a]]
        assert g.comp[(a, g.ident[g.src[a]])] == a
        assert g.comp[(g.ident[g.tgt[a]], a)] == a


def test_aux_composition_projects_onto_coset_composition():
    family = [SUB12, range(6)]
    aux = equivariant.aux_category(S3, family)
    oc = equivariant.orbit_category(S3, family)
    n = aux.n_objects
    for i in range(n):
        assert aux.carriers[(i, i)][aux.ident_obj(i)] == S3.unit
    for i in range(n):
        for j in range(n):
            for k in range(n):
                sij, sjk = aux.carriers[(i, j)], aux.carriers[(j, k)]
                sik = aux.carriers[(i, k)]
                for a in range(len(sij)):
                    for b in range(len(sjk)):
                        c = aux.compose_obj(i, j, k, a, b)
                        assert oc.compose(i, j, k,
                                          oc.coset_of[j][sij[a]],
                                          oc.coset_of[k][sjk[b]]) == \
                            oc.coset_of[k][sik[c]]
                gij, gjk, gik = aux.homs[(i, j)], aux.homs[(j, k)], \
                    aux.homs[(i, k)]
                for x in gij.arrows:
                    for y in gjk.arrows:
                        z = aux.compose_arr(i, j, k, x, y)
                        a = aux.compose_obj(i, j, k, gij.src[x], gjk.src[y])
                        b = aux.compose_obj(i, j, k, gij.tgt[x], gjk.tgt[y])
                        assert gik.src[z] == a and gik.tgt[z] == b


def test_conjugation_freeness_instances():
    assert equivariant.f_contractible_check(
        S3, [range(6)], functors.FAITHFUL) is True
    assert equivariant.f_contractible_check(S3, [range(6)], functors.ALL) is False
    for mode in (functors.ALL, functors.FAITHFUL):
        assert equivariant.f_contractible_check(Z4, [range(4)], mode) is False
    # the fiber over the one homomorphism out of the trivial subgroup is all of G
    assert equivariant.f_contractible_check(S3, [(0,)], functors.ALL) is False
    assert equivariant.f_contractible_check(
        core.trivial_group(), [(0,)], functors.ALL) is True
    # a transposition centralizes itself, so its fibers are too fat
    assert equivariant.f_contractible_check(
        S3, [SUB12, range(6)], functors.FAITHFUL) is False
    assert equivariant.f_contractible_check(
        S4, [STAB3, range(24)], functors.FAITHFUL) is True
    assert equivariant.f_contractible_check(S3, []) is True


def test_span_comparison_on_full_symmetric_family():
    o = orb.build_orb([core.symmetric_group(3)], functors.FAITHFUL)
    rep = equivariant.tvc_compare(S3, [range(6)], o, functors.FAITHFUL)
    assert rep.ok
    d = rep.pairs[(0, 0)]
    assert d["cosets"] == 1 and d["carrier"] == 6 and d["functors"] == 6
    assert d["coset_leg"] and d["hom_leg"] and d["routes_agree"]
    assert rep.matching == (0,)
    text = str(rep)
    assert "group order 6" in text and text.endswith("overall: equivalent")
    rep2 = equivariant.tvc_compare(S3, [range(6)], o, functors.FAITHFUL)
    assert str(rep2) == text


def test_span_comparison_picks_matching_among_duplicates():
    o = orb.build_orb([core.symmetric_group(3), core.symmetric_group(3)],
                      functors.FAITHFUL)
    rep = equivariant.tvc_compare(S3, [range(6)], o, functors.FAITHFUL)
    assert rep.ok and rep.matching == (0,)


def test_span_comparison_preconditions():
    o4 = orb.build_orb([core.cyclic_group(4)], functors.FAITHFUL)
    with pytest.raises(PreconditionFailed):
        equivariant.tvc_compare(Z4, [range(4)], o4, functors.FAITHFUL)
    o2 = orb.build_orb([core.cyclic_group(2)], functors.FAITHFUL)
    with pytest.raises(PreconditionFailed):
        equivariant.tvc_compare(S3, [range(6)], o2, functors.FAITHFUL)
    o32 = orb.build_orb([core.symmetric_group(3), core.cyclic_group(2)],
                        functors.FAITHFUL)
    with pytest.raises(PreconditionFailed):
        equivariant.tvc_compare(S3, [range(6)], o32, functors.FAITHFUL)
    oall = orb.build_orb([core.symmetric_group(3)], functors.ALL)
    with pytest.raises(PreconditionFailed):
        equivariant.tvc_compare(S3, [range(6)], oall, functors.FAITHFUL)


def test_span_comparison_empty_family_is_vacuous():
    rep = equivariant.tvc_compare(S3, [], None)
    assert rep.ok and rep.pairs == {}
    rep = equivariant.tvc_compare(S3, [], None, mode=functors.FAITHFUL)
    assert rep.ok


def test_freeness_implies_comparison_over_corpus():
    cases = [
        (core.trivial_group(), [(0,)], [core.trivial_group()], functors.ALL),
        (S3, [range(6)], [core.symmetric_group(3)], functors.FAITHFUL),
    ]
    for group, family, abstract, mode in cases:
        assert equivariant.f_contractible_check(group, family, mode)
        o = orb.build_orb(abstract, mode)
        assert equivariant.tvc_compare(group, family, o, mode).ok


def test_hom_leg_fails_exactly_where_conjugation_is_not_free():
    # the coset leg is an equivalence even for Z/4, where conjugation has
    # fourfold fibers; only the homomorphism leg detects the failure
    aux = equivariant.aux_category(Z4, [range(4)])
    g = aux.hom(0, 0)
    oc = equivariant.orbit_category(Z4, [range(4)])
    pos = {c: p for p, c in enumerate(oc.hom(0, 0))}
    obj = [pos[oc.coset_of[0][x]] for x in aux.carriers[(0, 0)]]
    p = functors.GroupoidFunctor(
        g, core.unit_groupoid(len(oc.hom(0, 0))), obj,
        [obj[g.src[x]] for x in g.arrows]).verify()
    assert functors.categorical_equivalence(p) is not None
    mg = functors.mapping_groupoid(core.delooping(Z4), core.delooping(Z4),
                                   mode=functors.FAITHFUL)
    q_obj = [mg.functor_index[((0,), tuple(Z4.conj(h, x) for h in range(4)))]
             for x in aux.carriers[(0, 0)]]
    q_arr = []
    for x in g.arrows:
        a, t = divmod(x, 4)
        q_arr.append(mg.arrow_index[(q_obj[a], q_obj[g.tgt[x]],
                                     (Z4.inv[t],))])
    q = functors.GroupoidFunctor(g, mg, q_obj, q_arr).verify()
    assert functors.categorical_equivalence(q) is None


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_random_families_agree_on_both_hom_routes(seed):
    rng = random.Random(seed)
    group = util.random_group(rng)
    family = [util.random_subgroup(rng, group),
              util.random_subgroup(rng, group), range(group.n)]
    oc = equivariant.orbit_category(group, family)
    for i in range(oc.n_objects):
        for j in range(oc.n_objects):
            assert oc.hom(i, j) == oc.hom_fixed(i, j)
        assert oc.ident(i) in oc.hom(i, i)
    for i in range(oc.n_objects):
        for j in range(oc.n_objects):
            for k in range(oc.n_objects):
                for a in oc.hom(i, j):
                    for b in oc.hom(j, k):
                        c = oc.compose(i, j, k, a, b)
                        g1 = oc.cosets[j][a][-1]
                        g2 = oc.cosets[k][b][-1]
                        assert oc.coset_of[k][group.mul[g1][g2]] == c
