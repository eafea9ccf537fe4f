import pytest
from hypothesis import given, settings, strategies as st

from orbkit import core, functors, orb, present
from orbkit.errors import GroupoidError, PreconditionFailed

Z2 = core.cyclic_group(2)
Z3 = core.cyclic_group(3)
Z4 = core.cyclic_group(4)
S3 = core.symmetric_group(3)
BZ2 = core.delooping(Z2)
BZ3 = core.delooping(Z3)
BZ4 = core.delooping(Z4)
BS3 = core.delooping(S3)


@pytest.fixture(scope="module")
def orb23():
    return orb.build_orb([Z2, Z3])


@pytest.fixture(scope="module")
def orb23s():
    return orb.build_orb([Z2, Z3, S3])


def borel_target():
    tau = next(g for g in S3.elements if S3.labels[g] == (1, 0, 2))
    sub = S3.subgroup_closure({tau})
    return core.action_groupoid(S3, core.coset_gset(S3, sub))


def test_hom_counts_match_conjugation_model():
    o = orb.build_orb([Z2, S3])
    h = o.hom(0, 1)
    assert (h.n_objects, h.n_arrows) == (4, 24)
    assert len(h.components()) == 2
    m = functors.conj_action_model(Z2, S3, mode=functors.ALL)
    assert (m.n_objects, m.n_arrows) == (4, 24)
    assert core.iso_check(h, m) is not None


def test_identity_hom_composes_trivially(orb23):
    for i in range(2):
        for j in range(2):
            co = orb23.compose_obj[(i, j, j)]
            for phi in range(orb23.hom(i, j).n_objects):
                assert co[(phi, orb23.ident_obj[j])] == phi


def test_faithful_endomorphism_orbit():
    o = orb.build_orb([S3], mode=functors.FAITHFUL)
    h = o.hom(0, 0)
    assert (h.n_objects, h.n_arrows) == (6, 36)
    assert len(h.components()) == 1
    assert all(h.aut_group(x).n == 1 for x in range(h.n_objects))
    m = functors.conj_action_model(S3, S3, mode=functors.FAITHFUL)
    assert core.iso_check(h, m) is not None


def test_build_is_deterministic(orb23):
    again = orb.build_orb([Z2, Z3])
    assert again.ident_obj == orb23.ident_obj
    assert again.compose_obj == orb23.compose_obj
    assert again.compose_arr == orb23.compose_arr


def test_free_values_are_mapping_groupoids(orb23):
    x = orb.free_orbspace(orb23, [1, 0])
    for i, dom in enumerate((BZ2, BZ3)):
        want = functors.mapping_groupoid(dom, BZ2)
        have = x.values[i]
        assert (have.n_objects, have.n_arrows) == (want.n_objects,
                                                   want.n_arrows)
        assert core.iso_check(have, want) is not None


def test_represented_diagram_components():
    o2 = orb.build_orb([Z2])
    y = orb.R_functor(borel_target(), o2)
    assert len(y.values[0].components()) == 2
    empty = core.FinGroupoid(0, [], [], {}, [], [])
    assert orb.R_functor(empty, o2).values[0].n_objects == 0


def test_corrupted_action_fails_validation(orb23):
    y = orb.R_functor(BZ3, orb23)
    aa = dict(y.act_arr[(1, 1)])
    v = y.values[1]
    key = next(k for k in aa if aa[k] != v.inv[aa[k]])
    aa[key] = v.inv[aa[key]]
    bad = dict(y.act_arr)
    bad[(1, 1)] = aa
    broken = orb.OrbSpace(orb23, y.values, y.act_obj, bad)
    with pytest.raises(GroupoidError):
        orb.validate_orbspace(broken)


def test_coequalizer_on_free_diagram(orb23):
    assert orb.coequalizer_check(orb.free_orbspace(orb23, [1, 0]))


def test_coequalizer_on_represented_diagram(orb23):
    assert orb.coequalizer_check(orb.R_functor(BS3, orb23))


def test_l_of_free_cell_is_delooping(orb23):
    m = present.materialize(orb.L_functor(orb.free_orbspace(orb23, [1, 0])))
    assert (m.n_objects, m.n_arrows) == (1, 2)
    assert core.iso_check(m, BZ2) is not None


def test_l_of_two_cells_is_coproduct(orb23):
    m = present.materialize(orb.L_functor(orb.free_orbspace(orb23, [1, 1])))
    both = core.coproduct(BZ2, BZ3)
    assert (m.n_objects, m.n_arrows) == (2, 5)
    assert core.iso_check(m, both) is not None


def test_l_general_route_agrees_on_free_diagrams(orb23):
    x = orb.free_orbspace(orb23, [1, 1])
    m1 = present.materialize(orb.L_functor(x))
    m2 = present.materialize(orb.L_functor(x, route="general"))
    assert core.iso_check(m1, m2) is not None


def test_adjunction_free_cell_both_sides_match(orb23):
    x = orb.free_orbspace(orb23, [1, 0])
    sol = present.hom_solver(orb.L_functor(x), BS3, normalize=False)
    g1 = sol.transformation_groupoid()
    g2 = orb.orbspace_mapping_groupoid(x, orb.R_functor(BS3, orb23))
    assert (g1.n_objects, g1.n_arrows) == (4, 24)
    assert (g2.n_objects, g2.n_arrows) == (4, 24)
    assert orb.adjunction_check(x, BS3)


def test_adjunction_three_cells_product_oracle(orb23):
    # maps out of a free diagram decompose cell by cell
    x = orb.free_orbspace(orb23, [2, 1])
    g2 = orb.orbspace_mapping_groupoid(x, orb.R_functor(BZ4, orb23))
    mz2 = functors.mapping_groupoid(BZ2, BZ4)
    mz3 = functors.mapping_groupoid(BZ3, BZ4)
    assert g2.n_objects == mz2.n_objects ** 2 * mz3.n_objects
    assert g2.n_arrows == mz2.n_arrows ** 2 * mz3.n_arrows
    assert orb.adjunction_check(x, BZ4)


def test_adjunction_materialized_route_agrees(orb23):
    x = orb.free_orbspace(orb23, [2, 1])
    m = present.materialize(orb.L_functor(x))
    direct = functors.mapping_groupoid(m, BZ4)
    g2 = orb.orbspace_mapping_groupoid(x, orb.R_functor(BZ4, orb23))
    assert (direct.n_objects, direct.n_arrows) == (g2.n_objects, g2.n_arrows)


def test_adjunction_on_represented_domain(orb23):
    x = orb.R_functor(BZ2, orb23)
    g2 = orb.orbspace_mapping_groupoid(x, orb.R_functor(BS3, orb23))
    assert (g2.n_objects, g2.n_arrows) == (4, 24)
    assert orb.adjunction_check(x, BS3)


def test_adjunction_against_nondelooping_target(orb23):
    x = orb.free_orbspace(orb23, [1, 1])
    assert orb.adjunction_check(x, borel_target())


def test_adjunction_needs_all_mode():
    o = orb.build_orb([S3], mode=functors.FAITHFUL)
    x = orb.free_orbspace(o, [1])
    with pytest.raises(PreconditionFailed):
        orb.adjunction_check(x, BS3)


def test_unit_on_free_diagrams(orb23):
    assert orb.unit_check(orb.free_orbspace(orb23, [1, 1]))


def test_unit_over_four_group_family():
    o = orb.build_orb([Z2, Z3, Z4, S3])
    assert orb.unit_check(orb.free_orbspace(o, [1, 1, 1, 1]))


def test_unit_refuses_non_free(orb23):
    with pytest.raises(PreconditionFailed):
        orb.unit_check(orb.R_functor(BZ2, orb23))


def test_counit_with_target_group_in_family(orb23s):
    assert orb.counit_check(BS3, orb23s)


def test_counit_with_target_group_outside_family(orb23):
    # the trivial hom still funnels every level onto the target loops
    assert orb.counit_check(BS3, orb23)


def test_counit_on_disconnected_target(orb23):
    assert orb.counit_check(core.coproduct(BZ2, BZ3), orb23)


def test_counit_faithful_mode():
    o = orb.build_orb([S3], mode=functors.FAITHFUL)
    assert orb.counit_check(BS3, o)
    o2 = orb.build_orb([Z2], mode=functors.FAITHFUL)
    assert not orb.counit_check(BS3, o2)


def test_weq_identity_and_postcomposition(orb23):
    y = orb.R_functor(BS3, orb23)
    ident = orb.OrbMap(y, y, [functors.identity_functor(v)
                              for v in y.values])
    assert orb.orbspace_weq(ident)
    target = borel_target()
    aut = target.aut_group(0)
    loop = next(a for a in aut.labels if a != target.ident[0])
    w = functors.GroupoidFunctor(BZ2, target, [0], [target.ident[0], loop])
    w.verify()
    assert orb.orbspace_weq(orb.r_map(w, orb23))


def test_weq_rejects_component_folding(orb23):
    two = core.coproduct(BZ2, BZ2)
    fold = functors.GroupoidFunctor(two, BZ2, [0, 0], [0, 1, 0, 1])
    fold.verify()
    assert not orb.orbspace_weq(orb.r_map(fold, orb23))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_unit_and_cell_counts_on_random_frees(a, b):
    if a + b == 0:
        a = 1
    o = orb.build_orb([Z2, Z3])
    x = orb.free_orbspace(o, [a, b])
    assert orb.unit_check(x)
    g2 = orb.orbspace_mapping_groupoid(x, orb.R_functor(BZ2, o))
    mz2 = functors.mapping_groupoid(BZ2, BZ2)
    mz3 = functors.mapping_groupoid(BZ3, BZ2)
    assert g2.n_objects == mz2.n_objects ** a * mz3.n_objects ** b
    assert g2.n_arrows == mz2.n_arrows ** a * mz3.n_arrows ** b
