"""Mapping groupoids, conjugation models, equivalences, and currying."""

import pytest

from orbkit import (
    cyclic_group,
    delooping,
    iso_check,
    pair_groupoid,
    product_group,
    restriction,
    symmetric_group,
    unit_groupoid,
    coproduct,
)
from orbkit.errors import SizeLimit
from orbkit.functors import (
    ALL,
    FAITHFUL,
    GroupoidFunctor,
    NatTransformation,
    categorical_equivalence,
    conj_action_model,
    enumerate_functors,
    exponential_compare,
    group_homs,
    identity_functor,
    mapping_groupoid,
    transformations_between,
)

Z2 = cyclic_group(2)
Z3 = cyclic_group(3)
S3 = symmetric_group(3)


def count_injective(homs, n):
    return sum(1 for p in homs if len(set(p)) == n)


def test_group_hom_counts():
    assert len(group_homs(Z2, Z2)) == 2
    assert len(group_homs(Z2, Z3)) == 1
    assert len(group_homs(Z2, S3)) == 4
    assert len(group_homs(Z3, Z3)) == 3
    assert len(group_homs(Z3, S3)) == 3
    assert len(group_homs(S3, Z2)) == 2
    assert len(group_homs(S3, Z3)) == 1
    assert len(group_homs(S3, S3)) == 10
    assert count_injective(group_homs(Z2, S3), 2) == 3
    assert count_injective(group_homs(S3, S3), 6) == 6


def test_enumerate_functors_deloopings():
    fs = enumerate_functors(delooping(Z2), delooping(S3))
    assert len(fs) == 4
    fs_f = enumerate_functors(delooping(Z2), delooping(S3), mode=FAITHFUL)
    assert len(fs_f) == 3


def test_mapping_groupoid_bz2_bs3():
    m = mapping_groupoid(delooping(Z2), delooping(S3))
    assert m.n_objects == 4 and m.n_arrows == 24
    assert len(m.components()) == 2
    mf = mapping_groupoid(delooping(Z2), delooping(S3), mode=FAITHFUL)
    assert mf.n_objects == 3 and mf.n_arrows == 18
    assert len(mf.components()) == 1


def test_mapping_groupoid_endomorphisms_of_bs3():
    m = mapping_groupoid(delooping(S3), delooping(S3))
    assert m.n_objects == 10 and m.n_arrows == 60
    sizes = sorted(len(c) for c in m.components())
    assert sizes == [1, 3, 6]


def test_conj_action_model_matches_mapping_groupoid():
    for mode in (ALL, FAITHFUL):
        model = conj_action_model(Z2, S3, mode=mode)
        m = mapping_groupoid(delooping(Z2), delooping(S3), mode=mode)
        assert sorted(model.object_labels) == sorted(f.arr_map for f in m.functors)
        assert iso_check(model, m) is not None


def test_transformation_extension_is_natural():
    h = restriction(delooping(Z2), [0, 0])
    g = delooping(S3)
    fs = enumerate_functors(h, g)
    assert len(fs) == 24
    total = sum(len(transformations_between(f1, f2)) for f1 in fs for f2 in fs)
    m = mapping_groupoid(h, g)
    assert m.n_arrows == total
    assert len(m.components()) == 2


def test_precomposition_is_equivalence():
    h = restriction(delooping(Z2), [0, 0])
    g = delooping(S3)
    mh = mapping_groupoid(h, g)
    mb = mapping_groupoid(delooping(Z2), g)
    incl = GroupoidFunctor(delooping(Z2), h, [0],
                           [next(a for a in h.arrows if h.arrow_labels[a] == (0, lab, 0))
                            for lab in delooping(Z2).arrow_labels])
    incl.verify()
    obj = [mb.functor_index[f.compose(incl).key()] for f in mh.functors]
    arr = []
    for (i, j, comps) in mh.transformations:
        restricted = tuple(comps[incl.obj_map[x]] for x in delooping(Z2).objects)
        arr.append(mb.arrow_index[(obj[i], obj[j], restricted)])
    pre = GroupoidFunctor(mh, mb, obj, arr).verify()
    cert = categorical_equivalence(pre)
    assert cert is not None
    cert.unit.verify()
    cert.counit.verify()


def test_equivalence_rejects_non_ff_and_non_eso():
    triv = GroupoidFunctor(delooping(Z2), delooping(Z2), [0], [0, 0])
    assert categorical_equivalence(triv) is None
    two = coproduct(unit_groupoid(1), unit_groupoid(1))
    point = GroupoidFunctor(unit_groupoid(1), two, [0], [0])
    assert categorical_equivalence(point) is None


def test_equivalence_of_contractible():
    point = GroupoidFunctor(unit_groupoid(1), pair_groupoid(3), [0], [0])
    cert = categorical_equivalence(point)
    assert cert is not None
    assert cert.inverse.obj_map == (0, 0, 0)


def test_exponential_all_mode():
    rep = exponential_compare(delooping(Z2), delooping(Z3), delooping(S3))
    assert rep.ok
    assert rep.counts["product_objects"] == 6
    rep2 = exponential_compare(delooping(Z2), delooping(Z2), delooping(S3))
    assert rep2.ok
    assert rep2.counts["product_objects"] == 10
    assert rep2.counts["curried_objects"] == 10


def test_exponential_faithful_mode():
    rep = exponential_compare(delooping(Z2), delooping(Z2), delooping(S3),
                              mode=FAITHFUL)
    assert rep.ok
    assert rep.counts["faithful_product_objects"] == 0
    assert rep.counts["faithful_curried_objects"] == 3
    assert rep.counts["all_product_objects"] == 10
    rep2 = exponential_compare(delooping(Z2), delooping(Z2), delooping(Z2),
                               mode=FAITHFUL)
    assert rep2.ok
    assert rep2.counts["faithful_curried_objects"] == 1
    assert rep2.counts["all_product_objects"] == 4


def test_functor_enumeration_size_guard():
    with pytest.raises(SizeLimit):
        enumerate_functors(pair_groupoid(8), pair_groupoid(8), max_count=10)


def test_identity_and_whiskering_roundtrip():
    g = delooping(S3)
    ident = identity_functor(g)
    eta = NatTransformation(ident, ident, [g.ident[0]]).verify()
    assert eta.then(eta).components == eta.components
