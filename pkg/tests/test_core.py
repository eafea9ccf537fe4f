"""Constructors, validation, and isomorphism search on small groupoids."""

import pytest

from orbkit import (
    FinGroup,
    FinGroupoid,
    GSet,
    Indeterminate,
    action_groupoid,
    coproduct,
    coset_gset,
    cyclic_group,
    delooping,
    gauge_groupoid,
    iso_check,
    pair_groupoid,
    product,
    product_group,
    quotient_groupoid,
    restriction,
    symmetric_group,
    translation_groupoid,
    unit_groupoid,
    validate_groupoid,
    validate_gset,
)
from orbkit.errors import (
    BadInverse,
    EndpointMismatch,
    GroupoidError,
    MissingIdentity,
    NonAssociative,
    NotACover,
    NotFree,
    NotPrincipal,
)


class Bundle:
    """Minimal principal-bundle data for gauge_groupoid tests."""

    def __init__(self, structure, n_total, n_base, proj, act):
        self.structure = structure
        self.n_total = n_total
        self.n_base = n_base
        self.proj = proj
        self.act = act


def transposition_subgroup(s3):
    t = s3.labels.index((1, 0, 2))
    return s3.subgroup_closure([t])


def test_pair_groupoid_counts():
    g = validate_groupoid(pair_groupoid(3))
    assert g.n_objects == 3 and g.n_arrows == 9
    assert all(len(g.hom(x, y)) == 1 for x in g.objects for y in g.objects)


def test_delooping_s3():
    g = validate_groupoid(delooping(symmetric_group(3)))
    assert g.n_objects == 1 and g.n_arrows == 6
    assert g.aut_group(0).n == 6


def test_unit_and_coproduct():
    g = validate_groupoid(coproduct(unit_groupoid(2), delooping(cyclic_group(3))))
    assert g.n_objects == 3 and g.n_arrows == 5
    assert g.components() == [(0,), (1,), (2,)]


def test_product_counts():
    g = validate_groupoid(product(pair_groupoid(2), delooping(cyclic_group(2))))
    assert g.n_objects == 2 and g.n_arrows == 8
    assert len(g.aut(0)) == 2


def _mutated_b_z4(**changes):
    base = delooping(cyclic_group(4))
    fields = dict(
        n_objects=1, src=base.src, tgt=base.tgt, comp=dict(base.comp),
        ident=base.ident, inv=base.inv,
    )
    fields.update(changes)
    return FinGroupoid(**fields)


def test_validate_flags_nonassociative():
    bad = _mutated_b_z4()
    bad.comp[(1, 2)] = 0
    with pytest.raises(NonAssociative):
        validate_groupoid(bad)


def test_validate_flags_missing_identity():
    bad = _mutated_b_z4(ident=[1])
    with pytest.raises(MissingIdentity):
        validate_groupoid(bad)


def test_validate_flags_bad_inverse():
    bad = _mutated_b_z4(inv=[0, 1, 2, 3])
    with pytest.raises(BadInverse):
        validate_groupoid(bad)


def test_validate_flags_missing_composite():
    bad = _mutated_b_z4()
    del bad.comp[(1, 2)]
    with pytest.raises(EndpointMismatch):
        validate_groupoid(bad)


def test_restriction_of_delooping():
    g = validate_groupoid(restriction(delooping(cyclic_group(2)), [0, 0]))
    assert g.n_objects == 2 and g.n_arrows == 8
    assert all(len(g.hom(x, y)) == 2 for x in g.objects for y in g.objects)


def test_restriction_needs_cover():
    with pytest.raises(NotACover):
        restriction(pair_groupoid(2), [0])


def test_action_groupoid_on_cosets():
    s3 = symmetric_group(3)
    xs = coset_gset(s3, transposition_subgroup(s3))
    g = validate_groupoid(action_groupoid(s3, xs))
    assert g.n_objects == 3 and g.n_arrows == 18
    assert all(len(g.aut(x)) == 2 for x in g.objects)


def test_regular_action_is_pair():
    z3 = cyclic_group(3)
    xs = GSet(z3, 3, z3.mul)
    g = validate_groupoid(action_groupoid(z3, xs))
    assert iso_check(g, pair_groupoid(3)) is not None


def test_translation_groupoid_is_contractible():
    e = validate_groupoid(translation_groupoid(delooping(cyclic_group(2))))
    assert e.n_objects == 2 and e.n_arrows == 4
    assert iso_check(e, pair_groupoid(2)) is not None


def test_groupoid_action_validation():
    # identities fix points, cross arrows collapse to the least point over
    # the target; two points over object 0 make the round trip non-unital
    g = pair_groupoid(2)
    anchor = [0, 0, 1]
    act = {}
    for a in g.arrows:
        for x in range(3):
            if g.src[a] != anchor[x]:
                continue
            if g.src[a] == g.tgt[a]:
                act[(a, x)] = x
            else:
                act[(a, x)] = min(y for y in range(3) if anchor[y] == g.tgt[a])
    xs = GSet(g, 3, act, anchor=anchor)
    with pytest.raises(NonAssociative):
        validate_gset(xs)


def test_borel_quotient_matches_action_groupoid():
    for group, xs in [
        (cyclic_group(3), GSet(cyclic_group(3), 3, cyclic_group(3).mul)),
        (symmetric_group(3), None),
    ]:
        if xs is None:
            xs = coset_gset(group, transposition_subgroup(group))
        n, nx = group.n, xs.n_carrier
        borel = product(pair_groupoid(n), unit_groupoid(nx))
        obj_perms, arr_perms = [], []
        for g in range(n):
            obj_perms.append([group.mul[g][u] * nx + xs.act[g][x]
                              for u in range(n) for x in range(nx)])
            arr_perms.append([(group.mul[g][u] * n + group.mul[g][v]) * nx + xs.act[g][x]
                              for u in range(n) for v in range(n) for x in range(nx)])
        quo = validate_groupoid(quotient_groupoid(borel, obj_perms, arr_perms))
        act = validate_groupoid(action_groupoid(group, xs))
        assert quo.n_objects == act.n_objects
        assert quo.n_arrows == act.n_arrows
        assert iso_check(quo, act) is not None


def test_quotient_requires_freeness():
    g = unit_groupoid(3)
    with pytest.raises(NotFree):
        quotient_groupoid(g, [[0, 1, 2], [0, 2, 1]], [[0, 1, 2], [0, 2, 1]])


def trivial_z2_bundle(n_base):
    z2 = cyclic_group(2)
    n = 2 * n_base
    proj = [p // 2 for p in range(n)]
    act = [list(range(n)), [p ^ 1 for p in range(n)]]
    return Bundle(z2, n, n_base, proj, act)


def test_gauge_of_trivial_bundle():
    g = validate_groupoid(gauge_groupoid(trivial_z2_bundle(3)))
    assert g.n_objects == 3 and g.n_arrows == 18
    assert iso_check(g, restriction(delooping(cyclic_group(2)), [0, 0, 0])) is not None


def test_gauge_rejects_non_principal():
    z2 = cyclic_group(2)
    fixed = Bundle(z2, 2, 1, [0, 0], [[0, 1], [0, 1]])
    with pytest.raises(NotPrincipal):
        gauge_groupoid(fixed)
    lopsided = Bundle(z2, 3, 2, [0, 0, 1], [[0, 1, 2], [1, 0, 2]])
    with pytest.raises(NotPrincipal):
        gauge_groupoid(lopsided)


def test_iso_check_distinguishes_z4_from_klein():
    z4 = delooping(cyclic_group(4))
    klein = delooping(product_group(cyclic_group(2), cyclic_group(2)))
    assert iso_check(z4, klein) is None


def test_iso_check_respects_counts():
    assert iso_check(pair_groupoid(2), unit_groupoid(2)) is None


def test_iso_check_budget():
    got = iso_check(pair_groupoid(5), pair_groupoid(5), budget=3)
    assert isinstance(got, Indeterminate)


def test_iso_inverse_roundtrip():
    e = translation_groupoid(delooping(cyclic_group(2)))
    iso = iso_check(e, pair_groupoid(2))
    back = iso.inverse()
    assert [back.obj_map[y] for y in iso.obj_map] == list(range(e.n_objects))
    assert [back.arr_map[b] for b in iso.arr_map] == list(range(e.n_arrows))


def test_group_table_checks():
    with pytest.raises(GroupoidError):
        FinGroup([[0, 1], [1, 1]])
    s3 = symmetric_group(3)
    assert s3.n == 6
    assert s3.order_of(s3.labels.index((1, 0, 2))) == 2
    assert s3.order_of(s3.labels.index((1, 2, 0))) == 3
    assert len(transposition_subgroup(s3)) == 2
    assert len(s3.left_cosets(transposition_subgroup(s3))) == 3


def test_z6_splits():
    z6 = delooping(cyclic_group(6))
    z2xz3 = delooping(product_group(cyclic_group(2), cyclic_group(3)))
    assert iso_check(z6, z2xz3) is not None


def test_gset_validation_catches_bad_action():
    z2 = cyclic_group(2)
    xs = GSet(z2, 2, [[0, 1], [1, 1]])
    with pytest.raises(NonAssociative):
        validate_gset(xs)
