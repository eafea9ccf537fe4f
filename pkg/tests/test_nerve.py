"""Nerve chains, boundary matrices, homology tables, homotopy invariants."""

import pytest

from orbkit import (
    GroupoidFunctor,
    GSet,
    action_groupoid,
    chain_complex,
    coproduct,
    coset_gset,
    cyclic_group,
    delooping,
    homology,
    homotopy_quotient_check,
    nerve,
    pair_groupoid,
    pi0,
    pi1,
    restriction,
    symmetric_group,
    unit_groupoid,
    weak_equivalence_check,
)
from orbkit.smith import HAVE_COMPILED

needs_kernel = pytest.mark.skipif(
    not HAVE_COMPILED, reason="large boundary matrices need the compiled kernel")


def abelianization(group):
    """Quotient by the commutator subgroup, from the multiplication table."""
    comms = [group.mul[group.mul[group.inv[g]][group.inv[h]]][group.mul[g][h]]
             for g in group.elements for h in group.elements]
    derived = group.subgroup_closure(comms)
    cosets = group.left_cosets(derived)
    index = {c: i for i, c in enumerate(cosets)}
    mul = [[index[tuple(sorted(group.mul[group.mul[a[0]][b[0]]][d] for d in derived))]
            for b in cosets] for a in cosets]
    from orbkit import FinGroup
    return FinGroup(mul)


def test_nerve_sizes():
    nv = nerve(delooping(cyclic_group(2)), 6)
    assert [nv.size(n) for n in range(7)] == [1, 2, 4, 8, 16, 32, 64]
    nv2 = nerve(pair_groupoid(4), 3)
    assert [nv2.size(n) for n in range(4)] == [4, 16, 64, 256]


def test_simplicial_identities():
    s3 = symmetric_group(3)
    sub = s3.subgroup_closure([s3.labels.index((1, 0, 2))])
    g = action_groupoid(s3, coset_gset(s3, sub))
    nv = nerve(g, 3)
    for n in (2, 3):
        for c in nv.chains[n]:
            for j in range(1, n + 1):
                for i in range(j):
                    lhs = nv.face(n - 1, i, nv.face(n, j, c))
                    rhs = nv.face(n - 1, j - 1, nv.face(n, i, c))
                    assert lhs == rhs


def test_homology_b_z2():
    table = homology(chain_complex(nerve(delooping(cyclic_group(2)), 6)))
    assert table.rows[0] == (0, 1, ())
    assert table.rows[1] == (1, 0, (2,))
    assert table.rows[2] == (2, 0, ())
    assert table.rows[3] == (3, 0, (2,))
    assert table.rows[4] == (4, 0, ())
    assert table.rows[5] == (5, 0, (2,))


def test_homology_b_z3():
    table = homology(chain_complex(nerve(delooping(cyclic_group(3)), 4)))
    assert table.rows[1] == (1, 0, (3,))
    assert table.rows[2] == (2, 0, ())
    assert table.rows[3] == (3, 0, (3,))


def test_h1_is_abelianization():
    from orbkit import product_group
    groups = [cyclic_group(2), cyclic_group(3), cyclic_group(4),
              symmetric_group(3), product_group(cyclic_group(2), cyclic_group(2))]
    for group in groups:
        table = homology(chain_complex(nerve(delooping(group), 2)))
        n, rank, torsion = table.rows[1]
        ab = abelianization(group)
        assert rank == 0
        size = 1
        for d in torsion:
            size *= d
        assert size == ab.n
        max_order = max(ab.order_of(g) for g in ab.elements)
        assert (max(torsion) if torsion else 1) == max_order


@needs_kernel
def test_homology_b_s3_degree_three():
    # 2-part bounded by H3 of the Sylow 2-subgroup, 3-part by the Sylow 3;
    # both contribute exactly once, giving Z/6
    table = homology(chain_complex(nerve(delooping(symmetric_group(3)), 4)))
    assert table.rows[1] == (1, 0, (2,))
    assert table.rows[2] == (2, 0, ())
    assert table.rows[3] == (3, 0, (6,))


def test_pair_groupoid_acyclic():
    table = homology(chain_complex(nerve(pair_groupoid(4), 4)))
    assert table.rows[0] == (0, 1, ())
    for n in (1, 2, 3):
        assert table.rows[n] == (n, 0, ())


def test_mod_p_option():
    cx = chain_complex(nerve(delooping(cyclic_group(2)), 4))
    t2 = homology(cx, p=2)
    assert [r[1] for r in t2.rows] == [1, 1, 1, 1]
    t3 = homology(cx, p=3)
    assert [r[1] for r in t3.rows] == [1, 0, 0, 0]


def test_disjoint_union():
    g = coproduct(delooping(cyclic_group(2)), unit_groupoid(1))
    table = homology(chain_complex(nerve(g, 2)))
    assert table.rows[0] == (0, 2, ())
    assert table.rows[1] == (1, 0, (2,))
    assert len(pi0(g)) == 2


def test_pi1():
    s3 = symmetric_group(3)
    sub = s3.subgroup_closure([s3.labels.index((1, 0, 2))])
    g = action_groupoid(s3, coset_gset(s3, sub))
    assert pi1(g, 0).n == 2
    assert pi1(delooping(s3), 0).n == 6


def test_weak_equivalence_inclusion():
    b = delooping(cyclic_group(2))
    r = restriction(b, [0, 0])
    incl = GroupoidFunctor(
        b, r, [0],
        [next(a for a in r.arrows if r.arrow_labels[a] == (0, lab, 0))
         for lab in b.arrow_labels]).verify()
    assert weak_equivalence_check(incl).ok
    proj = GroupoidFunctor(r, b, [0, 0],
                           [r.arrow_labels[a][1] for a in r.arrows]).verify()
    assert weak_equivalence_check(proj).ok


def test_weak_equivalence_failures():
    b2, b4 = delooping(cyclic_group(2)), delooping(cyclic_group(4))
    doubling = GroupoidFunctor(b2, b4, [0], [0, 2]).verify()
    rep = weak_equivalence_check(doubling)
    assert not rep.ok and "surjective" in rep.reason
    collapse = GroupoidFunctor(unit_groupoid(2), unit_groupoid(1), [0, 0], [0, 0]).verify()
    assert not weak_equivalence_check(collapse).ok


def test_homotopy_quotient_small():
    z2 = cyclic_group(2)
    swap = GSet(z2, 2, [[0, 1], [1, 0]])
    rep = homotopy_quotient_check(z2, swap, top=3)
    assert rep.ok
    assert rep.action_table.rows[0] == (0, 1, ())
    point = GSet(z2, 1, [[0], [0]])
    rep2 = homotopy_quotient_check(z2, point, top=4)
    assert rep2.ok
    assert rep2.borel_table.rows[1] == (1, 0, (2,))
    assert rep2.borel_table.rows[3] == (3, 0, (2,))
    z3 = cyclic_group(3)
    rep3 = homotopy_quotient_check(z3, GSet(z3, 3, z3.mul), top=3)
    assert rep3.ok


@needs_kernel
def test_homotopy_quotient_s3_cosets():
    s3 = symmetric_group(3)
    sub = s3.subgroup_closure([s3.labels.index((1, 0, 2))])
    rep = homotopy_quotient_check(s3, coset_gset(s3, sub), top=3)
    assert rep.ok
    assert rep.action_table.rows[1] == (1, 0, (2,))
    assert rep.action_table.rows[2] == (2, 0, ())
