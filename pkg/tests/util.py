"""Deterministic randomized construction recipes shared across test files."""

import random

from orbkit import core, bundles


def random_group(rng):
    """A group of order at most 8."""
    kind = rng.randrange(10)
    if kind < 7:
        return core.cyclic_group(rng.randrange(2, 9))
    if kind == 7:
        return core.symmetric_group(3)
    if kind == 8:
        return core.product_group(core.cyclic_group(2), core.cyclic_group(2))
    return core.product_group(core.cyclic_group(2), core.cyclic_group(4))


def random_subgroup(rng, g):
    return g.subgroup_closure([rng.randrange(g.n)])


def permuted_trivial_bundle(rng, group, n_base):
    """A trivial bundle with its point ids scrambled."""
    plain = bundles.trivial_bundle(group, n_base)
    n = plain.n_total
    perm = list(range(n))
    rng.shuffle(perm)
    inv = [0] * n
    for p, q in enumerate(perm):
        inv[q] = p
    act = [[perm[plain.act[g][inv[p]]] for p in range(n)]
           for g in range(group.n)]
    proj = [plain.proj[inv[p]] for p in range(n)]
    return bundles.PrincipalBundle(group, n_base, proj, act,
                                   point_labels=[plain.point_labels[inv[p]]
                                                 for p in range(n)])


def random_small_groupoid(rng):
    """A leaf construction with few arrows."""
    kind = rng.randrange(4)
    if kind == 0:
        return core.unit_groupoid(rng.randrange(1, 4))
    if kind == 1:
        return core.pair_groupoid(rng.randrange(2, 4))
    if kind == 2:
        return core.delooping(core.cyclic_group(rng.randrange(2, 5)))
    g = random_group(rng)
    return core.action_groupoid(
        g, core.coset_gset(g, random_subgroup(rng, g)))


def random_groupoid(rng, max_arrows=120):
    """One randomized construction composed from the library constructors."""
    while True:
        kind = rng.randrange(8)
        if kind == 0:
            g = random_small_groupoid(rng)
        elif kind == 1:
            g = core.product(random_small_groupoid(rng),
                             random_small_groupoid(rng))
        elif kind == 2:
            g = core.coproduct(random_small_groupoid(rng),
                               random_small_groupoid(rng))
        elif kind == 3:
            inner = random_small_groupoid(rng)
            cover = [rng.randrange(inner.n_objects)
                     for _ in range(inner.n_objects + rng.randrange(3))]
            cover.extend(range(inner.n_objects))
            rng.shuffle(cover)
            g = core.restriction(inner, cover)
        elif kind == 4:
            grp = random_group(rng)
            g = core.translation_groupoid(core.delooping(grp))
        elif kind == 5:
            g = core.gauge_groupoid(
                permuted_trivial_bundle(rng, random_group(rng),
                                        rng.randrange(1, 4)))
        elif kind == 6:
            grp = random_group(rng)
            sub = random_subgroup(rng, grp)
            g = core.action_groupoid(grp, core.coset_gset(grp, sub))
        else:
            g = core.delooping(random_group(rng))
        if g.n_arrows <= max_arrows:
            return g


def rng_for(name, index=0):
    return random.Random("%s-%d" % (name, index))
