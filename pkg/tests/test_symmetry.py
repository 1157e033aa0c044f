"""Permutation groups from Gram automorphisms: orders, orbits, canonical
forms."""

import random

from paratope.exact import QQ, qmat
from paratope.lattices import builtin_lattice, relevant_vectors
from paratope.symmetry import (
    PermutationGroup, gram_automorphisms, subset_orbits, stabilizer_order,
)

rng = random.Random(3)


def vector_group(name):
    lat = builtin_lattice(name)
    vecs = [tuple(int(c) for c in v) for v in relevant_vectors(lat)]
    return gram_automorphisms(vecs, lat.gram), vecs


def test_hexagon_symmetry_order():
    grp, vecs = vector_group("A2")
    assert grp.order == 12


def test_cube_symmetry_order():
    grp, _ = vector_group("Z3")
    assert grp.order == 48


def test_d4_symmetry_order():
    grp, _ = vector_group("D4")
    # Weyl group of F4 (the 24-cell is self-dual)
    assert grp.order == 1152


def test_orbit_stabilizer_product():
    grp, vecs = vector_group("A3")
    n = len(vecs)
    for _ in range(10):
        k = rng.randint(1, n - 1)
        s = tuple(sorted(rng.sample(range(n), k)))
        orbit = grp.subset_orbit(s)
        assert grp.order == len(orbit) * grp.stabilizer_order(s)


def test_min_image_constant_on_orbit():
    grp, vecs = vector_group("A3")
    s = (0, 2, 5)
    canon, _ = grp.min_image(s)
    orbit = grp.subset_orbit(s)
    for t in orbit:
        assert grp.min_image(tuple(sorted(t)))[0] == canon
    assert frozenset(canon) in orbit


def test_min_image_witness_maps_subset():
    grp, _ = vector_group("D4")
    s = (1, 3, 8, 10)
    canon, g = grp.min_image(s)
    assert tuple(sorted(g[i] for i in s)) == canon


def test_subset_orbits_partition():
    grp, vecs = vector_group("A2")
    import itertools
    subs = [tuple(c) for c in itertools.combinations(range(6), 2)]
    orbs = subset_orbits(grp, subs)
    reps = {grp.min_image(s)[0] for s in subs}
    assert len(orbs) == len(reps)
    for canon, osize, stab in orbs:
        assert osize * stab == grp.order


def test_contains_and_strong_generators():
    grp, _ = vector_group("A2")
    gens = grp.strong_generators()
    assert all(grp.contains(g) for g in gens)
    n = len(gens[0])
    assert grp.contains(tuple(range(n)))
    # membership test agrees with explicit orbit expansion of the identity
    import itertools
    elements = {tuple(range(n))}
    frontier = list(elements)
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                c = tuple(g[e[i]] for i in range(n))
                if c not in elements:
                    elements.add(c)
                    nxt.append(c)
        frontier = nxt
    assert len(elements) == grp.order
    for p in itertools.permutations(range(n)):
        assert grp.contains(p) == (p in elements)
