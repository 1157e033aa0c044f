"""Lattice enumeration, checked against exhaustive box searches and
well-known vector counts of the root lattices."""

import itertools

import pytest

from paratope.exact import QQ, qvec, matvec, vdot
from paratope.lattices import (
    Lattice, builtin_lattice, short_vectors, closest_vectors,
    coset_minima, relevant_vectors, standard_vectors,
)


def brute_short(lat, bound, radius=4):
    out = []
    for x in itertools.product(range(-radius, radius + 1), repeat=lat.dim):
        if any(x) and lat.norm(qvec(x)) <= bound:
            out.append(tuple(QQ(c) for c in x))
    return sorted(out)


@pytest.mark.parametrize("name,bound", [("Z2", 2), ("A2", 4), ("A3", 4),
                                        ("D4", 4)])
def test_short_vectors_match_brute_force(name, bound):
    lat = builtin_lattice(name)
    assert short_vectors(lat, bound) == brute_short(lat, bound)


@pytest.mark.parametrize("name,count", [
    ("Z4", 8), ("A2", 6), ("A3", 12), ("D4", 24), ("E6", 72), ("E8", 240)])
def test_minimal_vector_counts(name, count):
    lat = builtin_lattice(name)
    mn = min(lat.norm(v) for v in short_vectors(lat, 4))
    assert len([v for v in short_vectors(lat, mn) if lat.norm(v) == mn]) \
        == count


def test_closest_vectors_brute_force():
    lat = builtin_lattice("A3")
    target = qvec(["1/3", "-1/2", "2/5"])
    got = closest_vectors(lat, target)
    best = min(lat.norm(qvec([t - c for t, c in zip(target, x)]))
               for x in itertools.product(range(-3, 4), repeat=3))
    for x in got:
        d = qvec([t - c for t, c in zip(target, x)])
        assert lat.norm(d) == best
    brute = [x for x in itertools.product(range(-3, 4), repeat=3)
             if lat.norm(qvec([t - c for t, c in zip(target, qvec(x))]))
             == best]
    assert len(got) == len(brute)


def test_coset_minima_structure():
    lat = builtin_lattice("A2")
    cosets = coset_minima(lat)
    assert len(cosets) == 2 ** lat.dim - 1
    for c in cosets:
        for m in c.minima:
            assert lat.norm(m) == c.min_norm
            assert all((a - b) % 2 == 0 for a, b in zip(m, c.rep))
        assert c.simple == (len(c.minima) == 2)


@pytest.mark.parametrize("name,count", [
    ("Z3", 6), ("A2", 6), ("A3", 12), ("D4", 24)])
def test_relevant_vector_counts(name, count):
    lat = builtin_lattice(name)
    rel = relevant_vectors(lat)
    assert len(rel) == count
    assert sorted(tuple(-x for x in v) for v in rel) == sorted(rel)


def test_standard_vectors_one_line_per_coset():
    lat = builtin_lattice("A3")
    sv = standard_vectors(lat)
    assert len(sv) == 2 ** lat.dim - 1
    total = {tuple(s * c for c in m)
             for minima in sv.values() for m in minima for s in (1, -1)}
    for rep, minima in sv.items():
        n0 = lat.norm(minima[0])
        assert all(lat.norm(m) == n0 for m in minima)
    # minima already come in +/- pairs, so the closure adds nothing
    assert len(total) == sum(len(m) for m in sv.values())


def test_builtin_duals_and_errors():
    from paratope.exact import inverse
    e6 = builtin_lattice("E6")
    e6s = builtin_lattice("E6*")
    assert e6s.gram == tuple(tuple(r) for r in inverse(e6.gram))
    with pytest.raises(ValueError):
        builtin_lattice("E9")
    with pytest.raises(ValueError):
        builtin_lattice("Z11")


def test_gram_must_be_positive_definite():
    with pytest.raises(ValueError):
        Lattice(((1, 2), (2, 1)))
