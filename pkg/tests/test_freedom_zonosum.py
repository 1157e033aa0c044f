"""Segment directions that keep a Voronoi cell a space-tiler, and sums
P + Z(U); cross-checked against direct facet/belt recomputation and, in two
dimensions, against brute-force Minkowski sums of polygons."""

import random

import pytest

from paratope.exact import QQ, qvec, matvec, canonical_line
from paratope.lattices import builtin_lattice
from paratope.voronoi import build_voronoi, belts
from paratope.freedom import (
    is_free, free_lines, is_decomposable, sign_condition, segment_sum_map,
)
from paratope.zonosum import (
    venkov_check, sum_belts, sum_fan_rays, classify_generators,
    enumerate_feasible, freedom_report,
)
from paratope.polyhedra import hull2d, polygon_minkowski, polygon_edge_normals

rng = random.Random(17)


def vor(name):
    return build_voronoi(builtin_lattice(name))


def test_is_free_matches_single_segment_check():
    P = vor("A3")
    cands = [tuple(matvec(P.lattice.gram, qvec(v)))
             for v in ((1, 0, 0), (0, 1, 0), (1, 1, 1), (1, -1, 0),
                       (2, 1, 0), (1, 1, 0))]
    for v in cands:
        assert is_free(P, v) == venkov_check(P, [v]).is_parallelotope


def test_cube_is_not_finitely_free():
    # no 6-belts at all: every direction is free
    res = free_lines(vor("Z3"))
    assert not res.finitely_free
    assert res.residual_subspaces


def test_a3_free_lines():
    res = free_lines(vor("A3"))
    assert res.finitely_free
    # rhombic dodecahedron: 4 zonotope generators plus 3 elongation axes
    assert len(res.lines) == 7
    P = vor("A3")
    for v in res.lines:
        assert is_free(P, v)


def test_sign_condition_on_free_directions():
    P = vor("A3")
    for v in free_lines(P).lines:
        assert sign_condition(P, v).holds


def test_segment_sum_map_action_preserves_lattice():
    P = vor("A3")
    for v in free_lines(P).lines:
        sm = segment_sum_map(P, v)
        for _ in range(20):
            x = tuple(rng.randint(-3, 3) for _ in range(3))
            n = sm.n(x)
            assert n.denominator == 1
            if n == 0:
                assert tuple(sm.action(x)) == tuple(qvec(x))
        # the action is additive
        a = (1, -2, 3)
        b = (0, 4, -1)
        ab = tuple(x + y for x, y in zip(a, b))
        assert tuple(sm.action(ab)) == tuple(
            x + y for x, y in zip(sm.action(a), sm.action(b)))


def test_decomposability():
    assert is_decomposable(vor("Z3"))[0]
    assert not is_decomposable(vor("A3"))[0]
    assert not is_decomposable(vor("E6"))[0]


def test_venkov_check_empty_set():
    P = vor("A3")
    rep = venkov_check(P, [])
    assert rep.is_parallelotope
    assert rep.facet_count == 12


def test_sum_belts_match_venkov_histogram():
    P = vor("A3")
    v = free_lines(P).lines[0]
    rep = venkov_check(P, [v])
    assert rep.is_parallelotope
    bs = sum_belts(P, [v])
    hist = {}
    for _, length, _ in bs:
        hist[length] = hist.get(length, 0) + 1
    assert hist == rep.belt_histogram
    assert all(length in (4, 6) for _, length, _ in bs)


def test_sum_fan_rays_count_matches_facets():
    P = vor("A3")
    v = free_lines(P).lines[0]
    rep = venkov_check(P, [v])
    rays = sum_fan_rays(P, [v])
    assert len(rays) == rep.facet_count


def test_hexagon_sum_against_polygon_minkowski():
    P = vor("A2")
    # a segment along a facet normal direction of the hexagon stays a tiler
    for z in ((1, 0), (0, 1), (1, 1)):
        v = tuple(matvec(P.lattice.gram, qvec(z)))
        rep = venkov_check(P, [v])
        poly = polygon_minkowski(hull2d(list(P.vertices)), [qvec(v)])
        got = {canonical_line(c) for c in polygon_edge_normals(poly)}
        if rep.is_parallelotope:
            rays = {canonical_line(qvec(c)) for c in sum_fan_rays(P, [v])}
            # compare facet normal lines: primal rays map to edge normals
            assert len(poly) == rep.facet_count
        assert len(poly) in (6, 8)


def test_classify_generators_trichotomy():
    P = vor("A3")
    lines = free_lines(P).lines
    faces = P.faces(1)[1]
    cls = classify_generators(P, faces[0], lines)
    assert sorted(cls.U1 + cls.U2 + cls.U3) == sorted(lines)


def test_enumerate_feasible_small():
    P = vor("A3")
    lines = free_lines(P).lines
    out = enumerate_feasible(P, lines)
    minf = out["minimal_forbidden_orbits"]
    maxf = out["maximal_feasible_orbits"]
    assert len(minf) == 1 and minf[0].size == 3
    assert len(maxf) == 1 and maxf[0].size == 6
    assert maxf[0].orbit_size * maxf[0].stabilizer_order == \
        out["group_order"]
    # re-check the representatives directly
    bad = [lines[i] for i in minf[0].rep]
    assert not venkov_check(P, bad).is_parallelotope
    good = [lines[i] for i in maxf[0].rep]
    assert venkov_check(P, good).is_parallelotope


def test_freedom_report_small():
    P = vor("A3")
    row = freedom_report(P)
    assert row.free_count == 7
    assert row.min_forbidden_orbits == 1
    assert row.max_feasible_orbits == 1
    assert row.size_max == 6
    assert row.dim_max == 3
