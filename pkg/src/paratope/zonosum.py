"""Deciding whether P + Z(U) (a Voronoi parallelotope plus a zonotope of
segments) is again a parallelotope, and enumerating the minimal infeasible /
maximal feasible generator subsets up to lattice symmetry.

The sum is centrally symmetric, so the decision reduces to two checks on its
facet structure: every facet is centrally symmetric, and every coplanar cycle
of facets around a codimension-2 face has length 4 or 6.  Neither check needs
the sum's vertices:

* a facet of the sum in direction c is F_P(c) + (zonotope part) + shift, and a
  Minkowski sum with a centrally symmetric summand is centrally symmetric
  exactly when F_P(c) is (Radstrom cancellation), so the test runs on P alone;
* the facet cycles live in 2-planes of normals and are read off from shadow
  polygons: the projection of the sum onto a plane of normals is the projected
  vertex hull of P plus a 2D zonotope.

States are extended one segment at a time.  Adding z(u) refines the normal fan
by the hyperplane orthogonal to u: every old facet normal survives, each facet
cycle strictly crossed by the hyperplane gains the crossing ray, and brand-new
cycles can only appear in planes orthogonal to u, which are scanned directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .exact import (Subspace, canonical_line, inverse, matmul, matvec,
                    primitive, qmat, qvec, rref, transpose, vdot, vsub)
from .freedom import free_lines, is_free
from .polyhedra import hull2d, polygon_edge_normals, polygon_minkowski
from .symmetry import PermutationGroup, gram_automorphisms
from .voronoi import VoronoiPolytope, belts


class NotFinitelyFree(ValueError):
    pass


class FanInconsistency(AssertionError):
    """The maintained facet/cycle data contradicts a shadow polygon."""


@dataclass(frozen=True)
class SumSpec:
    polytope: VoronoiPolytope
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(qvec(u)) for u in self.generators)
        object.__setattr__(self, "generators", gens)
        lines = set()
        for u in gens:
            if all(x == 0 for x in u):
                raise ValueError("zero generator")
            line = canonical_line(u)
            if line in lines:
                raise ValueError("parallel generators")
            lines.add(line)
            if not is_free(self.polytope, u):
                raise ValueError("generator is not a free direction")


@dataclass(frozen=True)
class FaceClassification:
    face: object
    U1: tuple
    U2: tuple
    U3: tuple


@dataclass(frozen=True)
class VenkovReport:
    is_parallelotope: bool
    facet_count: int
    belt_histogram: dict
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class OrbitInfo:
    rep: tuple            # generator indices, canonical (lex-least) form
    size: int             # |U|
    dim: int              # rank of the spanned subspace
    orbit_size: int
    stabilizer_order: int


@dataclass(frozen=True)
class FreedomRow:
    free_count: int
    min_forbidden_orbits: int
    max_feasible_orbits: int
    dim_max: int
    size_max: int


# ---------------------------------------------------------------------------
# generator trichotomy at a face

def classify_generators(P: VoronoiPolytope, G, U) -> FaceClassification:
    """Split U at the face G: U2 = generators in the face's linear hull; U3 =
    generators strictly transversal (some containing-facet normal positive,
    another negative); U1 = the rest (tangent on one side)."""
    lin = P.face_lin(G)
    u1, u2, u3 = [], [], []
    normals = [qvec(P.facet_normals[i]) for i in _bit_indices(G.fset)]
    for u in U:
        uq = qvec(u)
        if lin.contains(uq):
            u2.append(tuple(uq))
            continue
        vals = [vdot(p, uq) for p in normals]
        if any(x > 0 for x in vals) and any(x < 0 for x in vals):
            u3.append(tuple(uq))
        else:
            u1.append(tuple(uq))
    return FaceClassification(face=G, U1=tuple(u1), U2=tuple(u2), U3=tuple(u3))


def _bit_indices(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# ---------------------------------------------------------------------------
# fan state: facet normals plus the cyclic facet sequence of every belt

@dataclass(frozen=True)
class SumState:
    normals: frozenset     # signed primitive integer facet normals
    cycles: tuple          # per belt plane: facet normals in cyclic order


def _plane_key(c1, c2, n):
    return Subspace.from_spanning([qvec(c1), qvec(c2)], n).basis


def _cycle_plane_key(cycle, n):
    return _plane_key(cycle[0], cycle[1], n)


def initial_state(P: VoronoiPolytope) -> SumState:
    """Fan state of P itself: facet normals and every belt ordered cyclically
    via its shadow polygon."""
    cycles = []
    for b in belts(P):
        basis = b.plane.basis
        cyc, poly = _plane_cycle(P, [], basis)
        if cyc is None or len(cyc) != b.length:
            raise FanInconsistency("belt of the base polytope has no "
                                   "consistent shadow cycle")
        cycles.append(cyc)
    return SumState(normals=frozenset(P.facet_normals), cycles=tuple(cycles))


def _shadow_polygon(P, U, basis):
    g1, g2 = qvec(basis[0]), qvec(basis[1])
    pts = {(vdot(g1, v), vdot(g2, v)) for v in P.vertices}
    poly = hull2d(pts)
    gens2 = [(vdot(g1, qvec(u)), vdot(g2, qvec(u))) for u in U]
    return polygon_minkowski(poly, gens2), (g1, g2)


def _plane_cycle(P, U, basis):
    """Shadow-polygon pass over one 2-plane of normals: returns (cycle, poly)
    where cycle is the cyclically ordered facet-normal sequence if the plane
    carries codimension-2 faces of P + Z(U), else (None, poly)."""
    n = P.dim
    poly, (g1, g2) = _shadow_polygon(P, U, basis)
    if len(poly) < 3:
        return None, poly
    enormals = polygon_edge_normals(poly)
    m = len(poly)
    gens = [qvec(u) for u in U]
    for i in range(m):
        d0, d1 = enormals[i - 1], enormals[i]
        d = (d0[0] + d1[0], d0[1] + d1[1])
        c = tuple(d[0] * g1[j] + d[1] * g2[j] for j in range(n))
        vals = [vdot(c, v) for v in P.vertices]
        top = max(vals)
        v0 = [P.vertices[j] for j, x in enumerate(vals) if x == top]
        rows = [vsub(v, v0[0]) for v in v0[1:]]
        rows += [u for u in gens if vdot(c, u) == 0]
        r = rref(rows)[1] if rows else 0
        if r == n - 2:
            cycle = tuple(primitive(tuple(d[0] * g1[j] + d[1] * g2[j]
                                          for j in range(n)))
                          for d in enormals)
            return cycle, poly
        if r > n - 2:
            raise FanInconsistency("shadow vertex lifts to a face of "
                                   "codimension < 2")
    return None, poly


def _facet_centrally_symmetric(P, c):
    c = qvec(c)
    vals = [vdot(c, v) for v in P.vertices]
    top = max(vals)
    face = [P.vertices[j] for j, x in enumerate(vals) if x == top]
    # reflection through the centroid m = sum/k, scaled by k: the image of a
    # vertex v is (2*sum - k*v)/k, so compare k-scaled copies.
    k = len(face)
    total = tuple(sum(v[i] for v in face) for i in range(P.dim))
    scaled = {tuple(k * x for x in v) for v in face}
    return all(tuple(2 * total[i] - k * v[i] for i in range(P.dim)) in scaled
               for v in face)


def _extend_state(P, U, state: SumState, u):
    """Fan state and Venkov verdict for P + Z(U + [u]) given the verified state
    for P + Z(U).  Returns (report_ok, witness, new_state)."""
    n = P.dim
    uq = qvec(u)
    new_cycles = []
    perp_planes = []          # belt planes orthogonal to u (unchanged)
    new_normals = set()
    for cyc in state.cycles:
        vals = [vdot(uq, qvec(c)) for c in cyc]
        if all(x == 0 for x in vals):
            perp_planes.append(_cycle_plane_key(cyc, n))
            new_cycles.append(cyc)
            continue
        out = []
        m = len(cyc)
        crossings = 0
        for i in range(m):
            out.append(cyc[i])
            a, b = vals[i], vals[(i + 1) % m]
            if a * b < 0:
                c_new = primitive(tuple(abs(b) * cyc[i][j]
                                        + abs(a) * cyc[(i + 1) % m][j]
                                        for j in range(n)))
                out.append(c_new)
                new_normals.add(c_new)
                crossings += 1
        if crossings not in (0, 2):
            raise FanInconsistency("cycle crossed other than 0 or 2 times")
        if len(out) > 6:
            return False, ("belt", _cycle_plane_key(cyc, n)), None
        new_cycles.append(tuple(out))

    # central symmetry of the brand-new facets (old ones are already verified)
    for line in sorted({canonical_line(c) for c in new_normals}):
        if not _facet_centrally_symmetric(P, line):
            return False, ("facet", line), None

    normals = set(state.normals) | new_normals
    for key in perp_planes:
        plane = Subspace(n, key)
        for c in new_normals:
            if plane.contains(qvec(c)):
                raise FanInconsistency("new facet normal inside an untouched "
                                       "belt plane")

    # new codim-2 cycles can only live in planes orthogonal to u
    perp_lines = sorted({canonical_line(c) for c in normals
                         if vdot(uq, qvec(c)) == 0})
    known = {_cycle_plane_key(cyc, n) for cyc in new_cycles}
    seen_planes = set()
    Uall = list(U) + [tuple(uq)]
    for i in range(len(perp_lines)):
        for j in range(i + 1, len(perp_lines)):
            key = _plane_key(perp_lines[i], perp_lines[j], n)
            if key in seen_planes or key in known:
                continue
            seen_planes.add(key)
            cyc, poly = _plane_cycle(P, Uall, key)
            if cyc is None:
                continue
            if len(cyc) not in (4, 6):
                return False, ("belt", key), None
            for c in cyc:
                if c not in normals:
                    raise FanInconsistency("cycle facet missing from the "
                                           "maintained normal set")
            new_cycles.append(cyc)
    return True, None, SumState(normals=frozenset(normals),
                                cycles=tuple(new_cycles))


# ---------------------------------------------------------------------------
# public operations

def sum_fan_rays(P: VoronoiPolytope, U):
    """Facet normals of P + Z(U): primitive signed primal vectors, sorted.
    The right-hand side of the facet in direction c is
    P.support(c) + sum(|c.u| for u in U)."""
    state = initial_state(P)
    done = []
    for u in U:
        ok, witness, state = _extend_state(P, done, state, u)
        if not ok:
            # fan rays exist regardless of the verdict only while each partial
            # sum is a parallelotope; outside that regime the incremental
            # bookkeeping is not valid.
            raise ValueError("partial sum is not a parallelotope; "
                             "facet fan not maintained: %r" % (witness,))
        done.append(tuple(qvec(u)))
    return sorted(state.normals)


def sum_belts(P: VoronoiPolytope, U):
    """Belts of P + Z(U), provided every partial sum is a parallelotope:
    a sorted list of (plane basis, belt length, canonical normal lines)."""
    state = initial_state(P)
    done = []
    for u in U:
        ok, witness, state = _extend_state(P, done, state, u)
        if not ok:
            raise ValueError("partial sum is not a parallelotope; "
                             "belts not maintained: %r" % (witness,))
        done.append(tuple(qvec(u)))
    out = []
    for cyc in state.cycles:
        lines = tuple(sorted({canonical_line(c) for c in cyc}))
        out.append((_cycle_plane_key(cyc, P.dim), len(cyc), lines))
    return sorted(out)


def venkov_check(P: VoronoiPolytope, U) -> VenkovReport:
    """Is P + Z(U) a parallelotope?  Segments are added one at a time; a
    failure at any partial sum settles the question (subsets of feasible
    generator sets are feasible), in which case facet_count and belt_histogram
    describe the last valid partial sum."""
    for u in U:
        if not is_free(P, u):
            return VenkovReport(False, len(P.facet_normals),
                                dict(Counter(len(b.facets) for b in belts(P))),
                                witness=("not_free", tuple(qvec(u))))
    state = initial_state(P)
    done = []
    for u in U:
        ok, witness, nxt = _extend_state(P, done, state, u)
        if not ok:
            return VenkovReport(False, len(state.normals),
                                dict(Counter(len(c) for c in state.cycles)),
                                witness=witness)
        state = nxt
        done.append(tuple(qvec(u)))
    return VenkovReport(True, len(state.normals),
                        dict(Counter(len(c) for c in state.cycles)))


# ---------------------------------------------------------------------------
# symmetry transport of states

def _perm_matrices(gens, perm, gram_inv):
    """Dual and primal matrices realizing a permutation of the generator
    vectors; the primal one must be integral (it maps the lattice to itself)."""
    n = len(gens[0])
    rows = []
    idx = []
    for i in range(len(gens)):
        if rref([qvec(gens[j]) for j in idx] + [qvec(gens[i])])[1] > len(idx):
            idx.append(i)
        if len(idx) == n:
            break
    X = [qvec(gens[i]) for i in idx]
    Y = [qvec(gens[perm[i]]) for i in idx]
    Gd = transpose(matmul(inverse(X), Y))
    Gp = transpose(inverse(Gd))
    for row in Gp:
        for x in row:
            if x.denominator != 1:
                raise FanInconsistency("symmetry does not preserve the "
                                       "normal lattice")
    Gp = [[int(x) for x in row] for row in Gp]
    return Gd, Gp


def _transform_state(state: SumState, Gp):
    def tv(c):
        return tuple(sum(Gp[i][j] * c[j] for j in range(len(c)))
                     for i in range(len(Gp)))
    return SumState(normals=frozenset(tv(c) for c in state.normals),
                    cycles=tuple(tuple(tv(c) for c in cyc)
                                 for cyc in state.cycles))


# ---------------------------------------------------------------------------
# feasibility enumeration up to symmetry

def enumerate_feasible(P: VoronoiPolytope, generators, max_size=None,
                       jobs=1, progress=None):
    """Level-wise search over subsets of the generator directions, one
    representative per symmetry orbit: returns orbit representatives of the
    minimal infeasible and the maximal feasible subsets."""
    fl = free_lines(P)
    if not fl.finitely_free:
        raise NotFinitelyFree("the free directions do not form finitely "
                              "many lines")
    gens = [tuple(qvec(u)) for u in generators]
    for u in gens:
        if not is_free(P, u):
            raise ValueError("generator is not free: %r" % (u,))
    gram_inv = inverse(P.lattice.gram)
    group = gram_automorphisms(gens, gram_inv)
    matrices = {}

    def primal_matrix(perm):
        if perm not in matrices:
            matrices[perm] = _perm_matrices(gens, perm, gram_inv)[1]
        return matrices[perm]

    def mask(subset):
        m = 0
        for i in subset:
            m |= 1 << i
        return m

    def dim_of(subset):
        return rref([qvec(gens[i]) for i in subset])[1]

    state0 = initial_state(P)
    current = {(): state0}
    feasible_canons = {()}
    forbidden_canons = set()
    forbidden_masks = []
    minimal_forbidden = []
    maximal_feasible = []
    level = 0
    while current and (max_size is None or level < max_size):
        level += 1
        verdicts = {}
        next_states = {}
        for U, st in sorted(current.items()):
            used = set(U)
            has_ext = False
            for x in range(len(gens)):
                if x in used:
                    continue
                canon, g = group.min_image(set(U) | {x})
                if canon not in verdicts:
                    m = mask(canon)
                    if any(fm & m == fm for fm in forbidden_masks):
                        verdicts[canon] = False
                        forbidden_canons.add(canon)
                    else:
                        ok, witness, nst = _extend_state(P, list(map(
                            lambda i: gens[i], U)), st, gens[x])
                        verdicts[canon] = ok
                        if ok:
                            next_states[canon] = _transform_state(
                                nst, primal_matrix(g))
                            feasible_canons.add(canon)
                        else:
                            forbidden_canons.add(canon)
                            minimal = all(
                                group.min_image(set(canon) - {y})[0]
                                in feasible_canons for y in canon)
                            if minimal:
                                orbit = group.subset_orbit(canon)
                                forbidden_masks.extend(mask(s) for s in orbit)
                                minimal_forbidden.append(OrbitInfo(
                                    rep=canon, size=len(canon),
                                    dim=dim_of(canon), orbit_size=len(orbit),
                                    stabilizer_order=group.order // len(orbit)))
                if verdicts[canon]:
                    has_ext = True
            if not has_ext:
                osize = len(group.subset_orbit(U))
                maximal_feasible.append(OrbitInfo(
                    rep=U, size=len(U), dim=dim_of(U), orbit_size=osize,
                    stabilizer_order=group.order // osize))
        if progress:
            progress(level, len(next_states), len(minimal_forbidden),
                     len(maximal_feasible))
        current = next_states
    if max_size is not None and current:
        # sets still alive at the cutoff are reported as maximal-so-far
        for U in sorted(current):
            osize = len(group.subset_orbit(U))
            maximal_feasible.append(OrbitInfo(
                rep=U, size=len(U), dim=dim_of(U), orbit_size=osize,
                stabilizer_order=group.order // osize))
    minimal_forbidden.sort(key=lambda o: (o.size, o.rep))
    maximal_feasible.sort(key=lambda o: (o.size, -o.stabilizer_order, o.rep))
    return {"minimal_forbidden_orbits": minimal_forbidden,
            "maximal_feasible_orbits": maximal_feasible,
            "group_order": group.order}


def freedom_report(P: VoronoiPolytope, generators=None, enumeration=None):
    """The five summary statistics of the free structure: number of free
    lines, orbit counts of minimal infeasible and maximal feasible subsets,
    and the maximal dimension and size over maximal feasible subsets."""
    fl = free_lines(P)
    if not fl.lines:
        return FreedomRow(0, 0, 0, 0, 0)
    if not fl.finitely_free:
        raise NotFinitelyFree("infinitely many free directions")
    if generators is None:
        generators = fl.lines
    if enumeration is None:
        enumeration = enumerate_feasible(P, generators)
    maxf = enumeration["maximal_feasible_orbits"]
    return FreedomRow(
        free_count=len(fl.lines),
        min_forbidden_orbits=len(enumeration["minimal_forbidden_orbits"]),
        max_feasible_orbits=len(maxf),
        dim_max=max((o.dim for o in maxf), default=0),
        size_max=max((o.size for o in maxf), default=0))
