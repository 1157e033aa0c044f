"""Free vectors of a Voronoi parallelotope: the per-belt orthogonality test,
enumeration of all maximal free subspaces, the six-belt sign condition,
decomposability via the graph on opposite-facet pairs, and the lattice map
induced by adding a free segment.

Free directions live in dual coordinates; facet normals are integer lattice
vectors in primal coordinates; the pairing is the plain dot product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .exact import (QQ, Subspace, canonical_line, inverse, matvec, nullspace,
                    primitive, qvec, vdot)
from .voronoi import VoronoiPolytope, belts


class NotFree(ValueError):
    pass


class RankDefect(ValueError):
    pass


class DecomposableInput(ValueError):
    pass


@dataclass(frozen=True)
class FreedomResult:
    lines: list                 # primitive integer directions, dual coords
    finitely_free: bool
    residual_subspaces: list    # maximal solution subspaces of dim >= 2


@dataclass(frozen=True)
class SignConditionResult:
    holds: bool
    a: Optional[object] = None  # the common positive magnitude, when it exists


@dataclass(frozen=True)
class SegmentSumLatticeMap:
    v: tuple                    # segment direction, dual coordinates
    e_v: tuple                  # primitive integer covector on the lattice
    action: Callable            # x -> x + 2 (e_v . x) c, primal coordinates

    def n(self, x):
        return vdot(self.e_v, qvec(x))


def _six_belts(P: VoronoiPolytope):
    return [b for b in belts(P) if b.length == 6]


def is_free(P: VoronoiPolytope, v) -> bool:
    """True iff for every 6-belt the direction pairs to zero with at least one
    of the three opposite-facet normal lines."""
    v = qvec(v)
    for b in _six_belts(P):
        if all(vdot(qvec(p), v) != 0 for p in b.normal_lines(P)):
            return False
    return True


def _restrict_to_hyperplane(V: Subspace, p):
    """V ∩ {x : p.x = 0}."""
    vals = [vdot(qvec(p), b) for b in V.basis]
    if all(x == 0 for x in vals):
        return V
    coeffs = nullspace([vals])
    new_basis = []
    for c in coeffs:
        vec = tuple(sum(c[j] * V.basis[j][i] for j in range(V.dim))
                    for i in range(V.ambient))
        new_basis.append(vec)
    return Subspace.from_spanning(new_basis, V.ambient)


def free_lines(P: VoronoiPolytope) -> FreedomResult:
    """All maximal subspaces V such that every vector of V is free: depth-first
    over the 6-belts, choosing per belt one of the three normal lines to be
    orthogonal to, pruning and memoizing on the current subspace."""
    n = P.dim
    triples = [tuple(qvec(p) for p in b.normal_lines(P)) for b in _six_belts(P)]
    solutions = {}
    seen = set()

    def satisfied(trip, V):
        return any(all(vdot(p, b) == 0 for b in V.basis) for p in trip)

    def rec(i, V):
        if V.dim == 0:
            return
        while i < len(triples) and satisfied(triples[i], V):
            i += 1
        key = (i, V.basis)
        if key in seen:
            return
        seen.add(key)
        if i == len(triples):
            solutions[V.basis] = V
            return
        for p in triples[i]:
            rec(i + 1, _restrict_to_hyperplane(V, p))

    rec(0, Subspace.full(n))

    # keep only subspaces not contained in another solution
    sols = list(solutions.values())
    maximal = []
    for V in sols:
        contained = any(W is not V and W.dim > V.dim
                        and all(W.contains(b) for b in V.basis)
                        for W in sols)
        if not contained:
            maximal.append(V)

    lines = sorted(canonical_line(primitive(V.basis[0]))
                   for V in maximal if V.dim == 1)
    residual = [V for V in maximal if V.dim >= 2]
    return FreedomResult(lines=lines, finitely_free=not residual,
                         residual_subspaces=residual)


def is_decomposable(P: VoronoiPolytope):
    """Connectivity of the graph whose nodes are opposite-facet pairs and whose
    edges join pairs sharing a 6-belt. Returns (decomposable, components)."""
    nodes = sorted({canonical_line(z) for z in P.facet_normals})
    idx = {p: i for i, p in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for b in _six_belts(P):
        lines = [idx[p] for p in b.normal_lines(P)]
        for j in lines[1:]:
            parent[find(j)] = find(lines[0])

    comps = {}
    for p, i in idx.items():
        comps.setdefault(find(i), []).append(p)
    components = [tuple(sorted(c)) for c in comps.values()]
    components.sort()
    return len(components) > 1, components


def sign_condition(P: VoronoiPolytope, v) -> SignConditionResult:
    """True iff there is a single a > 0 such that for every 6-belt the six
    products with the facet normals are all zero, or exactly two are zero and
    the remaining four equal ±a."""
    decomposable, _ = is_decomposable(P)
    if decomposable:
        raise DecomposableInput("sign condition requires a connected graph of "
                                "opposite-facet pairs sharing 6-belts")
    v = qvec(v)
    if all(x == 0 for x in v):
        raise ValueError("direction must be nonzero")
    a_values = set()
    for b in _six_belts(P):
        prods = [vdot(qvec(P.facet_normals[i]), v) for i in b.facets]
        zeros = [x for x in prods if x == 0]
        if len(zeros) == 6:
            continue
        if len(zeros) != 2:
            return SignConditionResult(holds=False)
        mags = {abs(x) for x in prods if x != 0}
        if len(mags) != 1:
            return SignConditionResult(holds=False)
        a_values |= mags
        if len(a_values) > 1:
            return SignConditionResult(holds=False)
    if not a_values:
        return SignConditionResult(holds=False)
    return SignConditionResult(holds=True, a=next(iter(a_values)))


def segment_sum_map(P: VoronoiPolytope, v) -> SegmentSumLatticeMap:
    """The lattice map x -> x + 2 n(x) v induced by adding the segment z(v):
    facet vectors orthogonal to v span a corank-1 sublattice, and n is the
    primitive integer functional vanishing on it."""
    v = qvec(v)
    if not is_free(P, v):
        raise NotFree("direction is not free for this parallelotope")
    n = P.dim
    parallel = [z for z in P.facet_normals if vdot(qvec(z), v) == 0]
    if not parallel or Subspace.from_spanning([qvec(z) for z in parallel],
                                              n).dim != n - 1:
        raise RankDefect("facets parallel to the direction span rank < n-1")
    kernel = nullspace([qvec(z) for z in parallel])
    assert len(kernel) == 1
    e_v = canonical_line(primitive(kernel[0]))
    c = matvec(inverse(P.lattice.gram), v)
    # orient the layer functional along the segment: layer k shifts by +2kv
    if vdot(e_v, c) < 0:
        e_v = tuple(-x for x in e_v)

    def action(x):
        x = qvec(x)
        t = 2 * vdot(e_v, x)
        return tuple(x[i] + t * c[i] for i in range(n))

    return SegmentSumLatticeMap(v=tuple(v), e_v=e_v, action=action)
