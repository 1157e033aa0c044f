"""Unimodular vector systems and their matroids: circuits, isomorphism,
and bounded graphic/cographic recognition.

A vector system is a list of nonzero integer vectors (the ground set).  Its
matroid is given by the minimal linearly dependent subsets (circuits).  A
system is unimodular when every vector has integer coordinates in every
basic subset, equivalently when all nonzero maximal minors share one
absolute value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact import det, qmat, qvec, rank


@dataclass(frozen=True)
class UnimodularSystem:
    vectors: tuple

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        if any(not any(v) for v in vecs):
            raise ValueError("zero vector in the ground set")
        object.__setattr__(self, "vectors", vecs)

    @property
    def size(self):
        return len(self.vectors)

    @property
    def rank(self):
        return rank([qvec(v) for v in self.vectors])

    def subrank(self, idx):
        return rank([qvec(self.vectors[i]) for i in idx])


def is_unimodular(sys: UnimodularSystem) -> bool:
    """All nonzero maximal (rank x rank) minors have one absolute value.

    The minors are taken over the pivot columns of the row space, which fixes
    a coordinate system on the span; every element then has integer (in fact
    0, +-1) coordinates in every basic subset iff the nonzero minors agree."""
    from .exact import rref
    r = sys.rank
    _, _, pivots = rref([qvec(v) for v in sys.vectors], pivots=True)
    cols = pivots
    value = None
    for rows in itertools.combinations(range(sys.size), r):
        mat = [sys.vectors[i] for i in rows]
        d = det(qmat([[mat[i][j] for j in cols] for i in range(r)]))
        if d == 0:
            continue
        d = abs(d)
        if value is None:
            value = d
        elif d != value:
            return False
    return value is not None


def circuits(sys: UnimodularSystem) -> tuple:
    """All minimal linearly dependent index subsets, sorted by (size, set)."""
    r = sys.rank
    out = []
    for k in range(1, r + 2):
        for idx in itertools.combinations(range(sys.size), k):
            if any(c <= set(idx) for c in out):
                continue
            if sys.subrank(idx) < k:
                out.append(set(idx))
    return tuple(tuple(sorted(c)) for c in
                 sorted(out, key=lambda c: (len(c), sorted(c))))


def validate_circuits(circs) -> bool:
    """The two circuit axioms: an antichain, and the exchange property."""
    sets = [set(c) for c in circs]
    for c1, c2 in itertools.combinations(sets, 2):
        if c1 <= c2 or c2 <= c1:
            return False
    for c1, c2 in itertools.permutations(sets, 2):
        for x in c1 & c2:
            union = (c1 | c2) - {x}
            if not any(c3 <= union for c3 in sets):
                return False
    return True


# ---------------------------------------------------------------------------
# matroid isomorphism via circuit families

def _element_profile(n, circs):
    prof = []
    for e in range(n):
        sizes = sorted(len(c) for c in circs if e in c)
        prof.append(tuple(sizes))
    return prof


def matroid_isomorphic(circs_a, circs_b, n):
    """A bijection of {0..n-1} carrying one circuit family onto the other,
    or None.  Backtracking on elements, pruned by per-element circuit-size
    profiles and by completed circuits."""
    ca = {frozenset(c) for c in circs_a}
    cb = {frozenset(c) for c in circs_b}
    if len(ca) != len(cb):
        return None
    pa = _element_profile(n, ca)
    pb = _element_profile(n, cb)
    if sorted(pa) != sorted(pb):
        return None
    order = sorted(range(n), key=lambda e: (pa[e], e))

    def extend(pos, image, used):
        if pos == n:
            mapped = {frozenset(image[e] for e in c) for c in ca}
            return image if mapped == cb else None
        e = order[pos]
        for t in range(n):
            if t in used or pb[t] != pa[e]:
                continue
            image[e] = t
            used.add(t)
            ok = True
            assigned = {x for x in order[:pos + 1]}
            for c in ca:
                if set(c) <= assigned:
                    if frozenset(image[x] for x in c) not in cb:
                        ok = False
                        break
            if ok:
                res = extend(pos + 1, image, used)
                if res is not None:
                    return res
            used.discard(t)
            image[e] = None
        return None

    return extend(0, [None] * n, set())


def systems_isomorphic(a: UnimodularSystem, b: UnimodularSystem):
    if a.size != b.size or a.rank != b.rank:
        return None
    return matroid_isomorphic(circuits(a), circuits(b), a.size)


# ---------------------------------------------------------------------------
# graphs: cycle and bond matroids

def _incidence_vectors(nv, edges):
    """Oriented vertex-edge incidence columns, one vector per edge."""
    out = []
    for (u, v) in edges:
        col = [0] * nv
        col[u] = 1
        col[v] = -1
        out.append(tuple(col))
    return out


def _connected(nv, edges):
    adj = {i: set() for i in range(nv)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == nv


def spanning_tree_count(nv, edges):
    """Kirchhoff: determinant of the reduced Laplacian."""
    lap = [[Fraction(0)] * nv for _ in range(nv)]
    for u, v in edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    red = [row[1:] for row in lap[1:]]
    return int(det(qmat(red)))


def _basis_count(sys: UnimodularSystem):
    r = sys.rank
    return sum(1 for idx in itertools.combinations(range(sys.size), r)
               if sys.subrank(idx) == r)


def _dual_vectors(nv, edges):
    """A representation of the bond matroid of the graph: the columns of a
    kernel basis of the incidence matrix, one vector per edge."""
    from .exact import nullspace
    inc = _incidence_vectors(nv, edges)
    ker = nullspace([qvec(v) for v in zip(*inc)])
    cols = list(zip(*ker))
    out = []
    for col in cols:
        den = 1
        for x in col:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append(tuple(int(x * den) for x in col))
    return out


def _gcd(a, b):
    import math
    return math.gcd(a, b)


class Unknown:
    """Search budget exhausted without a verdict."""

    def __repr__(self):
        return "Unknown"


UNKNOWN = Unknown()


def try_graphic(sys: UnimodularSystem, max_vertices=10):
    """Search for a connected simple graph whose cycle matroid matches the
    system.  Conclusive for systems without 1- or 2-element circuits: the
    graph then must be simple with rank+1 vertices.  Returns an edge list,
    None (no graph), or UNKNOWN (out of budget)."""
    target = circuits(sys)
    if any(len(c) <= 2 for c in target):
        return UNKNOWN
    nv = sys.rank + 1
    if nv > max_vertices:
        return UNKNOWN
    m = sys.size
    all_edges = list(itertools.combinations(range(nv), 2))
    if m > len(all_edges):
        return None
    nbases = _basis_count(sys)
    for edges in itertools.combinations(all_edges, m):
        if not _connected(nv, edges):
            continue
        if spanning_tree_count(nv, edges) != nbases:
            continue
        gsys = UnimodularSystem(_incidence_vectors(nv, edges))
        if matroid_isomorphic(target, circuits(gsys), m) is not None:
            return edges
    return None


def _cubic_graphs(nv):
    """All connected 3-regular simple graphs on nv labelled vertices
    (backtracking over vertex adjacencies)."""
    out = []
    edges = []
    deg = [0] * nv

    def rec(u):
        if u == nv:
            if all(d == 3 for d in deg) and _connected(nv, edges):
                out.append(tuple(edges))
            return
        need = 3 - deg[u]
        if need < 0:
            return
        cands = [v for v in range(u + 1, nv) if deg[v] < 3]
        if need > len(cands):
            return
        for chosen in itertools.combinations(cands, need):
            for v in chosen:
                deg[v] += 1
                edges.append((u, v))
            deg[u] += need
            rec(u + 1)
            deg[u] -= need
            for v in chosen:
                deg[v] -= 1
                edges.pop()

    rec(0)
    return out


def try_cographic(sys: UnimodularSystem, max_vertices=10):
    """Search for a connected graph whose bond matroid matches the system.
    Only the cubic case (2|edges| = 3|vertices|) is searched; anything else
    is out of budget."""
    m = sys.size
    nv = m - sys.rank + 1
    if nv > max_vertices or 2 * m != 3 * nv:
        return UNKNOWN
    target = circuits(sys)
    nbases = _basis_count(sys)
    for edges in _cubic_graphs(nv):
        if spanning_tree_count(nv, edges) != nbases:
            continue
        gsys = UnimodularSystem(_dual_vectors(nv, edges))
        if matroid_isomorphic(target, circuits(gsys), m) is not None:
            return edges
    return None


# ---------------------------------------------------------------------------
# the two special reference systems (12 elements, rank 6)

R12_MATRIX = (
    (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1),
    (1, 0, -1, 1, 0, 0), (0, 1, 1, -1, 0, 0), (0, 1, 0, -1, -1, -1),
    (-1, 0, 1, 0, 1, 0), (0, -1, 0, 1, 0, 1), (1, 0, -1, 0, -1, -1))

R10_C3_MATRIX = (
    (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1),
    (1, 0, -1, 1, 0, 0), (0, 1, 1, -1, 0, 0), (0, 1, 0, -1, -1, -1),
    (-1, 0, 1, 0, 1, 0), (1, 1, 0, 0, -1, 0), (0, -1, 0, 1, 1, 0))

# the same systems as label lists into the 27-vector E6 configuration
R12_LABELS = ("b2", "c26", "a2", "a3", "b1", "b5",
              "b3", "c36", "a4", "a1", "c14", "c15")
R10_C3_LABELS = ("b2", "c26", "a2", "a3", "b1", "b5",
                 "b3", "c36", "a4", "a1", "c16", "c45")


def classify(sys: UnimodularSystem, max_vertices=10):
    """Label a system: "graphic", "cographic", "R12", "R10+C3", "special"
    (provably neither graphic nor cographic but unmatched), or "unknown"."""
    g = try_graphic(sys, max_vertices)
    if isinstance(g, tuple):
        return "graphic"
    c = try_cographic(sys, max_vertices)
    if isinstance(c, tuple):
        return "cographic"
    for label, mat in (("R12", R12_MATRIX), ("R10+C3", R10_C3_MATRIX)):
        ref = UnimodularSystem(mat)
        if sys.size == ref.size and systems_isomorphic(sys, ref) is not None:
            return label
    if g is None and c is None:
        return "special"
    return "unknown"
