"""Exact polyhedral computations: vertex enumeration by incremental clipping
(double description with edge maintenance), face lattices from vertex-facet
incidence, V-polytope facet enumeration via polarity, and 2D hull/Minkowski
helpers used by the normal-fan machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import (QQ, Subspace, _simplex_max, is_zero_vec, primitive, qq,
                    qvec, rref, vdot, vsub)


def lp_max(A, b, c):
    """max c·x st A·x <= b over free x.  Returns (status, value, x)."""
    dim = len(c)
    A2 = [list(row) + [-x for x in row] for row in A]
    c2 = list(c) + [-x for x in c]
    status, val, y = _simplex_max(A2, b, c2)
    if status != "optimal":
        return status, None, None
    return status, val, tuple(y[i] - y[dim + i] for i in range(dim))


def affine_rank(points):
    """Dimension of the affine hull of a point list (0 for a single point)."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rref([vsub(p, p0) for p in points[1:]])[1]


# ---------------------------------------------------------------------------
# vertex enumeration

def _clip(verts, tight, edges, a, b, idx):
    """Clip the current vertex/edge skeleton by a·x <= b (constraint #idx)."""
    vals = [vdot(a, v) - b for v in verts]
    pos = [i for i, x in enumerate(vals) if x > 0]
    if not pos:
        for i, x in enumerate(vals):
            if x == 0:
                tight[i] = tight[i] | {idx}
        return verts, tight, edges
    keep = [i for i, x in enumerate(vals) if x <= 0]
    newmap = {}  # coords -> (tightset)
    cut_edges = []
    for (u, w) in edges:
        if not (vals[u] < 0 < vals[w] or vals[w] < 0 < vals[u]):
            continue  # only strictly crossing edges produce a new vertex
        if vals[u] > 0:
            u, w = w, u  # u kept, w violating
        t = vals[u] / (vals[u] - vals[w])
        p = tuple(x + t * (y - x) for x, y in zip(verts[u], verts[w]))
        ts = (tight[u] & tight[w]) | {idx}
        if p in newmap:
            newmap[p] |= ts
        else:
            newmap[p] = ts
        cut_edges.append((u, p))

    old_index = {}
    nverts, ntight = [], []
    for i in keep:
        old_index[i] = len(nverts)
        nverts.append(verts[i])
        ntight.append(tight[i] | {idx} if vals[i] == 0 else tight[i])
    new_index = {}
    for p, ts in newmap.items():
        new_index[p] = len(nverts)
        nverts.append(p)
        ntight.append(ts)

    nedges = set()
    for (u, w) in edges:
        if vals[u] <= 0 and vals[w] <= 0:
            nedges.add((min(old_index[u], old_index[w]), max(old_index[u], old_index[w])))
    for (u, p) in cut_edges:
        i, j = old_index[u], new_index[p]
        if i != j:
            nedges.add((min(i, j), max(i, j)))
    # adjacency among vertices lying on the new hyperplane (combinatorial test)
    plane = [new_index[p] for p in newmap] + [old_index[i] for i in keep if vals[i] == 0]
    for ii in range(len(plane)):
        for jj in range(ii + 1, len(plane)):
            p, q = plane[ii], plane[jj]
            T = ntight[p] & ntight[q]
            ok = True
            for r in plane:
                if r != p and r != q and T <= ntight[r]:
                    ok = False
                    break
            if ok:
                nedges.add((min(p, q), max(p, q)))
    return nverts, ntight, nedges


def polytope_vertices(normals, rhs, box):
    """Vertices of {x : normals[k]·x <= rhs[k]} given a valid bounding box.

    box: list of (lo, hi) per coordinate; every box inequality must be valid
    for the polytope (then the box adds no vertices).  Returns a sorted vertex
    list (tuples of rationals).
    """
    n = len(box)
    import itertools
    corners = list(itertools.product(*[(qq(lo), qq(hi)) for lo, hi in box]))
    verts = corners
    tight = []
    for v in verts:
        ts = set()
        for i in range(n):
            lo, hi = box[i]
            if v[i] == lo:
                ts.add(-(2 * i + 1))
            if v[i] == hi:
                ts.add(-(2 * i + 2))
        tight.append(ts)
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for v in verts:
        for i in range(n):
            lo, hi = qq(box[i][0]), qq(box[i][1])
            w = v[:i] + (hi if v[i] == lo else lo,) + v[i + 1:]
            a, b = index[v], index[w]
            edges.add((min(a, b), max(a, b)))
    for k, (a, b) in enumerate(zip(normals, rhs)):
        verts, tight, edges = _clip(verts, tight, edges, qvec(a), qq(b), k)
    return sorted(verts)


def incidence(vertices, normals, rhs):
    """Exact vertex-facet incidence bitmasks: (per-vertex, per-facet)."""
    vmasks = []
    fmasks = [0] * len(normals)
    for vi, v in enumerate(vertices):
        m = 0
        for k, (a, b) in enumerate(zip(normals, rhs)):
            if vdot(a, v) == b:
                m |= 1 << k
                fmasks[k] |= 1 << vi
        vmasks.append(m)
    return vmasks, fmasks


def hull_facets(points):
    """Facets of conv(points) for a full-dimensional polytope with 0 in its
    interior.  Returns (normals, rhs) with primitive rational normals scaled
    so rhs = 1 (polarity: facets of P = vertices of the polar)."""
    dim = len(points[0])
    A = [list(p) for p in points]
    b = [QQ(1)] * len(points)
    box = []
    for i in range(dim):
        c = [QQ(0)] * dim
        c[i] = QQ(1)
        _, hi, _ = lp_max(A, b, c)
        c[i] = QQ(-1)
        _, lo, _ = lp_max(A, b, c)
        box.append((-lo, hi))
    polar_verts = polytope_vertices(A, b, box)
    return [tuple(v) for v in polar_verts], [QQ(1)] * len(polar_verts)


# ---------------------------------------------------------------------------
# face lattice

@dataclass(frozen=True)
class FaceRec:
    vset: int      # vertex bitmask
    fset: int      # facet bitmask (all facets containing the face)
    dim: int

    def vertices(self, vertex_list):
        return [vertex_list[i] for i in _bits(self.vset)]


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def face_lattice(vertices, vmasks, fmasks, min_dim):
    """All proper faces of dim >= min_dim from the incidence structure.

    vmasks: per-vertex facet bitmask; fmasks: per-facet vertex bitmask.
    Returns dict dim -> list of FaceRec, computed by closure of intersections
    of higher faces with facets.
    """
    nf = len(fmasks)
    dimcache = {}

    def face_dim(vset):
        if vset not in dimcache:
            pts = [vertices[i] for i in _bits(vset)]
            dimcache[vset] = affine_rank(pts)
        return dimcache[vset]

    def closure(vset):
        fset = ~0
        for i in _bits(vset):
            fset &= vmasks[i]
        fset &= (1 << nf) - 1
        cv = ~0
        for j in _bits(fset):
            cv &= fmasks[j]
        if fset == 0:
            cv = (1 << len(vmasks)) - 1
        return cv, fset

    out = {}
    seen = set()
    frontier = []
    for j in range(nf):
        vset = fmasks[j]
        cv, fset = closure(vset)
        if cv not in seen:
            seen.add(cv)
            d = face_dim(cv)
            rec = FaceRec(cv, fset, d)
            out.setdefault(d, []).append(rec)
            frontier.append(rec)
    while frontier:
        nxt = []
        for rec in frontier:
            if rec.dim <= min_dim:
                continue
            for j in range(nf):
                if (rec.fset >> j) & 1:
                    continue
                vset = rec.vset & fmasks[j]
                if vset == 0:
                    continue
                cv, fset = closure(vset)
                if cv in seen:
                    continue
                seen.add(cv)
                d = face_dim(cv)
                if d >= min_dim:
                    sub = FaceRec(cv, fset, d)
                    out.setdefault(d, []).append(sub)
                    nxt.append(sub)
        frontier = nxt
    for d in out:
        out[d].sort(key=lambda r: r.vset)
    return out


def face_lin(rec: FaceRec, vertices, ambient):
    pts = rec.vertices(vertices)
    if len(pts) <= 1:
        return Subspace(ambient, ())
    p0 = pts[0]
    return Subspace.from_spanning([vsub(p, p0) for p in pts[1:]], ambient)


# ---------------------------------------------------------------------------
# 2D helpers (exact, integer-friendly)

def cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(points):
    """Convex hull in CCW order, collinear points dropped (corners only)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _angle_key(v):
    """Sort key for edge vectors by polar angle in [0, 2pi), exact."""
    x, y = v
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    return half, 0  # refined by comparator below; key used only for halves


def _merge_edges(edges):
    """Sort edge vectors by polar angle starting at angle 0 (positive x-axis)."""
    def upper(v):
        x, y = v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    import functools

    def cmp(u, v):
        hu, hv = upper(u), upper(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = u[0] * v[1] - u[1] * v[0]
        return 0 if c == 0 else (-1 if c > 0 else 1)

    return sorted(edges, key=functools.cmp_to_key(cmp))


def polygon_minkowski(poly, gens):
    """Minkowski sum of a convex polygon (CCW corner list, possibly a point or
    segment) with the 2D zonotope sum of segments [-u, u] over gens.
    Returns the CCW corner list of the sum."""
    gens = [g for g in gens if g[0] != 0 or g[1] != 0]
    if len(poly) == 1 and not gens:
        return list(poly)
    edges = []
    m = len(poly)
    if m >= 2:
        for i in range(m):  # for m == 2 this yields e and -e, as needed
            edges.append((poly[(i + 1) % m][0] - poly[i][0],
                          poly[(i + 1) % m][1] - poly[i][1]))
    for g in gens:
        edges.append((2 * g[0], 2 * g[1]))
        edges.append((-2 * g[0], -2 * g[1]))
    # start at the lowest-then-leftmost point of the sum and walk the sorted edges
    sx, sy = min(poly, key=lambda p: (p[1], p[0]))
    for g in gens:
        if (g[1], g[0]) < (-g[1], -g[0]):
            sx, sy = sx + g[0], sy + g[1]
        else:
            sx, sy = sx - g[0], sy - g[1]
    out = [(sx, sy)]
    for e in _merge_edges(edges):
        px, py = out[-1]
        out.append((px + e[0], py + e[1]))
    assert out[-1] == out[0], "polygon walk must close"
    out.pop()
    res = []
    k = len(out)
    for i in range(k):
        o, a, b = out[(i - 1) % k], out[i], out[(i + 1) % k]
        if a != o and cross2(o, a, b) != 0:
            res.append(a)
    return res


def polygon_edge_normals(poly):
    """Outward normals of a CCW polygon, one per edge, primitive integers."""
    m = len(poly)
    out = []
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        out.append(primitive(qvec((q[1] - p[1], -(q[0] - p[0])))))
    return out
