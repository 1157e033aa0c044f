"""Voronoi polytopes of lattices: exact H/V representations, face lattice,
belts (parallel classes of codim-2 faces), and dual cells."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .exact import (QQ, Subspace, canonical_line, inverse, matvec, qvec, vdot,
                    vscale)
from .lattices import Lattice, closest_vectors, coset_minima, relevant_vectors
from .polyhedra import (FaceRec, face_lattice, face_lin, hull_facets,
                        incidence, polytope_vertices, _bits, affine_rank)


class NotAFace(ValueError):
    pass


@dataclass
class VoronoiPolytope:
    lattice: Lattice
    facet_normals: list      # relevant vectors, integer tuples, sorted
    facet_rhs: list          # f(z) for each normal
    vertices: list           # dual coordinates, sorted
    vmasks: list             # per-vertex facet bitmask
    fmasks: list             # per-facet vertex bitmask
    _faces: dict = field(default_factory=dict, repr=False)
    _belts: list = field(default=None, repr=False)

    @property
    def dim(self):
        return self.lattice.dim

    def opposite_facet(self, i):
        return self.facet_normals.index(tuple(-x for x in self.facet_normals[i]))

    def faces(self, min_dim):
        """All proper faces with dim >= min_dim (cached, computed on demand)."""
        done = self._faces.get("min_dim")
        if done is None or done > min_dim:
            out = face_lattice(self.vertices, self.vmasks, self.fmasks, min_dim)
            self._faces = {"min_dim": min_dim, "by_dim": out}
        return self._faces["by_dim"]

    def face_vertices(self, rec: FaceRec):
        return rec.vertices(self.vertices)

    def face_lin(self, rec: FaceRec) -> Subspace:
        return face_lin(rec, self.vertices, self.dim)

    def support(self, c):
        """h_P(c) = max over vertices of c·x."""
        return max(vdot(c, v) for v in self.vertices)

    def support_face_vertices(self, c):
        h = self.support(c)
        return [v for v in self.vertices if vdot(c, v) == h]


def build_voronoi(lat: Lattice) -> VoronoiPolytope:
    normals = relevant_vectors(lat)
    rhs = [lat.facet_rhs(z) for z in normals]
    # |x_i| <= D_ii/2 is valid for P_V (basis vectors are lattice vectors)
    box = [(-lat.gram[i][i] / QQ(2), lat.gram[i][i] / QQ(2)) for i in range(lat.dim)]
    verts = polytope_vertices(normals, rhs, box)
    vmasks, fmasks = incidence(verts, normals, rhs)
    return VoronoiPolytope(lat, list(normals), rhs, verts, vmasks, fmasks)


# ---------------------------------------------------------------------------
# belts

@dataclass(frozen=True)
class Belt:
    plane: Subspace          # 2-dim span of the participating normals (primal)
    facets: tuple            # facet indices, all whose normals lie in plane
    length: int

    @property
    def ok_length(self):
        return self.length in (4, 6)

    def normal_lines(self, P):
        return sorted({canonical_line(P.facet_normals[i]) for i in self.facets})


def belts(P: VoronoiPolytope) -> list:
    if P._belts is not None:
        return P._belts
    n = P.dim
    ridges = P.faces(n - 2).get(n - 2, [])
    groups = {}
    for rec in ridges:
        normals = [P.facet_normals[j] for j in _bits(rec.fset)]
        plane = Subspace.from_spanning(normals, n)
        if plane.dim != 2:
            raise AssertionError("ridge normals must span a 2-plane")
        groups.setdefault(plane, []).append(rec)
    out = []
    for plane, recs in sorted(groups.items(), key=lambda kv: kv[0].basis):
        facets = tuple(i for i, z in enumerate(P.facet_normals) if plane.contains(z))
        out.append(Belt(plane, facets, len(facets)))
    P._belts = out
    return out


# ---------------------------------------------------------------------------
# dual cells

@dataclass(frozen=True)
class DualCell:
    lattice_points: tuple
    combinatorial_type: str


def _centrally_symmetric(points):
    pts = [qvec(p) for p in points]
    k = QQ(len(pts))
    s = [sum(p[i] for p in pts) for i in range(len(pts[0]))]
    center2 = [QQ(2) * x / k for x in s]
    have = set(pts)
    return all(tuple(c - x for c, x in zip(center2, p)) in have for p in pts)


def _classify_codim3(points):
    k = len(points)
    if k == 4:
        return "tetrahedron"
    if k == 5:
        return "pyramid4"
    if k == 6:
        return "octahedron" if _centrally_symmetric(points) else "prism3"
    if k == 8:
        return "cube"
    return "other"


def dual_cell(P: VoronoiPolytope, G: FaceRec) -> DualCell:
    if G.vset == 0:
        raise NotAFace("empty vertex set")
    pts = P.face_vertices(G)
    k = QQ(len(pts))
    relint = tuple(sum(p[i] for p in pts) / k for i in range(P.dim))
    # dual coordinates x correspond to lattice-basis coordinates D^{-1} x
    ginv = inverse(P.lattice.gram)
    target = matvec(ginv, relint)
    cell = closest_vectors(P.lattice, target)
    if tuple([0] * P.dim) not in cell:
        raise NotAFace("relative-interior point is not in the base tile")
    typ = _classify_codim3(cell) if G.dim == P.dim - 3 else "other"
    return DualCell(tuple(sorted(cell)), typ)


# ---------------------------------------------------------------------------
# face vector of a Delaunay cell (used for the Schlafli polytope)

def vpolytope_face_data(points):
    """Face lattice data of conv(points): returns (counts by dim, by_dim dict,
    vmasks, fmasks, normals).  points: full-dimensional, any rational coords."""
    dim = len(points[0])
    k = QQ(len(points))
    centroid = [sum(p[i] for p in points) / k for i in range(dim)]
    shifted = [tuple(x - c for x, c in zip(qvec(p), centroid)) for p in points]
    normals, rhs = hull_facets(shifted)
    vmasks, fmasks = incidence(shifted, normals, rhs)
    by_dim = face_lattice(shifted, vmasks, fmasks, 0)
    counts = {d: len(v) for d, v in by_dim.items()}
    return counts, by_dim, vmasks, fmasks, normals


def delaunay_face_counts(P: VoronoiPolytope):
    """Face vector of the Delaunay cell dual to the first vertex of P_V.

    For E6 this is the Schlafli polytope.  Returns (counts, by_dim, cell)."""
    # dual cell of a vertex = Delaunay polytope whose circumcenter is the vertex
    v0 = P.vertices[0]
    rec = FaceRec(1, P.vmasks[0], 0)
    cell = dual_cell(P, rec).lattice_points
    counts, by_dim, vmasks, fmasks, normals = vpolytope_face_data(cell)
    return counts, by_dim, cell
