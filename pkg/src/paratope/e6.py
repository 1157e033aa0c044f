"""The E6 / E6* pair and its 27-vector configuration.

The model lives in two mutually dual coordinate frames:
  - the A-frame: six vectors a1..a6 with Gram matrix 4/3 on the diagonal and
    1/3 off it (det 3); every member of the 27-vector set M is stored by its
    A-coordinates;
  - the E-frame: the dual basis e1..e6 (Gram 8/9 diagonal, -1/9 off, det 1/3).
Because the frames are dual, the pairing of an E-coordinate vector with an
A-coordinate vector is the plain dot product.

E6 is the sublattice of the E-frame cut out by the congruence
sum(z_i) = 0 (mod 3); we fix the concrete basis
{e1-e2, e2-e3, e3-e4, e4-e5, e5-e6, e4+e5+e6}.  E6* is generated by a1..a5
together with h = (a1+...+a6)/3.  The 27 vectors of M are the minimal
vectors a_i, b_i = a_i - h, c_ij = h - a_i - a_j of E6* (up to sign); their
pairwise inner products take only the values 1/3 and -2/3.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .exact import (QQ, Subspace, canonical_line, det, inverse, matmul,
                    matvec, primitive, qmat, qvec, transpose, vadd, vdot,
                    vneg, vsub)
from .lattices import Lattice, standard_vectors
from .polyhedra import _bits
from .symmetry import PermutationGroup, gram_automorphisms
from .voronoi import (VoronoiPolytope, belts, build_voronoi, dual_cell,
                      vpolytope_face_data)
from .zonosum import classify_generators, sum_belts


def _labels():
    out = ["a%d" % (i + 1) for i in range(6)]
    out += ["b%d" % (i + 1) for i in range(6)]
    out += ["c%d%d" % (i + 1, j + 1)
            for i in range(6) for j in range(i + 1, 6)]
    return tuple(out)


@dataclass(frozen=True)
class E6Model:
    gramA: tuple          # Gram matrix of a1..a6
    gramE: tuple          # Gram matrix of the dual frame e1..e6
    h: tuple              # (a1+...+a6)/3 in A-coordinates
    labels: tuple         # names of the 27 vectors of M
    vectors: tuple        # M in A-coordinates
    e6_basis: tuple       # basis of E6 in E-coordinates (integer rows)
    gram: tuple           # Gram matrix of the E6 basis
    dual_gram: tuple      # Gram matrix of the E6* basis {a1..a5, h}
    duals: tuple          # M in dual coordinates of the E6 basis (integers)
    adjacency: tuple      # per index: bitmask of product-1/3 neighbours

    def index(self, label):
        return self.labels.index(label)

    def vector(self, label):
        return self.vectors[self.index(label)]

    def product(self, i, j):
        return vdot(self.vectors[i], matvec(self.gramA, self.vectors[j]))

    def dual_of(self, x_a):
        """Dual coordinates (w.r.t. the E6 basis) of a vector given in
        A-coordinates; integral exactly for vectors in E6*."""
        b = qmat(self.e6_basis)
        d = matvec(b, qvec(x_a))
        assert all(x.denominator == 1 for x in d)
        return tuple(int(x) for x in d)

    def primal_of(self, x_a):
        """E6-basis coordinates of a lattice vector given in A-coordinates;
        integral exactly for vectors in E6."""
        z = self.primal_of_e(matvec(self.gramA, qvec(x_a)))
        return z

    def primal_of_e(self, x_e):
        """E6-basis coordinates of a lattice vector given in E-coordinates."""
        binv = inverse(qmat(self.e6_basis))
        z = matvec(transpose(binv), qvec(x_e))
        assert all(x.denominator == 1 for x in z)
        return tuple(int(x) for x in z)

    def diff_primal(self, lab1, lab2):
        """E6-basis coordinates of M[lab1] - M[lab2] (a lattice vector)."""
        return self.primal_of(vsub(self.vector(lab1), self.vector(lab2)))


def build_e6():
    """Construct the model and the two lattices; assert every invariant."""
    n = 6
    grama = qmat([[QQ(4, 3) if i == j else QQ(1, 3) for j in range(n)]
                  for i in range(n)])
    grame = inverse(grama)
    assert grame == qmat([[QQ(8, 9) if i == j else QQ(-1, 9)
                           for j in range(n)] for i in range(n)])
    assert det(grama) == 3 and det(grame) == QQ(1, 3)

    h = tuple(QQ(1, 3) for _ in range(n))
    a = [tuple(QQ(int(i == j)) for j in range(n)) for i in range(n)]
    b = [vsub(ai, h) for ai in a]
    c = [vsub(h, vadd(a[i], a[j]))
         for i in range(n) for j in range(i + 1, n)]
    vectors = tuple(a + b + c)
    labels = _labels()

    # a_i + b_j + c_ij = 0 and c_12 + c_34 + c_56 = 0 style relations
    cof = {}
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            cof[(i, j)] = 12 + k
            k += 1
    for i in range(n):
        for j in range(n):
            if i != j:
                s = vadd(vadd(a[i], b[j]), vectors[cof[tuple(sorted((i, j)))]])
                assert all(x == 0 for x in s)
    for part in (((0, 1), (2, 3), (4, 5)), ((0, 2), (1, 4), (3, 5))):
        s = (QQ(0),) * n
        for ij in part:
            s = vadd(s, vectors[cof[ij]])
        assert all(x == 0 for x in s)

    prods = {vdot(vectors[i], matvec(grama, vectors[j]))
             for i in range(27) for j in range(i + 1, 27)}
    assert prods == {QQ(1, 3), QQ(-2, 3)}
    assert all(vdot(v, matvec(grama, v)) == QQ(4, 3) for v in vectors)

    basis = ((1, -1, 0, 0, 0, 0), (0, 1, -1, 0, 0, 0), (0, 0, 1, -1, 0, 0),
             (0, 0, 0, 1, -1, 0), (0, 0, 0, 0, 1, -1), (0, 0, 0, 1, 1, 1))
    assert all(sum(z) % 3 == 0 for z in basis)
    bq = qmat(basis)
    gram = matmul(matmul(bq, grame), transpose(bq))
    assert det(gram) == 3
    assert all(gram[i][i] == 2 for i in range(n))

    dual_basis = [a[i] for i in range(5)] + [h]
    dq = qmat(dual_basis)
    dual_gram = matmul(matmul(dq, grama), transpose(dq))
    assert det(dual_gram) == QQ(1, 3)

    duals = []
    adjacency = []
    for i, v in enumerate(vectors):
        d = matvec(bq, qvec(v))
        assert all(x.denominator == 1 for x in d)
        duals.append(tuple(int(x) for x in d))
        mask = 0
        for j, w in enumerate(vectors):
            if j != i and vdot(v, matvec(grama, w)) == QQ(1, 3):
                mask |= 1 << j
        adjacency.append(mask)

    model = E6Model(gramA=grama, gramE=grame, h=h, labels=labels,
                    vectors=vectors, e6_basis=basis, gram=gram,
                    dual_gram=dual_gram, duals=tuple(duals),
                    adjacency=tuple(adjacency))
    e6 = Lattice(gram=tuple(tuple(r) for r in gram), name="E6")
    e6dual = Lattice(gram=tuple(tuple(r) for r in dual_gram), name="E6*")
    return model, e6, e6dual


@lru_cache(maxsize=None)
def _cached():
    return build_e6()


def e6_model():
    return _cached()[0]


def e6_lattice():
    return _cached()[1]


@lru_cache(maxsize=None)
def e6_voronoi() -> VoronoiPolytope:
    return build_voronoi(e6_lattice())


@lru_cache(maxsize=None)
def aut_group(model=None) -> PermutationGroup:
    """Automorphisms of the 27-vector configuration as permutations of M
    (inner-product preserving); order 51840."""
    model = model or e6_model()
    return gram_automorphisms(model.duals, inverse(qmat(model.gram)))


# ---------------------------------------------------------------------------
# the 120 belt triples of the Voronoi polytope

def _e_unit(i, n=6):
    return tuple(QQ(int(j == i)) for j in range(n))


def _e_set(s, n=6):
    return tuple(QQ(int(j in s)) for j in range(n))


def belt_triples(model=None, P=None):
    """The 120 unordered normal-line triples of the 6-belts of P_V(E6),
    generated in E-coordinates in three families:
      - "difference": e_i-e_j, e_j-e_k, e_k-e_i          (20 triples)
      - "partition":  e(S), e(complement S), e(I6), |S|=3 (10 triples)
      - "mixed":      e(S), e_i-e_j, e(S)-e_i+e_j, i in S, j not in S (90)
    If a Voronoi polytope is supplied, the triples are checked to coincide
    with its belts.  Returns {family: list of triples of E-coordinate
    vectors}."""
    model = model or e6_model()
    n = 6
    seen = {}
    out = {"difference": [], "partition": [], "mixed": []}

    def key(triple):
        return frozenset(canonical_line(model.primal_of_e(w))
                         for w in triple)

    for i, j, k in itertools.combinations(range(n), 3):
        t = (vsub(_e_unit(i), _e_unit(j)), vsub(_e_unit(j), _e_unit(k)),
             vsub(_e_unit(k), _e_unit(i)))
        assert seen.setdefault(key(t), "difference") == "difference"
        out["difference"].append(t)
    for s in itertools.combinations(range(n), 3):
        comp = tuple(sorted(set(range(n)) - set(s)))
        t = (_e_set(s), _e_set(comp), _e_set(range(n)))
        if key(t) not in seen:
            out["partition"].append(t)
        assert seen.setdefault(key(t), "partition") == "partition"
    for s in itertools.combinations(range(n), 3):
        for i in s:
            for j in set(range(n)) - set(s):
                es = _e_set(s)
                t = (es, vsub(_e_unit(i), _e_unit(j)),
                     vadd(vsub(es, _e_unit(i)), _e_unit(j)))
                if key(t) not in seen:
                    out["mixed"].append(t)
                assert seen.setdefault(key(t), "mixed") == "mixed"

    assert (len(out["difference"]), len(out["partition"]),
            len(out["mixed"])) == (20, 10, 90)
    assert len(seen) == 120

    if P is not None:
        from_p = {frozenset(b.normal_lines(P)) for b in belts(P)}
        assert all(b.length == 6 for b in belts(P))
        assert from_p == set(seen)
    return out


def belt_triples_one_orbit(model=None, P=None):
    """True iff the 120 belt triples form a single orbit of the configuration
    automorphisms (acting on facet-normal lines via M differences)."""
    model = model or e6_model()
    group = aut_group(model)
    # facet lines, realized as differences p - q with inner product 1/3
    line_of = {}
    pairs = []
    for i in range(27):
        for j in range(27):
            if i != j and model.adjacency[i] >> j & 1:
                ln = canonical_line(
                    model.primal_of(vsub(model.vectors[i],
                                         model.vectors[j])))
                line_of.setdefault(ln, len(line_of))
                pairs.append((i, j, line_of[ln]))
    assert len(line_of) == 36
    induced = []
    for g in group.strong_generators():
        img = [None] * 36
        for i, j, ln in pairs:
            tgt = canonical_line(
                model.primal_of(vsub(model.vectors[g[i]],
                                     model.vectors[g[j]])))
            img[ln] = line_of[tgt]
        assert None not in img
        induced.append(tuple(img))
    lines_group = PermutationGroup(36, induced)
    triples = belt_triples(model, P)
    all_sets = {frozenset(line_of[canonical_line(model.primal_of_e(w))]
                          for w in t)
                for fam in triples.values() for t in fam}
    assert len(all_sets) == 120
    orbit = lines_group.subset_orbit(next(iter(all_sets)))
    return set(orbit) == all_sets


# ---------------------------------------------------------------------------
# forbidden five-cliques

def pup_forbidden(U, model=None) -> bool:
    """True iff the index set U (into M) contains five vectors with pairwise
    inner product 1/3 -- exactly the sets whose zonotope breaks the sum."""
    model = model or e6_model()
    idx = sorted(set(U))
    adj = model.adjacency

    def extend(clique, cands):
        if len(clique) == 5:
            return True
        return any(extend(clique + [v],
                          [w for w in cands if w > v and adj[v] >> w & 1])
                   for v in cands)

    return extend([], idx)


@dataclass(frozen=True)
class CliqueCensus:
    count: int
    cliques: tuple          # sorted index 5-tuples
    orbit_reps: tuple       # canonical representatives
    orbit_sizes: tuple
    anchor_counts: dict     # how many anchors q realize each clique


def five_clique_census(model=None) -> CliqueCensus:
    """All 5-subsets of M with pairwise inner product 1/3, together with
    their orbit structure and the anchor verification: every such clique
    picks one vector out of each of the five zero-sum pairs of some q."""
    model = model or e6_model()
    adj = model.adjacency
    cliques = []

    def extend(clique, cands):
        if len(clique) == 5:
            cliques.append(tuple(clique))
            return
        for v in cands:
            extend(clique + [v], [w for w in cands if w > v and adj[v] >> w & 1])

    extend([], list(range(27)))

    # zero-sum pairs per anchor: q + p + p' = 0
    pair_map = {}
    for q in range(27):
        pairs = []
        for i, j in itertools.combinations(range(27), 2):
            s = vadd(model.vectors[q],
                     vadd(model.vectors[i], model.vectors[j]))
            if all(x == 0 for x in s):
                pairs.append((i, j))
        assert len(pairs) == 5
        pair_map[q] = pairs

    anchor_counts = {}
    for cl in cliques:
        anchors = 0
        cset = set(cl)
        for q, pairs in pair_map.items():
            if all(len(cset & set(pr)) == 1 for pr in pairs):
                anchors += 1
        assert anchors >= 1
        anchor_counts[cl] = anchors

    group = aut_group(model)
    orbits = {}
    for cl in cliques:
        canon, _ = group.min_image(cl)
        orbits.setdefault(canon, []).append(cl)
    reps = tuple(sorted(orbits))
    sizes = tuple(len(orbits[r]) for r in reps)
    assert sum(sizes) == len(cliques)
    return CliqueCensus(count=len(cliques), cliques=tuple(sorted(cliques)),
                        orbit_reps=reps, orbit_sizes=sizes,
                        anchor_counts=anchor_counts)


# ---------------------------------------------------------------------------
# the face vector of the 27-vertex Delaunay cell

@dataclass(frozen=True)
class FaceVectorReport:
    counts: dict            # dim -> face count
    dim5_split: tuple       # (simplex facets, cross-polytope facets)
    dim4_split: tuple       # (4-faces in mixed facet pairs, in cross pairs)


def schlafli_report(P=None) -> FaceVectorReport:
    """Face counts of the 27-vertex Delaunay cell of E6, with the dim-5
    split by facet type (6-vertex simplex vs 10-vertex cross-polytope) and
    the dim-4 split by the types of the two facets containing the face."""
    P = P or e6_voronoi()
    from .polyhedra import FaceRec
    rec = FaceRec(1, P.vmasks[0], 0)
    cell = dual_cell(P, rec).lattice_points
    counts, by_dim, vmasks, fmasks, normals = vpolytope_face_data(cell)
    ftype = []
    for mask in fmasks:
        nv = bin(mask).count("1")
        assert nv in (6, 10)
        ftype.append("simplex" if nv == 6 else "cross")
    simplex = ftype.count("simplex")
    cross = len(ftype) - simplex
    mixed = pure_cross = 0
    for g in by_dim[4]:
        kinds = sorted(ftype[i] for i in _bits(g.fset))
        assert len(kinds) == 2
        if kinds == ["cross", "simplex"]:
            mixed += 1
        else:
            assert kinds == ["cross", "cross"]
            pure_cross += 1
    return FaceVectorReport(counts={d: len(v) for d, v in by_dim.items()},
                            dim5_split=(simplex, cross),
                            dim4_split=(mixed, pure_cross))


# ---------------------------------------------------------------------------
# oracle bundle: planes, the transversality set of an edge, belt existence

_PLANE_REFS = {
    "a": (("a2", "a1"), ("b1", "a1"), ("a2", "b1"), ("b2", "a1")),
    "b": (("a2", "a1"), ("a3", "a1"), ("a3", "a2")),
    "c": (("b2", "a1"), ("c12", "a1"), ("c12", "b2")),
    "d": (("b2", "a1"), ("b4", "a3"), ("c23", "c14")),
    "e": (("b2", "a1"), ("b3", "a1"), ("b3", "b2")),
}

TRANSVERSAL_SET = ("a1", "b2", "c34", "c35", "c36", "c45", "c46", "c56")

# belt patterns: the three normal-line pairs (as M differences) of a
# candidate 6-belt of the sum
BELT_PATTERNS = {
    2: (("a2", "a1"), ("b1", "a1"), ("b2", "a1")),
    3: (("b2", "a1"), ("b3", "a1"), ("b3", "b2")),
    4: (("a2", "a1"), ("b1", "a2"), ("b2", "a1")),
    5: (("b2", "a1"), ("c12", "a1"), ("c12", "b2")),
    6: (("b2", "a1"), ("b4", "a3"), ("c23", "c14")),
}


def _plane_signature(lat, lines, std_lines):
    norms = sorted(lat.norm(v) for v in lines)
    prods = sorted(abs(lat.inner(v, w))
                   for v, w in itertools.combinations(lines, 2))
    v1, v2 = lines[0], lines[1]
    orth = sum(1 for w in std_lines
               if lat.inner(w, v1) == 0 and lat.inner(w, v2) == 0)
    return (len(lines), tuple(norms), tuple(prods), orth)


def plane_classification(model=None, lat=None):
    """Group the standard-vector lines of E6 by the 2-planes containing at
    least three of them; the planes fall into exactly five types, matched
    against five reference planes spanned by M differences.  Returns
    {type: plane count}."""
    model = model or e6_model()
    lat = lat or e6_lattice()
    lines = sorted({canonical_line(v)
                    for ms in standard_vectors(lat).values() for v in ms})
    planes = {}
    for v, w in itertools.combinations(lines, 2):
        sp = Subspace.from_spanning([qvec(v), qvec(w)], lat.dim)
        if sp.dim == 2:
            planes.setdefault(sp, set()).update((v, w))
    rich = {sp: sorted(members) for sp, members in planes.items()
            if len(members) >= 3}
    signatures = {}
    for sp, members in rich.items():
        signatures.setdefault(_plane_signature(lat, members, lines),
                              []).append(sp)

    ref_sig = {}
    for tag, pairs in _PLANE_REFS.items():
        vecs = [model.diff_primal(x, y) for x, y in pairs]
        sp = Subspace.from_spanning([qvec(v) for v in vecs], lat.dim)
        members = rich[sp]
        assert {canonical_line(v) for v in vecs} == set(members)
        ref_sig[tag] = _plane_signature(lat, members, lines)
    assert len(set(ref_sig.values())) == 5
    assert set(ref_sig.values()) == set(signatures)
    return {tag: len(signatures[sig]) for tag, sig in ref_sig.items()}


def edge_transversal_set(model=None, P=None):
    """Labels of the M vectors strongly transversal to the edge of P_V(E6)
    with endpoints a2 and -b1 (both-signs test on the containing facet
    normals), plus the labels parallel to the edge."""
    model = model or e6_model()
    P = P or e6_voronoi()
    va = model.dual_of(model.vector("a2"))
    vb = vneg(model.dual_of(model.vector("b1")))
    want = {tuple(qvec(va)), tuple(qvec(vb))}
    edge = None
    for rec in P.faces(1)[1]:
        if {tuple(v) for v in P.face_vertices(rec)} == want:
            edge = rec
            break
    assert edge is not None
    cls = classify_generators(P, edge, model.duals)
    names = {tuple(d): lab for d, lab in zip(model.duals, model.labels)}
    return (tuple(sorted(names[u] for u in cls.U3)),
            tuple(sorted(names[u] for u in cls.U2)))


def belt_present(model, P, gen_labels, pattern):
    """Does P + Z(U) have a 6-belt whose three normal lines are exactly the
    given M differences?  All partial sums must be parallelotopes."""
    duals = [model.dual_of(model.vector(lab)) for lab in gen_labels]
    target = tuple(sorted(canonical_line(model.diff_primal(x, y))
                          for x, y in pattern))
    return any(lns == target for _, _, lns in sum_belts(P, duals))


def appendix_oracles(model=None, P=None, lat=None):
    """The oracle bundle for the plane/edge/belt facts: plane type counts,
    the edge transversality sets, and belt presence/absence for the five
    named belt-plane patterns over sample generator sets."""
    model = model or e6_model()
    P = P or e6_voronoi()
    lat = lat or e6_lattice()
    plane_counts = plane_classification(model, lat)
    transversal, parallel = edge_transversal_set(model, P)
    belt_facts = {
        ("pattern2", ("c34", "c35", "c36", "a2")):
            belt_present(model, P, ("c34", "c35", "c36", "a2"),
                         BELT_PATTERNS[2]),
        ("pattern2", ("c56", "c46", "c45", "b1")):
            belt_present(model, P, ("c56", "c46", "c45", "b1"),
                         BELT_PATTERNS[2]),
        ("pattern2-absent", ("c34", "c35", "c36")):
            belt_present(model, P, ("c34", "c35", "c36"),
                         BELT_PATTERNS[2]),
        ("pattern3", ("b1", "c45", "c46", "c56")):
            belt_present(model, P, ("b1", "c45", "c46", "c56"),
                         BELT_PATTERNS[3]),
        ("pattern3-absent", ("c45", "c46", "c56")):
            belt_present(model, P, ("c45", "c46", "c56"),
                         BELT_PATTERNS[3]),
    }
    never = {}
    for pat in (4, 5, 6):
        never[pat] = any(
            belt_present(model, P, U, BELT_PATTERNS[pat])
            for U in (("a1",), ("c34", "c35", "c36", "a2"),
                      ("b1", "c45", "c46", "c56")))
    return {"plane_counts": plane_counts, "transversal": transversal,
            "parallel": parallel, "belt_facts": belt_facts,
            "never_patterns": never}


# ---------------------------------------------------------------------------
# golden comparison of the maximal-system table

def golden_data():
    from importlib.resources import files
    with files("paratope").joinpath("data/e6_golden.json").open() as f:
        return json.load(f)


def run_enumeration(P=None, model=None, jobs=1, progress=None):
    from .zonosum import enumerate_feasible
    model = model or e6_model()
    P = P or e6_voronoi()
    return enumerate_feasible(P, model.duals, jobs=jobs, progress=progress)


def reproduce_table2(enumeration=None, model=None, P=None):
    """Compare a full feasibility enumeration over M against the shipped
    golden table.  Returns (rows, mismatches); each row is a dict with the
    orbit data of one maximal feasible system."""
    model = model or e6_model()
    if enumeration is None:
        enumeration = run_enumeration(P, model)
    gold = golden_data()
    rows = []
    mismatches = []
    maxf = enumeration["maximal_feasible_orbits"]
    gtab = gold["table2"]
    if len(maxf) != len(gtab):
        mismatches.append("row count %d != %d" % (len(maxf), len(gtab)))
    for k, o in enumerate(maxf):
        row = {"rep": list(o.rep), "labels": [model.labels[i] for i in o.rep],
               "size": o.size, "dim": o.dim, "orbit_size": o.orbit_size,
               "stabilizer_order": o.stabilizer_order}
        if k < len(gtab):
            g = gtab[k]
            row["matroid"] = g.get("matroid", "")
            for key in ("rep", "size", "dim", "orbit_size",
                        "stabilizer_order"):
                if row[key] != g[key]:
                    mismatches.append("row %d field %s: %r != %r"
                                      % (k, key, row[key], g[key]))
        rows.append(row)
    minf = enumeration["minimal_forbidden_orbits"]
    gmin = gold["minimal_forbidden"]
    if [list(o.rep) for o in minf] != [g["rep"] for g in gmin]:
        mismatches.append("minimal forbidden orbits differ")
    return rows, mismatches
