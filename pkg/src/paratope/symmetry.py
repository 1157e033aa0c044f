"""Gram-preserving automorphism groups of finite vector configurations, with
stabilizer chains, orbits, stabilizer orders, and canonical subset images.

Permutations are tuples p of length degree acting as x -> p[x].
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import matvec, qmat, qvec, vdot


def identity_perm(n):
    return tuple(range(n))


def compose(a, b):
    """a after b: (a∘b)(x) = a[b[x]]."""
    return tuple(a[x] for x in b)


def inverse_perm(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _orbit_transversal(gens, pt, degree):
    trans = {pt: identity_perm(degree)}
    frontier = [pt]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = compose(g, trans[x])
                    nxt.append(y)
        frontier = nxt
    return trans


@dataclass
class _Level:
    base: int
    gens: list
    trans: dict


class PermutationGroup:
    """Permutation group with a stabilizer chain (incremental Schreier-Sims)."""

    def __init__(self, degree, generators):
        self.degree = degree
        ident = identity_perm(degree)
        self.generators = [tuple(g) for g in generators if tuple(g) != ident]
        self._levels = []
        for g in self.generators:
            self._add(g)
        self._close()
        self._prefix_cache = {}

    # -- chain construction -------------------------------------------------

    def _sift(self, g, start=0):
        for k in range(start, len(self._levels)):
            lvl = self._levels[k]
            x = g[lvl.base]
            if x not in lvl.trans:
                return g, k
            g = compose(inverse_perm(lvl.trans[x]), g)
        return g, None

    def _gens_from(self, k):
        """Generators of the k-th stabilizer: all generators stored at levels
        >= k fix the base points of levels < k."""
        out = []
        for lvl in self._levels[k:]:
            out.extend(lvl.gens)
        return out

    def _add(self, g, start=0):
        ident = identity_perm(self.degree)
        h, k = self._sift(g, start)
        if h == ident:
            return False
        if k is None:
            k = len(self._levels)
            base = next(i for i in range(self.degree) if h[i] != i)
            self._levels.append(_Level(base, [], {base: ident}))
        self._levels[k].gens.append(h)
        for j in range(k + 1):
            lvl = self._levels[j]
            lvl.trans = _orbit_transversal(self._gens_from(j), lvl.base,
                                           self.degree)
        return True

    def _close(self):
        ident = identity_perm(self.degree)
        changed = True
        while changed:
            changed = False
            for k in range(len(self._levels)):
                lvl = self._levels[k]
                gens = self._gens_from(k)
                lvl.trans = _orbit_transversal(gens, lvl.base, self.degree)
                for x, tx in list(lvl.trans.items()):
                    for g in gens:
                        s = compose(compose(inverse_perm(lvl.trans[g[x]]), g), tx)
                        if s != ident and self._add(s, k + 1):
                            changed = True

    # -- queries -------------------------------------------------------------

    @property
    def order(self):
        o = 1
        for lvl in self._levels:
            o *= len(lvl.trans)
        return o

    def contains(self, g):
        h, _ = self._sift(tuple(g))
        return h == identity_perm(self.degree)

    def strong_generators(self):
        out = []
        for lvl in self._levels:
            out.extend(lvl.gens)
        return out

    # -- orbits of subsets ----------------------------------------------------

    def subset_orbit(self, subset):
        """All images of a subset (as frozensets) under the group."""
        start = frozenset(subset)
        seen = {start}
        frontier = [start]
        gens = self.generators or self.strong_generators()
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = frozenset(g[x] for x in s)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return seen

    def stabilizer_order(self, subset):
        return self.order // len(self.subset_orbit(subset))

    # -- canonical (lexicographically least) images ---------------------------

    def _prefix_node(self, prefix):
        """Generators, orbits and transversals of the pointwise stabilizer of
        the points in prefix (a tuple, in canonical-image order)."""
        if prefix in self._prefix_cache:
            return self._prefix_cache[prefix]
        if prefix == ():
            gens = self.strong_generators()
        else:
            parent = self._prefix_node(prefix[:-1])
            pt = prefix[-1]
            trans = parent["trans"].get(pt)
            if trans is None or pt not in trans:
                raise ValueError("prefix point not in parent orbit")
            # Schreier generators for the stabilizer of pt inside the parent
            raw = []
            ident = identity_perm(self.degree)
            for x, tx in trans.items():
                for g in parent["gens"]:
                    s = compose(compose(inverse_perm(trans[g[x]]), g), tx)
                    if s != ident:
                        raw.append(s)
            gens = PermutationGroup(self.degree, set(raw)).strong_generators()
        # orbits and transversals for every point (lazy dict of transversals)
        node = {"gens": gens, "trans": {}, "orbit_min": {}}
        seen = set()
        for p in range(self.degree):
            if p in seen:
                continue
            trans = _orbit_transversal(gens, p, self.degree)
            for q in trans:
                seen.add(q)
                node["trans"][q] = trans  # same dict shared across the orbit
                node["orbit_min"][q] = min(trans)
        self._prefix_cache[prefix] = node
        return node

    def min_image(self, subset):
        """(canonical_tuple, g) with g(subset) = canonical, canonical being the
        lexicographically least sorted image of the subset under the group."""
        ident = identity_perm(self.degree)

        def rec(prefix, W, g_so_far):
            if not W:
                return (), g_so_far
            node = self._prefix_node(prefix)
            if not node["gens"]:
                return tuple(sorted(W)), g_so_far
            m = min(node["orbit_min"][w] for w in W)
            best = None
            for w in W:
                if node["orbit_min"][w] != m:
                    continue
                trans = node["trans"][w]
                if m not in trans:
                    continue
                # element of the prefix stabilizer sending w -> m
                t = compose(trans[m], inverse_perm(trans[w]))
                W2 = frozenset(t[x] for x in W if x != w)
                rest, g2 = rec(prefix + (m,), W2, compose(t, g_so_far))
                cand = (m,) + rest
                if best is None or cand < best[0]:
                    best = (cand, g2)
            return best

        res = rec((), frozenset(subset), ident)
        canon, g = res
        assert frozenset(g[x] for x in subset) == frozenset(canon)
        return canon, g


# ---------------------------------------------------------------------------
# automorphisms of a vector configuration

def gram_automorphisms(vectors, gram) -> PermutationGroup:
    """All permutations pi of the vectors with <v_pi(i), v_pi(j)> = <v_i, v_j>
    (products taken via the given Gram matrix).

    Backtracking with candidate propagation; the first-point branches are
    pruned by the orbit of the group found so far, the stabilizer branch is
    enumerated exhaustively.
    """
    vecs = [qvec(v) for v in vectors]
    g = qmat(gram)
    n = len(vecs)
    gv = [matvec(g, v) for v in vecs]
    prod = [[vdot(vecs[i], gv[j]) for j in range(n)] for i in range(n)]
    rowcolor = [tuple(sorted(map(str, row))) for row in prod]

    init_cand = [frozenset(j for j in range(n)
                           if rowcolor[j] == rowcolor[i] and prod[j][j] == prod[i][i])
                 for i in range(n)]
    p0 = min(range(n), key=lambda i: len(init_cand[i]))

    found = []

    def search(assigned, cands, collect_all):
        """assigned: dict point->image; cands: dict point->set for unassigned."""
        if not cands:
            perm = tuple(assigned[i] for i in range(n))
            found.append(perm)
            return not collect_all
        p = min(cands, key=lambda q: len(cands[q]))
        for m in sorted(cands[p]):
            new_cands = {}
            ok = True
            for q, cs in cands.items():
                if q == p:
                    continue
                nc = {j for j in cs if j != m and prod[j][m] == prod[q][p]}
                if not nc:
                    ok = False
                    break
                new_cands[q] = nc
            if not ok:
                continue
            assigned[p] = m
            stop = search(assigned, new_cands, collect_all)
            del assigned[p]
            if stop:
                return True
        return False

    def branch(m, collect_all):
        cands = {q: set(init_cand[q]) - {m} for q in range(n) if q != p0}
        for q in list(cands):
            cands[q] = {j for j in cands[q] if prod[j][m] == prod[q][p0]}
            if not cands[q]:
                return
        search({p0: m}, cands, collect_all)

    branch(p0, collect_all=True)  # the full stabilizer of p0
    gens = list(found)
    group = PermutationGroup(n, gens)
    for m in sorted(init_cand[p0]):
        if m == p0:
            continue
        orbit = _orbit_transversal(group.strong_generators() or [identity_perm(n)],
                                   p0, n)
        if m in orbit:
            continue
        found.clear()
        branch(m, collect_all=False)
        if found:
            gens.append(found[0])
            group = PermutationGroup(n, gens)
    return group


def subset_orbits(group: PermutationGroup, subsets):
    """Orbit representatives (canonical images) of the given subsets; returns
    list of (canonical_tuple, orbit_size, stabilizer_order), deduplicated."""
    seen = {}
    for s in subsets:
        canon, _ = group.min_image(s)
        if canon not in seen:
            osize = len(group.subset_orbit(s))
            seen[canon] = (canon, osize, group.order // osize)
    return [seen[k] for k in sorted(seen)]


def stabilizer_order(group: PermutationGroup, subset):
    return group.stabilizer_order(subset)
