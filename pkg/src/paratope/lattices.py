"""Lattices as positive-definite rational Gram matrices with integer vectors.

Conventions (used throughout the package):
  - lattice vectors are integer coordinate tuples in the lattice basis (primal);
  - points of the Voronoi polytope and free vectors live in dual coordinates;
  - the pairing between a lattice vector z and a dual point x is the plain
    coordinate dot product z·x.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .exact import QQ, fmt_q, is_positive_definite, ldlt, matvec, qmat, qq, vdot


@dataclass(frozen=True)
class Lattice:
    gram: tuple
    name: str = ""
    _ldlt: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = qmat(self.gram)
        object.__setattr__(self, "gram", g)
        if not is_positive_definite(g):
            raise ValueError("Gram matrix must be symmetric positive definite")
        object.__setattr__(self, "_ldlt", ldlt(g))

    @property
    def dim(self):
        return len(self.gram)

    def norm(self, v):
        return vdot(v, matvec(self.gram, v))

    def inner(self, v, w):
        return vdot(v, matvec(self.gram, w))

    def facet_rhs(self, z):
        """f(z) = ½ zᵀDz, the right-hand side of the bisector inequality."""
        return self.norm(z) / QQ(2)


# ---------------------------------------------------------------------------
# exact enumeration on the LDLT form

def _floor_plus_sqrt(mu, r):
    """floor(mu + sqrt(r)) for rationals mu, r >= 0, exactly."""
    k = math.floor(mu) + math.isqrt(math.floor(r)) + 2
    # k <= mu + sqrt(r)  <=>  k - mu <= 0  or  (k - mu)^2 <= r
    while True:
        d = k - mu
        if d <= 0 or d * d <= r:
            return k
        k -= 1


def _ceil_minus_sqrt(mu, r):
    """ceil(mu - sqrt(r)) for rationals mu, r >= 0, exactly."""
    return -_floor_plus_sqrt(-mu, r)


def _enumerate(L, D, center, bound):
    """All integer x with (x-center)ᵀ·L·D·Lᵀ·(x-center) <= bound.

    Yields (x, value).  Standard branch-and-bound, last coordinate outermost.
    """
    n = len(D)
    x = [0] * n
    out = []

    def rec(i, partial):
        if i < 0:
            out.append((tuple(x), partial))
            return
        rem = bound - partial
        if rem < 0:
            return
        s = sum(L[j][i] * (x[j] - center[j]) for j in range(i + 1, n))
        mu = center[i] - s
        r = rem / D[i]
        for xi in range(_ceil_minus_sqrt(mu, r), _floor_plus_sqrt(mu, r) + 1):
            x[i] = xi
            d = xi - mu
            rec(i - 1, partial + D[i] * d * d)
        x[i] = 0

    rec(n - 1, QQ(0))
    return out


def _min_enumerate(L, D, center):
    """Integer points minimizing (x-center)ᵀ·LDLᵀ·(x-center); exact ties kept."""
    n = len(D)
    # initial upper bound from the rounded center
    x0 = tuple(math.floor(c) if (c - math.floor(c)) < qq("1/2") else math.floor(c) + 1
               for c in center)
    diff = [QQ(a) - c for a, c in zip(x0, center)]
    best = QQ(0)
    for i in range(n):
        w = diff[i] + sum(L[j][i] * diff[j] for j in range(i + 1, n))
        best += D[i] * w * w
    pts = _enumerate(L, D, center, best)
    val = min(v for _, v in pts)
    return sorted(x for x, v in pts if v == val), val


def short_vectors(lat: Lattice, bound) -> list:
    """All nonzero lattice vectors v with norm(v) <= bound, sorted."""
    bound = qq(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    L, D = lat._ldlt
    zero = (QQ(0),) * lat.dim
    pts = _enumerate(L, D, zero, bound)
    return sorted(x for x, v in pts if v > 0)


def closest_vectors(lat: Lattice, point) -> list:
    """All lattice vectors minimizing (point-x)ᵀ·gram·(point-x); point in
    lattice-basis coordinates."""
    L, D = lat._ldlt
    pts, _ = _min_enumerate(L, D, [qq(c) for c in point])
    return pts


@dataclass(frozen=True)
class CosetReport:
    rep: tuple          # {0,1}-tuple, coset representative mod 2L
    min_norm: object    # rational
    minima: tuple       # lattice vectors of that norm in the coset, sorted
    simple: bool


def _coset_report(lat: Lattice, rep) -> CosetReport:
    # v = rep + 2w, norm(v) = 4 * (w + rep/2)ᵀ D (w + rep/2)
    L, D = lat._ldlt
    center = [QQ(-r, 2) for r in rep]
    ws, val = _min_enumerate(L, D, center)
    minima = sorted(tuple(r + 2 * w for r, w in zip(rep, wv)) for wv in ws)
    simple = len(minima) == 2
    return CosetReport(tuple(rep), 4 * val, tuple(minima), simple)


def _coset_worker(args):
    gram_str, rep = args
    lat = Lattice(tuple(tuple(qq(x) for x in row) for row in gram_str))
    rpt = _coset_report(lat, rep)
    return rep, fmt_q(rpt.min_norm), rpt.minima, rpt.simple


def coset_minima(lat: Lattice, jobs: int = 1) -> list:
    """CosetReport for each of the 2^n - 1 nonzero classes of L/2L."""
    n = lat.dim
    if n > 16:
        raise ValueError("coset enumeration limited to n <= 16")
    reps = [r for r in itertools.product((0, 1), repeat=n) if any(r)]
    if jobs > 1:
        gram_str = tuple(tuple(fmt_q(x) for x in row) for row in lat.gram)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_coset_worker, [(gram_str, r) for r in reps]))
        raw.sort(key=lambda t: t[0])
        return [CosetReport(rep, qq(mn), minima, simple)
                for rep, mn, minima, simple in raw]
    return [_coset_report(lat, r) for r in reps]


def relevant_vectors(lat: Lattice, cosets=None) -> list:
    """Facet vectors of P_V(lat): all minima of the simple cosets, sorted."""
    cosets = cosets if cosets is not None else coset_minima(lat)
    out = []
    for c in cosets:
        if c.simple:
            out.extend(c.minima)
    return sorted(out)


def standard_vectors(lat: Lattice, cosets=None) -> dict:
    """Map coset representative -> tuple of minima, over all nonzero cosets."""
    cosets = cosets if cosets is not None else coset_minima(lat)
    return {c.rep: c.minima for c in cosets}


# ---------------------------------------------------------------------------
# built-in Gram matrices (root lattices and duals)

def _cartan_a(n):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
        if i + 1 < n:
            g[i][i + 1] = g[i + 1][i] = -1
    return g


def _cartan_d(n):
    g = _cartan_a(n)
    g[n - 1][n - 2] = g[n - 2][n - 1] = 0
    g[n - 1][n - 3] = g[n - 3][n - 1] = -1
    return g


def _cartan_e(n):
    # nodes 0..n-2 form an A-chain, node n-1 attaches to node 2
    g = _cartan_a(n)
    g[n - 1][n - 2] = g[n - 2][n - 1] = 0
    g[n - 1][2] = g[2][n - 1] = -1
    return g


def _inverse_gram(g):
    from .exact import inverse
    return inverse(qmat(g))


def builtin_lattice(name: str) -> Lattice:
    """Built-in lattices: Z1..Z10, A1..A8, D3..D8, E6, E6*, E7, E7*, E8."""
    key = name.strip().upper().replace("STAR", "*")
    if key.startswith("Z"):
        n = int(key[1:])
        if not 1 <= n <= 10:
            raise ValueError("Zn supported for 1 <= n <= 10")
        return Lattice(tuple(tuple(QQ(int(i == j)) for j in range(n)) for i in range(n)), name=key)
    dual = key.endswith("*")
    base = key[:-1] if dual else key
    fam, num = base[0], base[1:]
    n = int(num)
    if fam == "A" and 1 <= n <= 8:
        g = _cartan_a(n)
    elif fam == "D" and 3 <= n <= 8:
        g = _cartan_d(n)
    elif fam == "E" and n in (6, 7, 8):
        g = _cartan_e(n)
    else:
        raise ValueError(f"unknown built-in lattice {name!r}")
    if dual:
        g = _inverse_gram(g)
    return Lattice(qmat(g), name=key)
