"""Exact rational linear algebra: the arithmetic substrate for every other module.

Scalars are arbitrary-precision rationals (gmpy2.mpq when available, else
fractions.Fraction); vectors are tuples of scalars, matrices tuples of row
tuples.  No floating point appears anywhere in a decision path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction

ZERO = QQ(0)
ONE = QQ(1)


class NotSymmetric(ValueError):
    pass


def qq(x):
    """Coerce ints, Fractions, mpqs and 'p/q' strings to the scalar type."""
    if isinstance(x, str):
        if "/" in x:
            p, q = x.split("/")
            return QQ(int(p), int(q))
        return QQ(int(x))
    return QQ(x)


def qvec(it):
    return tuple(qq(x) for x in it)


def qmat(rows):
    return tuple(qvec(r) for r in rows)


def fmt_q(x):
    """Serialize a rational as 'p/q' (or 'p' when integral)."""
    n, d = x.numerator, x.denominator
    return str(n) if d == 1 else f"{n}/{d}"


# ---------------------------------------------------------------------------
# vector / matrix helpers

def vdot(a, b):
    return sum(x * y for x, y in zip(a, b, strict=True))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(s, a):
    return tuple(s * x for x in a)


def vneg(a):
    return tuple(-x for x in a)


def is_zero_vec(a):
    return all(x == 0 for x in a)


def matvec(m, v):
    return tuple(vdot(row, v) for row in m)


def transpose(m):
    return tuple(zip(*m, strict=True)) if m else ()


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(vdot(ra, cb) for cb in bt) for ra in a)


def identity(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def is_symmetric(m):
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def primitive(v):
    """Integer vector with gcd 1, sign preserved.  v must have rational entries."""
    den = math.lcm(*(int(x.denominator) for x in v)) if v else 1
    w = [int(x * den) for x in v]
    g = math.gcd(*w) if any(w) else 1
    if g == 0:
        g = 1
    return tuple(x // g for x in w)


def canonical_line(v):
    """Primitive representative of the line ±v with first nonzero entry > 0."""
    w = primitive(v)
    for x in w:
        if x != 0:
            return w if x > 0 else tuple(-y for y in w)
    return w


# ---------------------------------------------------------------------------
# elimination

def rref(m, pivots=False):
    """Reduced row echelon form.  Returns (rref_matrix, rank) or, with
    pivots=True, (rref_matrix, rank, pivot_columns)."""
    if not m:
        return ((), 0, ()) if pivots else ((), 0)
    rows = [list(qvec(r)) for r in m]
    ncols = len(rows[0])
    pivot_row = 0
    pivcols = []
    for col in range(ncols):
        piv = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[pivot_row], rows[piv] = rows[piv], rows[pivot_row]
        inv = ONE / rows[pivot_row][col]
        rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[pivot_row])]
        pivcols.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    out = tuple(tuple(r) for r in rows)
    if pivots:
        return out, pivot_row, tuple(pivcols)
    return out, pivot_row


def rank(m):
    return rref(m)[1]


def nullspace(m, ncols=None):
    """Basis (tuple of row vectors) of {x : m·x = 0}."""
    if not m:
        return tuple(identity(ncols)) if ncols else ()
    ncols = len(m[0])
    red, rk = rref(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r < rk and red[r][c] == 1 and all(red[i][c] == 0 for i in range(rk) if i != r):
            # confirm this is the pivot of row r
            if all(red[r][cc] == 0 for cc in range(c)):
                pivots.append(c)
                r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(tuple(v))
    return tuple(basis)


def inverse(m):
    n = len(m)
    aug = [list(row) + list(identity(n)[i]) for i, row in enumerate(qmat(m))]
    red, rk = rref(aug)
    if rk < n:
        raise ValueError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def det(m):
    """Determinant by fraction-free-ish Gaussian elimination over rationals."""
    n = len(m)
    rows = [list(qvec(r)) for r in m]
    sign = 1
    d = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        d *= rows[col][col]
        inv = ONE / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return d * sign


def ldlt(g):
    """g = L·D·Lᵀ with L unit lower triangular, D diagonal (returned as a tuple).

    Signals NotSymmetric on asymmetric input.  g is positive definite iff all
    entries of D are positive.
    """
    g = qmat(g)
    if not is_symmetric(g):
        raise NotSymmetric("ldlt needs a symmetric matrix")
    n = len(g)
    L = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    D = [ZERO] * n
    for j in range(n):
        D[j] = g[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        for i in range(j + 1, n):
            if D[j] == 0:
                raise ValueError("zero pivot in ldlt (matrix not definite)")
            L[i][j] = (g[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return tuple(tuple(r) for r in L), tuple(D)


def is_positive_definite(g):
    try:
        _, d = ldlt(g)
    except (NotSymmetric, ValueError):
        return False
    return all(x > 0 for x in d)


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True)
class Subspace:
    """Row-space in canonical RREF form; equal subspaces compare bit-identical."""

    ambient: int
    basis: tuple  # tuple of row vectors, canonical RREF, no zero rows

    @staticmethod
    def from_spanning(vectors, ambient):
        vecs = [qvec(v) for v in vectors if not is_zero_vec(v)]
        if not vecs:
            return Subspace(ambient, ())
        red, rk = rref(vecs)
        return Subspace(ambient, tuple(red[:rk]))

    @staticmethod
    def full(ambient):
        return Subspace(ambient, identity(ambient))

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        if self.dim == 0:
            return is_zero_vec(v)
        _, rk = rref(list(self.basis) + [qvec(v)])
        return rk == self.dim

    def orthogonal_complement(self):
        """{x : b·x = 0 for all basis rows b} (plain dot product)."""
        return Subspace.from_spanning(nullspace(self.basis, self.ambient), self.ambient)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise ValueError("ambient dimension mismatch")
    if a.dim == a.ambient:
        return b
    if b.dim == b.ambient:
        return a
    ca = nullspace(a.basis, a.ambient) if a.basis else identity(a.ambient)
    cb = nullspace(b.basis, b.ambient) if b.basis else identity(b.ambient)
    return Subspace.from_spanning(nullspace(list(ca) + list(cb), a.ambient), a.ambient)


@dataclass(frozen=True)
class Cone:
    """Conic hull of a finite generator list (primitive, deduplicated)."""

    ambient: int
    generators: tuple

    @staticmethod
    def from_generators(vectors, ambient):
        gens, seen = [], set()
        for v in vectors:
            if is_zero_vec(v):
                continue
            p = primitive(qvec(v))
            if p not in seen:
                seen.add(p)
                gens.append(p)
        return Cone(ambient, tuple(gens))


# ---------------------------------------------------------------------------
# linear feasibility (exact simplex)

def _simplex_max(A, b, c):
    """max c·x st A·x <= b, x >= 0.  Returns (status, value, x).

    status: 'optimal' | 'unbounded' | 'infeasible'.  Bland's rule, dense
    tableau, exact rationals.  Sizes here are tiny; clarity over speed.
    """
    m, n = len(A), len(c)
    # tableau rows: [A | I | b], objective row last
    T = [[qq(x) for x in A[i]] + [ONE if j == i else ZERO for j in range(m)] + [qq(b[i])]
         for i in range(m)]
    basis = list(range(n, n + m))

    # Phase 1 if any b < 0: maximize -sum of artificials; simpler: dual-feasible
    # start not guaranteed, so run phase-1 with one artificial column.
    if any(row[-1] < 0 for row in T):
        # add artificial variable with column -1 in every row
        for row in T:
            row.insert(-1, -ONE)
        art = n + m
        obj = [ZERO] * (n + m) + [ONE, ZERO]  # minimize artificial = max -a
        # enter artificial via most-negative b
        piv = min(range(m), key=lambda i: T[i][-1])
        _pivot(T, obj, piv, art)
        basis[piv] = art
        while True:
            col = next((j for j in range(n + m + 1) if obj[j] < 0), None)
            if col is None:
                break
            ratios = [(T[i][-1] / T[i][col], i) for i in range(m) if T[i][col] > 0]
            if not ratios:
                break
            _, piv = min(ratios, key=lambda t: (t[0], basis[t[1]]))
            _pivot(T, obj, piv, col)
            basis[piv] = col
        if art in basis:
            i = basis.index(art)
            if T[i][-1] != 0:
                return "infeasible", None, None
            col = next((j for j in range(n + m) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, obj, i, col)
                basis[i] = col
        for row in T:
            del row[art]
        basis = [bv for bv in basis]

    obj = [-qq(x) for x in c] + [ZERO] * m + [ZERO]
    for i, bv in enumerate(basis):
        if bv < len(obj) - 1 and obj[bv] != 0:
            f = obj[bv]
            obj = [o - f * t for o, t in zip(obj, T[i])]
    while True:
        col = next((j for j in range(n + m) if obj[j] < 0), None)
        if col is None:
            break
        ratios = [(T[i][-1] / T[i][col], i) for i in range(m) if T[i][col] > 0]
        if not ratios:
            return "unbounded", None, None
        _, piv = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        _pivot(T, obj, piv, col)
        basis[piv] = col
    x = [ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[i][-1]
    return "optimal", obj[-1], tuple(x)


def _pivot(T, obj, piv, col):
    inv = ONE / T[piv][col]
    T[piv] = [x * inv for x in T[piv]]
    for i in range(len(T)):
        if i != piv and T[i][col] != 0:
            f = T[i][col]
            T[i] = [x - f * y for x, y in zip(T[i], T[piv])]
    if obj[col] != 0:
        f = obj[col]
        obj[:] = [x - f * y for x, y in zip(obj, T[piv])]


def lp_feasible(constraints, dim):
    """Exact feasibility of a constraint system over R^dim.

    constraints: iterable of (coeffs, rel, rhs) with rel in {'<=', '<', '=='}.
    Returns (True, witness) or (False, None).  Strict inequalities handled by
    maximizing a slack margin t and requiring the optimum to be positive.
    """
    cons = [(qvec(a), rel, qq(r)) for a, rel, r in constraints]
    # variables: x = p - q with p,q >= 0, plus margin t >= 0
    nv = 2 * dim + 1
    A, b = [], []
    has_strict = False
    for a, rel, r in cons:
        row = list(a) + [-x for x in a]
        if rel == "==":
            A.append(row + [ZERO]); b.append(r)
            A.append([-x for x in row] + [ZERO]); b.append(-r)
        elif rel == "<=":
            A.append(row + [ZERO]); b.append(r)
        elif rel == "<":
            has_strict = True
            A.append(row + [ONE]); b.append(r)
        else:
            raise ValueError(f"unknown relation {rel!r}")
    A.append([ZERO] * (nv - 1) + [ONE])  # t <= 1 keeps the LP bounded
    b.append(ONE)
    c = [ZERO] * (nv - 1) + [ONE]
    status, val, x = _simplex_max(A, b, c)
    if status == "infeasible":
        return False, None
    if status != "optimal":  # pragma: no cover - t <= 1 forbids unbounded
        return False, None
    if has_strict and val <= 0:
        return False, None
    witness = tuple(x[i] - x[dim + i] for i in range(dim))
    for a, rel, r in cons:
        s = vdot(a, witness)
        ok = s <= r if rel == "<=" else s < r if rel == "<" else s == r
        if not ok:
            return False, None
    return True, witness
