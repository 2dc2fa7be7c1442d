"""Exact integer linear algebra on plain Python ints.

Matrices are lists of rows (lists or tuples of ints).  Nothing here touches
floating point; every routine is exact at any magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

IntVec = tuple
IntMat = list


def _copy(m):
    return [list(row) for row in m]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def make_primitive(v):
    """Split ``v = g * p`` with ``p`` primitive and ``g > 0``."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v), g


def det(m) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = _copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m) -> int:
    """Rank over the rationals, by integer row reduction."""
    a = [[int(x) for x in row] for row in m]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            x = a[i][c]
            if x:
                row = [p * u - x * v for u, v in zip(a[i], a[r])]
                g = 0
                for y in row:
                    g = gcd(g, y)
                a[i] = [y // g for y in row] if g > 1 else row
        r += 1
        if r == rows:
            break
    return r


def is_lattice_basis(vs) -> bool:
    vs = [list(v) for v in vs]
    if any(len(v) != len(vs) for v in vs):
        raise ValueError("need d vectors of length d")
    return abs(det(vs)) == 1


def solve_rational(m, b):
    """Solve the square system ``m x = b`` over Q; ``None`` when singular."""
    n = len(m)
    D = det(m)
    if D == 0:
        return None
    # Cramer's rule with Bareiss determinants
    out = []
    for c in range(n):
        mc = [list(row[:c]) + [y] + list(row[c + 1:]) for row, y in zip(m, b)]
        out.append(Fraction(det(mc), D))
    return out


def inverse_unimodular(m):
    """Exact inverse of a matrix with determinant +-1."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = [[x for x in row[n:]] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def hnf(m):
    """Column-style Hermite normal form.

    Returns ``(h, u)`` with ``m @ u == h`` and ``u`` unimodular.  ``h`` is
    lower staircase: each nonzero column has a positive pivot in a row strictly
    below the previous pivot, entries right of a pivot are zero and entries
    left of a pivot lie in ``[0, pivot)``.  Zero columns are moved to the end.
    """
    if not m or not m[0]:
        raise ValueError("hnf needs a nonempty matrix")
    rows, cols = len(m), len(m[0])
    h = _copy(m)
    u = identity(cols)

    def col_op(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for mat in (h, u):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    def swap(i, j):
        for mat in (h, u):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def negate(i):
        for mat in (h, u):
            for row in mat:
                row[i] = -row[i]

    piv_col = 0
    pivots = []
    for r in range(rows):
        if piv_col >= cols:
            break
        # gcd-reduce entries h[r][piv_col:] into column piv_col
        for j in range(piv_col + 1, cols):
            if h[r][j] == 0:
                continue
            a, b = h[r][piv_col], h[r][j]
            g, x, y = _xgcd(a, b)
            # [a b] [[x, -b/g], [y, a/g]] = [g, 0]
            col_op(piv_col, j, x, y, -b // g, a // g)
        if h[r][piv_col] == 0:
            continue
        if h[r][piv_col] < 0:
            negate(piv_col)
        pivots.append((r, piv_col))
        piv_col += 1
    # reduce entries left of each pivot
    for r, c in pivots:
        p = h[r][c]
        for j in range(c):
            q = h[r][j] // p
            if q:
                col_op(j, c, 1, -q, 0, 1)
    return h, u


def _xgcd(a: int, b: int):
    """Return ``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def snf(m):
    """Smith normal form ``(s, u, v)`` with ``u @ m @ v == s``.

    Diagonal entries are nonnegative and form a divisor chain.
    """
    if not m or not m[0]:
        raise ValueError("snf needs a nonempty matrix")
    rows, cols = len(m), len(m[0])
    s = _copy(m)
    u = identity(rows)
    v = identity(cols)

    def row_op(i, j, a, b, c, d):
        for mat in (s, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [a * x + b * y for x, y in zip(ri, rj)]
            mat[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_op(i, j, a, b, c, d):
        for mat in (s, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    for t in range(min(rows, cols)):
        # bring a nonzero entry of minimal size to (t, t)
        while True:
            nz = [(abs(s[i][j]), i, j) for i in range(t, rows)
                  for j in range(t, cols) if s[i][j] != 0]
            if not nz:
                return s, u, v
            _, i, j = min(nz)
            if i != t:
                s[t], s[i] = s[i], s[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                for mat in (s, v):
                    for row in mat:
                        row[t], row[j] = row[j], row[t]
            done = True
            for i in range(t + 1, rows):
                if s[i][t] % s[t][t] == 0:
                    q = s[i][t] // s[t][t]
                    if q:
                        row_op(t, i, 1, 0, -q, 1)
                elif s[i][t]:
                    g, x, y = _xgcd(s[t][t], s[i][t])
                    a, b = s[t][t] // g, s[i][t] // g
                    row_op(t, i, x, y, -b, a)
            for j in range(t + 1, cols):
                if s[t][j] % s[t][t] == 0:
                    q = s[t][j] // s[t][t]
                    if q:
                        col_op(t, j, 1, 0, -q, 1)
                elif s[t][j]:
                    g, x, y = _xgcd(s[t][t], s[t][j])
                    a, b = s[t][t] // g, s[t][j] // g
                    col_op(t, j, x, y, -b, a)
            if any(s[i][t] for i in range(t + 1, rows)):
                done = False
            if done:
                # enforce divisibility on the remaining block
                bad = next(((i, j) for i in range(t + 1, rows)
                            for j in range(t + 1, cols)
                            if s[i][j] % s[t][t]), None)
                if bad is None:
                    break
                row_op(t, bad[0], 1, 1, 0, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return s, u, v


def kernel_basis(m):
    """Lattice basis of ``{x in Z^n : m x = 0}`` (saturated)."""
    if not m:
        raise ValueError("kernel_basis needs row data")
    n = len(m[0])
    if all(x == 0 for row in m for x in row):
        return [tuple(row) for row in identity(n)]
    h, u = hnf(m)
    out = []
    for j in range(n):
        if all(h[i][j] == 0 for i in range(len(h))):
            out.append(tuple(row[j] for row in u))
    return out


@dataclass(frozen=True)
class AffineUnimodularMap:
    """``x -> linear @ x + translation`` with ``|det(linear)| == 1``."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        lin = tuple(tuple(int(x) for x in row) for row in self.linear)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tuple(int(x) for x in self.translation))
        if len(lin) != len(self.translation) or any(len(r) != len(lin) for r in lin):
            raise ValueError("inconsistent dimensions")
        if abs(det(lin)) != 1:
            raise ValueError("linear part is not unimodular")

    @classmethod
    def identity(cls, d: int) -> "AffineUnimodularMap":
        return cls(identity(d), (0,) * d)

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, x) -> tuple:
        return tuple(a + b for a, b in zip(matvec(self.linear, x), self.translation))

    def compose(self, other: "AffineUnimodularMap") -> "AffineUnimodularMap":
        """``self after other``."""
        lin = matmul(self.linear, other.linear)
        return AffineUnimodularMap(lin, self(other.translation))

    def inverse(self) -> "AffineUnimodularMap":
        inv = inverse_unimodular(self.linear)
        return AffineUnimodularMap(inv, tuple(-x for x in matvec(inv, self.translation)))


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull of a nonempty point list."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0

