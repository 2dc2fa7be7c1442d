"""Ehrhart counting, h*-vectors, Hibi symmetry and normality."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .polytope import LatticePolytope


@dataclass(frozen=True)
class HStarVector:
    coeffs: tuple

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        s = 0
        for i, c in enumerate(self.coeffs):
            if c:
                s = i
        return s

    @property
    def codegree(self) -> int:
        return self.dim + 1 - self.degree

    def is_palindromic(self) -> bool:
        s = self.degree
        return all(self.coeffs[i] == self.coeffs[s - i] for i in range(s + 1))

    def normalized_volume(self) -> int:
        return sum(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)


def ehrhart_counts(P: LatticePolytope, kmax: int):
    """``|kP ∩ Z^d|`` for ``k = 0..kmax``; products are counted factor by factor."""
    factors = getattr(P, "factors", None)
    if factors:
        out = [1] * (kmax + 1)
        for F in factors:
            for k, c in enumerate(ehrhart_counts(F, kmax)):
                out[k] *= c
        return out
    cache = P.__dict__.setdefault("_ehrhart_cache", {})
    out = []
    for k in range(kmax + 1):
        if k not in cache:
            cache[k] = 1 if k == 0 else len(P.lattice_point_array(k))
        out.append(cache[k])
    return out


def hstar(P: LatticePolytope) -> HStarVector:
    """``h*_i = sum_j (-1)^j C(d+1, j) |(i-j)P ∩ Z^d|``."""
    d = P.dim
    L = ehrhart_counts(P, d)
    coeffs = tuple(sum((-1) ** j * comb(d + 1, j) * L[i - j] for j in range(i + 1))
                   for i in range(d + 1))
    return HStarVector(coeffs)


def ehrhart_polynomial(P: LatticePolytope):
    """Coefficients (constant term first) of the Ehrhart polynomial, as Fractions."""
    d = P.dim
    ys = ehrhart_counts(P, d)
    xs = list(range(d + 1))
    coeffs = [Fraction(0)] * (d + 1)
    for i, xi in enumerate(xs):
        # Lagrange basis polynomial for node xi
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(d + 1):
            coeffs[t] += Fraction(ys[i]) * basis[t] / denom
    return coeffs


def evaluate(coeffs, x):
    return sum(c * x ** i for i, c in enumerate(coeffs))


def gorenstein_via_symmetry(P: LatticePolytope):
    """Codegree when ``h*`` is palindromic, otherwise ``None``."""
    h = hstar(P)
    return h.codegree if h.is_palindromic() else None


def _points_array(P, k):
    return P.lattice_point_array(k).astype(np.int64)


def _member(sorted_keys, keys):
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.minimum(pos, len(sorted_keys) - 1)
    return sorted_keys[pos] == keys


def is_normal(P: LatticePolytope) -> bool:
    """Every lattice point of ``kP`` splits as a point of ``(k-1)P`` plus one of ``P``, ``k < d``.

    Points are encoded by a linear key, so ``x - y`` in ``(k-1)P`` becomes a
    sorted-array lookup.  Vertices of ``P`` are tried first; they cover most
    points.
    """
    d = P.dim
    if d <= 2:
        return True
    span = 2 * d * max(max(abs(x) for x in v) for v in P.vertices) + 1
    if (2 * span + 1) ** d >= 2 ** 62:
        return _is_normal_pairwise(P)
    w = (2 * span + 1) ** np.arange(d, dtype=np.int64)
    base = _points_array(P, 1) @ w
    verts = np.array(P.vertices, dtype=np.int64) @ w
    prev = np.sort(base)
    for k in range(2, d):
        keys = _points_array(P, k) @ w
        todo = keys
        for y in verts:
            if len(todo) == 0:
                break
            todo = todo[~_member(prev, todo - y)]
        if len(todo):
            chunk = max(1, 4_000_000 // len(base))
            left = []
            for s0 in range(0, len(todo), chunk):
                blk = todo[s0:s0 + chunk]
                left.append(blk[~_member(prev, blk[:, None] - base[None, :]).any(axis=1)])
            todo = np.concatenate(left)
        if len(todo):
            return False
        prev = np.sort(keys)
    return True


def _is_normal_pairwise(P: LatticePolytope) -> bool:
    d = P.dim
    A = np.array([f.normal for f in P.facets], dtype=np.int64)
    b = np.array([f.offset for f in P.facets], dtype=np.int64)
    base = _points_array(P, 1)
    Ay = base @ A.T
    for k in range(2, d):
        pts = _points_array(P, k)
        Ax = pts @ A.T
        lim = (k - 1) * b
        # x - y in (k-1)P  <=>  A x - A y + (k-1) b >= 0
        todo = np.ones(len(pts), dtype=bool)
        chunk = max(1, 2_000_000 // max(1, len(base) * len(b)))
        for s in range(0, len(pts), chunk):
            blk = Ax[s:s + chunk]
            ok = np.all(blk[:, None, :] - Ay[None, :, :] + lim >= 0, axis=2).any(axis=1)
            todo[s:s + chunk] = ~ok
        if todo.any():
            return False
    return True
