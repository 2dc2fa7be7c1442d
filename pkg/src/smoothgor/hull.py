"""Exact facet enumeration by the double description method.

Works on integer points only.  Rays of the homogenized dual cone are kept as
primitive integer vectors, so no rational arithmetic is needed at all.
"""
from __future__ import annotations

from math import gcd

from . import intlin
from .errors import LowerDimensional


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _independent_subset(hpoints):
    """Indices of a maximal linearly independent subset (greedy, in order)."""
    chosen = []
    rows = []
    r = 0
    for i, p in enumerate(hpoints):
        trial = rows + [list(p)]
        if intlin.rank(trial) > r:
            rows = trial
            chosen.append(i)
            r += 1
            if r == len(p):
                break
    return chosen


def facets_of(points):
    """Facets of ``conv(points)`` for full-dimensional integer point sets.

    Returns ``(facets, incidence)``: ``facets`` is a list of ``(a, b)`` with
    primitive ``a`` describing ``<a, x> + b >= 0``; ``incidence[k]`` is the
    bitmask of input point indices lying on facet ``k``.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    hp = [p + (1,) for p in pts]
    D = d + 1
    basis = _independent_subset(hp)
    if len(basis) < D:
        raise LowerDimensional(
            f"affine hull has dimension {len(basis) - 1} < {d}")

    # initial simplicial cone: rays are the columns of inv(B), scaled
    B = [list(hp[i]) for i in basis]
    det = intlin.det(B)
    adj = _adjugate(B)
    rays = []
    zeros = []
    for j in range(D):
        col = [adj[i][j] * (1 if det > 0 else -1) for i in range(D)]
        rays.append(_primitive(col))
        z = 0
        for k, i in enumerate(basis):
            if k != j:
                z |= 1 << i
        zeros.append(z)

    in_basis = set(basis)
    for idx, p in enumerate(hp):
        if idx in in_basis:
            continue
        vals = [_dot(r, p) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        bit = 1 << idx
        for k, s in enumerate(vals):
            if s == 0:
                zeros[k] |= bit
        if not neg:
            continue
        new_rays = []
        new_zeros = []
        for kp in pos:
            zp = zeros[kp]
            for kn in neg:
                common = zp & zeros[kn]
                if bin(common).count("1") < D - 2:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != kp and k != kn and (zeros[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sn = vals[kp], vals[kn]
                r = tuple(sp * a - sn * b for a, b in zip(rays[kn], rays[kp]))
                new_rays.append(_primitive(r))
                new_zeros.append(common | bit)
        keep = [k for k in range(len(rays)) if vals[k] >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] for k in keep] + new_zeros

    facets = []
    for r in rays:
        a, b = r[:d], r[d]
        facets.append((tuple(a), b))
    return facets, zeros


def _adjugate(m):
    n = len(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            adj[j][i] = (-1) ** (i + j) * intlin.det(minor)
    return adj
