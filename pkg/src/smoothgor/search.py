"""Search for dual-smooth simplicial reflexive polytopes with a fixed special facet.

Every polytope ``Q`` found contains the facet ``conv(e_1, ..., e_d)`` whose
dual vertex is ``u_F = -(1, ..., 1)``, and the vertex sum of ``Q`` lies in the
nonnegative orthant.  The facets of ``Q`` are grown by gift wrapping: an open
ridge ``R`` of a facet ``H`` with opposite vertex ``h`` is closed by a vertex
``w`` with ``<h*, w> = -1``, where ``h*`` is the dual basis covector of ``h``.
The new facet normal is ``u_G = u_H + (<u_H, w> + 1) h*``.

For index ``r`` every vertex ``v`` has level ``sum(v) = 1 (mod r)`` and every
facet normal is congruent to ``u_F`` modulo ``r``, so a vertex off a facet
pairs to at least ``r - 1`` with it.  The special facet bounds the total
``sum(-level)`` over the vertices off ``F`` by ``d``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    found: int = 0
    duplicates: int = 0

    def merge(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(self.nodes + other.nodes, self.leaves + other.leaves,
                           self.found + other.found, self.duplicates + other.duplicates)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def level_range(d: int, r: int):
    """Admissible levels of vertices off the special facet."""
    top = 1 - r if r >= 2 else 0
    return [L for L in range(-d, top + 1) if (L - 1) % r == 0]


def coordinate_bounds(d: int, r: int, L: int):
    """Bounds ``lo <= v_i <= hi`` for a vertex of level ``L``.

    The edge of ``Q*`` leaving ``u_F`` in direction ``e_i`` has lattice
    length ``t_i >= r`` and ends at ``u_F + t_i e_i``; pairing with ``v``
    gives ``v_i >= (L - 1) / t_i >= (L - 1) / r``.
    """
    lo = _ceil_div(L - 1, r)
    return lo, L - (d - 1) * lo


def candidates(d: int, r: int, box: int | None = None) -> np.ndarray:
    """All lattice points allowed as vertices off the special facet."""
    out = []
    for L in level_range(d, r):
        lo, hi = coordinate_bounds(d, r, L)
        if box is not None:
            lo, hi = max(lo, -box), min(hi, box)
        out.extend(_compositions(d, L, lo, hi))
    arr = np.array(out, dtype=np.int64).reshape(-1, d)
    keep = np.array([_is_primitive(v) for v in arr], dtype=bool) if len(arr) else np.zeros(0, bool)
    return arr[keep]


def _is_primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def _compositions(d, total, lo, hi):
    """Integer vectors of length ``d`` with entries in ``[lo, hi]`` summing to ``total``."""
    if d == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    for x in range(max(lo, total - (d - 1) * hi), min(hi, total - (d - 1) * lo) + 1):
        for rest in _compositions(d - 1, total - x, lo, hi):
            yield (x,) + rest


@dataclass
class _Ridge:
    facet: int
    opposite: int
    covector: np.ndarray


@dataclass
class _State:
    verts: list
    facets: list            # (vertex id tuple, normal)
    open: dict              # frozenset ridge -> _Ridge
    closed: set
    used: int
    mask: np.ndarray
    f_closers: list = field(default_factory=list)


class SpecialFacetSearch:
    """Depth-first enumeration; ``run`` yields vertex lists of the polytopes found."""

    def __init__(self, d: int, r: int, box: int | None = None):
        if d < 1 or r < 1:
            raise ValueError("need d >= 1 and r >= 1")
        self.d, self.r = d, r
        self.pool = candidates(d, r, box)
        self.cost = -self.pool.sum(axis=1)
        self.stats = SearchStats()

    # -- driver ----------------------------------------------------------

    def initial_state(self) -> _State:
        d = self.d
        verts = [np.eye(d, dtype=np.int64)[i] for i in range(d)]
        uF = -np.ones(d, dtype=np.int64)
        open_ = {}
        for i in range(d):
            ridge = frozenset(j for j in range(d) if j != i)
            open_[ridge] = _Ridge(0, i, np.eye(d, dtype=np.int64)[i])
        return _State(verts, [(tuple(range(d)), uF)], open_, set(), 0,
                      np.ones(len(self.pool), dtype=bool))

    def run(self, first_closers=None):
        """Yield every polytope found, as a tuple of vertex tuples.

        ``first_closers`` optionally restricts the closer of the first ridge
        of the special facet to the given pool indices (used to split work).
        """
        st = self.initial_state()
        yield from self._dfs(st, first_closers)

    def first_branches(self):
        """Pool indices admissible as closer of the first special ridge."""
        st = self.initial_state()
        ridge = min(st.open, key=lambda R: st.open[R].opposite)
        return [int(i) for i in self._new_closers(st, st.open[ridge], 0)]

    # -- search ----------------------------------------------------------

    def _new_closers(self, st, rd, phase_min):
        m = st.mask & (self.pool @ rd.covector == -1) & (self.cost <= self.d - st.used)
        if phase_min:
            m &= self.cost >= phase_min
        return np.flatnonzero(m)

    def _old_closers(self, st, ridge, rd):
        out = []
        for k, x in enumerate(st.verts):
            if k in ridge or k == rd.opposite:
                continue
            if int(x @ rd.covector) == -1:
                out.append(k)
        return out

    def _dfs(self, st, first_closers=None):
        self.stats.nodes += 1
        if not st.open:
            self.stats.leaves += 1
            total = np.sum(st.verts, axis=0)
            if np.all(total >= 0):
                self.stats.found += 1
                yield tuple(tuple(int(c) for c in v) for v in st.verts)
            return
        d = self.d
        # special facet ridges first, in coordinate order, with nondecreasing cost
        f_ridges = [R for R, rd in st.open.items() if rd.facet == 0]
        if f_ridges:
            ridge = min(f_ridges, key=lambda R: st.open[R].opposite)
            rd = st.open[ridge]
            phase_min = max([self._cost_of(st, k) for k in st.f_closers], default=0)
            new = self._new_closers(st, rd, phase_min)
            if first_closers is not None:
                new = np.array([i for i in new if i in set(first_closers)], dtype=np.int64)
            old = [k for k in self._old_closers(st, ridge, rd)
                   if k >= d and self._cost_of(st, k) >= phase_min]
        else:
            best = None
            for R, rd in st.open.items():
                new_R = self._new_closers(st, rd, 0)
                old_R = self._old_closers(st, R, rd)
                n = len(new_R) + len(old_R)
                if best is None or n < best[0]:
                    best = (n, R, rd, new_R, old_R)
                    if n == 0:
                        return
            _, ridge, rd, new, old = best
        for k in old:
            child = self._close(st, ridge, rd, k, None)
            if child is not None:
                yield from self._dfs(child)
        for idx in new:
            child = self._close(st, ridge, rd, None, int(idx))
            if child is not None:
                yield from self._dfs(child)

    def _cost_of(self, st, k):
        return -int(st.verts[k].sum())

    def _close(self, st, ridge, rd, old_k, pool_idx):
        d = self.d
        H_ids, uH = st.facets[rd.facet]
        hstar = rd.covector
        if old_k is not None:
            w = st.verts[old_k]
            wk = old_k
        else:
            w = self.pool[pool_idx]
            wk = len(st.verts)
        lam = int(uH @ w) + 1
        if lam <= 0:
            return None
        uG = uH + lam * hstar
        G_ids = tuple(sorted(ridge | {wk}))
        # other existing vertices stay strictly inside
        for k, x in enumerate(st.verts):
            if k in ridge or k == wk:
                continue
            if int(uG @ x) <= -1:
                return None
        # dual basis of G from that of H
        H_basis_dual = self._dual_basis(st, rd.facet)
        coords = {j: int(H_basis_dual[j] @ w) for j in ridge}
        new_open = dict(st.open)
        new_closed = set(st.closed)
        del new_open[ridge]
        new_closed.add(ridge)
        fid = len(st.facets)
        for j in ridge:
            R2 = frozenset((ridge - {j}) | {wk})
            cov = H_basis_dual[j] + coords[j] * hstar
            if R2 in new_closed:
                return None
            if R2 in new_open:
                other = new_open[R2]
                # G must lie across R2 from the facet already there
                if int(other.covector @ st.verts[j]) != -1:
                    return None
                del new_open[R2]
                new_closed.add(R2)
            else:
                new_open[R2] = _Ridge(fid, j, cov)
        verts = st.verts
        used = st.used
        mask = st.mask & (self.pool @ uG > -1)
        f_closers = st.f_closers
        if old_k is None:
            verts = verts + [w]
            used += int(self.cost[pool_idx])
            mask[pool_idx] = False
        if rd.facet == 0:
            f_closers = f_closers + [wk]
        facets = st.facets + [(G_ids, uG)]
        child = _State(verts, facets, new_open, new_closed, used, mask, f_closers)
        child._duals = dict(getattr(st, "_duals", {}))
        dual_G = {j: H_basis_dual[j] + coords[j] * hstar for j in ridge}
        dual_G[wk] = -hstar
        child._duals[fid] = dual_G
        return child

    def _dual_basis(self, st, fid):
        duals = getattr(st, "_duals", None)
        if duals is None:
            st._duals = duals = {}
        if fid not in duals:
            if fid == 0:
                eye = np.eye(self.d, dtype=np.int64)
                duals[0] = {i: eye[i] for i in range(self.d)}
            else:
                raise KeyError(fid)
        return duals[fid]
