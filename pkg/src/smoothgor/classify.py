"""Classification of smooth Gorenstein polytopes through their reflexive duals.

A smooth Gorenstein polytope ``P`` of index ``r`` corresponds to the simplicial
reflexive polytope ``Q = (rP - w)^*`` with unimodular facets.  We enumerate the
``Q`` (with the compiled special-facet search), deduplicate them and divide
``Q^*`` back by ``r``.
"""
from __future__ import annotations

import os
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._engine import MAX_VERTS, search_kernel
from .construct import theorem_family
from .errors import BoxPossiblyInsufficient, OutOfRange
from .normal_form import pairing_digest
from .polytope import FacetData, LatticePolytope, reflexive_dual
from .search import SearchStats, candidates

ENGINE_VERSION = "1"
_FACET_CAP = 1 << 16


@dataclass
class ClassifiedPolytope:
    polytope: LatticePolytope    # smooth Gorenstein polytope P
    index: int
    fano: LatticePolytope        # Q = (rP - w)^*, simplicial reflexive
    fano_index: int              # max divisibility of Q^*

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def digest(self) -> str:
        return self.polytope.canonical_form().hexdigest


@dataclass
class ClassificationRun:
    d: int
    r_min: int
    box: int | None
    r_max: int | None = None
    results: list = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    def counts(self) -> dict:
        return dict(sorted(Counter(c.index for c in self.results).items()))

    def at_index(self, r: int):
        return [c for c in self.results if c.index == r]

    def digests(self, r: int | None = None):
        return sorted(c.digest for c in self.results if r is None or c.index == r)


def thread_count() -> int:
    """Workers to use: ``GORENSTEIN_THREADS`` if set, else the number of CPUs."""
    env = os.environ.get("GORENSTEIN_THREADS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def vertex_limit(d: int, r: int) -> int:
    """``|V(Q)| <= d + d / delta`` with ``delta >= r - 1``; no bound for ``r = 1``."""
    if r == 1:
        return MAX_VERTS
    return min(MAX_VERTS, d + d // (r - 1))


def _decode(out, d):
    res = []
    i = 0
    while i < len(out):
        nv, nf = int(out[i]), int(out[i + 1])
        i += 2
        V = out[i:i + nv * d].reshape(nv, d)
        i += nv * d
        N = out[i:i + nf * d].reshape(nf, d)
        i += nf * d
        res.append((V.copy(), N.copy()))
    return res


def _run_chunk(args):
    pool, cost, d, lo, hi, vmax = args
    cap = 1024
    while True:
        out, nodes, leaves, overflow = search_kernel(pool, cost, d, d, lo, hi, cap, vmax)
        if not overflow:
            return _decode(out, d), nodes, leaves
        if cap >= _FACET_CAP:
            raise RuntimeError("search exceeded its facet or vertex capacity")
        cap *= 4


def _chunks(pool, parts):
    """Split the admissible first closers (``w_0 = -1``) into index ranges."""
    idx = np.flatnonzero(pool[:, 0] == -1)
    if len(idx) == 0:
        return []
    parts = max(1, min(parts, len(idx)))
    bounds = np.array_split(idx, parts)
    return [(int(b[0]), int(b[-1]) + 1) for b in bounds if len(b)]


def search_fano(d: int, r: int, box: int | None = None, threads: int | None = None):
    """Simplicial reflexive ``Q`` with unimodular facets and ``r | maxdiv(Q^*)``.

    Returns ``(list of (vertices, normals) arrays, SearchStats)``, one entry
    per isomorphism class.
    """
    if d < 1 or r < 1:
        raise ValueError("need d >= 1 and r >= 1")
    stats = SearchStats()
    if r > d + 1:
        return [], stats
    if d == 1:
        # [-1, 1] is the only one; its dual is 2 S_1 - 1
        V = np.array([[-1], [1]], dtype=np.int64)
        return ([(V, V.copy())] if 2 % r == 0 else []), stats
    pool = candidates(d, r, box)
    cost = -pool.sum(axis=1)
    vmax = vertex_limit(d, r)
    threads = thread_count() if threads is None else threads
    jobs = [(pool, cost, d, lo, hi, vmax) for lo, hi in _chunks(pool, 1 if threads == 1 else 4 * threads)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    seen = {}
    for found, nodes, leaves in parts:
        stats = stats.merge(SearchStats(nodes, leaves, len(found)))
        for V, N in found:
            key = pairing_digest(V @ N.T + 1)
            if key in seen:
                stats.duplicates += 1
            else:
                seen[key] = (V, N)
    res = [seen[k] for k in sorted(seen)]
    if box is not None:
        for V, _ in res:
            if np.abs(V).max() >= box:
                warnings.warn(f"a vertex touches the box |x_i| <= {box}; raise the box",
                              BoxPossiblyInsufficient, stacklevel=2)
                break
    return res, stats


def fano_from_arrays(V, N) -> LatticePolytope:
    """``Q`` from its vertices and facet normals (``<u, x> >= -1``)."""
    return LatticePolytope.from_trusted([tuple(int(x) for x in v) for v in V],
                                        [FacetData(tuple(int(x) for x in u), 1) for u in N])


def to_gorenstein(Q: LatticePolytope, r: int) -> LatticePolytope:
    """``(Q^* - v) / r`` for a vertex ``v`` of ``Q^*``."""
    return reflexive_dual(Q).divide(r)


def delta(Q: LatticePolytope) -> int:
    """``min <v, u>`` over vertices ``v`` of ``Q`` and ``u`` of ``Q^*`` with ``v`` off ``F_u``."""
    if not Q.is_reflexive() or not Q.is_simplicial():
        raise ValueError("delta is defined for simplicial reflexive polytopes")
    vals = [f.value(v) - 1 for f in Q.facets for v in Q.vertices]
    return min(x for x in vals if x != -1)


def _entries(found):
    for V, N in found:
        Q = fano_from_arrays(V, N)
        Qd = reflexive_dual(Q)
        yield Q, Qd, Qd.max_divisibility()


def enumerate_polytopes(d: int, r_min: int = 1, box: int | None = None,
                        threads: int | None = None, r_max: int | None = None) -> ClassificationRun:
    """All smooth Gorenstein ``d``-polytopes of index ``r_min <= r <= r_max``, up to isomorphism.

    ``r_min = 1`` runs one unpruned search and reads off every index from
    the divisibility of ``Q^*``; otherwise each index is searched separately
    with its level and vertex-count pruning.
    """
    if d < 1 or r_min < 1:
        raise ValueError("need d >= 1 and r_min >= 1")
    r_max = d + 1 if r_max is None else min(r_max, d + 1)
    run = ClassificationRun(d, r_min, box, r_max)
    if r_min == 1:
        found, run.stats = search_fano(d, 1, box, threads)
        # rP is a translate of Q^* for every r dividing maxdiv(Q^*), so (rP)^* = Q
        for Q, Qd, m in _entries(found):
            for r in range(1, min(m, r_max) + 1):
                if m % r == 0:
                    run.results.append(ClassifiedPolytope(Qd.divide(r), r, Q, m))
    else:
        for r in range(r_min, r_max + 1):
            found, st = search_fano(d, r, box, threads)
            run.stats = run.stats.merge(st)
            for Q, Qd, m in _entries(found):
                run.results.append(ClassifiedPolytope(Qd.divide(r), r, Q, m))
    return run


def classify(d: int, r_min: int = 1, box: int | None = None, threads: int | None = None,
             r_max: int | None = None) -> ClassificationRun:
    return enumerate_polytopes(d, r_min, box, threads, r_max)


@dataclass
class CrossValidation:
    d: int
    r: int
    enumerated: list
    family: list

    @property
    def missing(self):
        """In the family list but not found by the search."""
        return sorted((Counter(self.family) - Counter(self.enumerated)).elements())

    @property
    def extra(self):
        return sorted((Counter(self.enumerated) - Counter(self.family)).elements())

    @property
    def ok(self) -> bool:
        return Counter(self.enumerated) == Counter(self.family)

    def report(self) -> str:
        head = f"d={self.d} r={self.r}: search {len(self.enumerated)}, families {len(self.family)}"
        if self.ok:
            return head + " -- match"
        return head + f" -- MISMATCH missing={self.missing} extra={self.extra}"


def cross_validate(d: int, r: int, threads: int | None = None) -> CrossValidation:
    """Compare the search at index exactly ``r`` with the large-index families."""
    if 3 * r <= d + 3:
        raise OutOfRange(f"r={r} <= (d+3)/3 for d={d}")
    run = enumerate_polytopes(d, r, threads=threads, r_max=r)
    fam = [P.canonical_form().hexdigest for _, P in theorem_family(d, r)]
    return CrossValidation(d, r, run.digests(r), sorted(fam))


def fano_index_table(d: int, run: ClassificationRun | None = None) -> dict:
    """Histogram of ``i_X = maxdiv(Q^*)`` over the smooth reflexive polytopes of dimension ``d``."""
    if run is None:
        run = enumerate_polytopes(d, 1)
    elif run.r_min != 1 or run.d != d:
        raise ValueError("need a full classification with r_min = 1")
    hist = Counter(c.fano_index for c in run.results if c.index == 1)
    return dict(sorted(hist.items(), reverse=True))


enumerate = enumerate_polytopes
