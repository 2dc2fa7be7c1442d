"""Compiled core of the special-facet search (see :mod:`smoothgor.search`).

Everything here works on preallocated int64 arrays so numba can compile it.
The depth-first search keeps an explicit stack; each frame records how to
undo the facet it added.  Vertex ids index rows of ``V``; a facet is stored
as its vertex ids, its normal and the dual basis of its vertex basis, so the
covector of the ridge opposite position ``p`` of facet ``f`` is ``FD[f, p]``.
Ridge sets are bitmasks of vertex ids.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_VERTS = 62


@njit(cache=True)
def _dot(a, b):
    s = 0
    for i in range(a.shape[0]):
        s += a[i] * b[i]
    return s


@njit(cache=True)
def _grow(buf, need):
    if need <= buf.shape[0]:
        return buf
    n = buf.shape[0] * 2
    while n < need:
        n *= 2
    out = np.empty(n, dtype=np.int64)
    out[:buf.shape[0]] = buf
    return out


@njit(cache=True)
def _key_cmp(a, b):
    """Compare the sorted coordinate vectors of two closers."""
    sa = np.sort(a)
    sb = np.sort(b)
    for i in range(sa.shape[0]):
        if sa[i] != sb[i]:
            return -1 if sa[i] < sb[i] else 1
    return 0


@njit(cache=True)
def _closer_ok(d, V, nv, FN, FV, FD, FM, nf, closed, f, p, w, wk, is_new):
    """Whether closing ridge ``(f, p)`` with vertex ``w`` gives a valid facet."""
    uH = FN[f]
    hs = FD[f, p]
    lam = _dot(uH, w) + 1
    if lam <= 0:
        return False
    gmask = (FM[f] & ~(np.int64(1) << FV[f, p])) | (np.int64(1) << wk)
    # every other vertex stays strictly on the inner side
    for k in range(nv):
        if (gmask >> k) & 1:
            continue
        s = 0
        for i in range(d):
            s += (uH[i] + lam * hs[i]) * V[k, i]
        if s <= -1:
            return False
    if is_new:
        return True
    # facet built from old vertices: it must not exist yet and its other
    # ridges must be open with the old facet on the far side
    for h in range(nf):
        if FM[h] == gmask:
            return False
    for q in range(d):
        if q == p:
            continue
        vq = FV[f, q]
        rq = gmask & ~(np.int64(1) << vq)
        for h in range(nf):
            if (FM[h] & rq) == rq:
                ph = -1
                for t in range(d):
                    if not (rq >> FV[h, t]) & 1:
                        ph = t
                if closed[h, ph]:
                    return False
                if _dot(FD[h, ph], V[vq]) != -1:
                    return False
    return True


@njit(cache=True)
def search_kernel(pool, cost, d, budget, first_lo, first_hi, max_facets, vmax):
    """Depth-first search; returns a flat array of the polytopes found.

    Each result is stored as ``nv, nf`` followed by the ``nv`` vertices and
    the ``nf`` facet normals (``<u, v> >= -1``), ``d`` coordinates each.
    New vertices are only added while fewer than ``vmax`` exist.
    ``first_lo:first_hi`` restricts the closer of the first special ridge
    to that range of pool indices.  Also returns node and leaf counts and an
    overflow flag (capacity limits hit, results may be incomplete).
    """
    npool = pool.shape[0]
    MAXV = MAX_VERTS
    MAXF = max_facets
    V = np.zeros((MAXV, d), dtype=np.int64)
    FN = np.zeros((MAXF, d), dtype=np.int64)
    FV = np.zeros((MAXF, d), dtype=np.int64)
    FD = np.zeros((MAXF, d, d), dtype=np.int64)
    FM = np.zeros(MAXF, dtype=np.int64)
    closed = np.zeros((MAXF, d), dtype=np.bool_)
    vcost = np.zeros(MAXV, dtype=np.int64)
    log = np.zeros(2 * MAXF * d, dtype=np.int64)
    nlog = 0

    for i in range(d):
        V[i, i] = 1
        FN[0, i] = -1
        FV[0, i] = i
        FD[0, i, i] = 1
    FM[0] = (np.int64(1) << d) - 1
    nv = d
    nf = 1
    used = 0

    # frame arrays
    fr_f = np.zeros(MAXF + 1, dtype=np.int64)
    fr_p = np.zeros(MAXF + 1, dtype=np.int64)
    fr_cs = np.zeros(MAXF + 1, dtype=np.int64)
    fr_cn = np.zeros(MAXF + 1, dtype=np.int64)
    fr_it = np.zeros(MAXF + 1, dtype=np.int64)
    fr_nv = np.zeros(MAXF + 1, dtype=np.int64)
    fr_nf = np.zeros(MAXF + 1, dtype=np.int64)
    fr_log = np.zeros(MAXF + 1, dtype=np.int64)
    fr_used = np.zeros(MAXF + 1, dtype=np.int64)
    fr_as = np.zeros(MAXF + 1, dtype=np.int64)
    fr_an = np.zeros(MAXF + 1, dtype=np.int64)
    fr_exp = np.zeros(MAXF + 1, dtype=np.bool_)

    alive = np.empty(max(16, npool * 4), dtype=np.int64)
    na = 0
    for c in range(npool):
        if cost[c] <= budget:
            alive[na] = c
            na += 1
    choices = np.empty(1024, dtype=np.int64)
    out = np.empty(1024, dtype=np.int64)
    nout = 0
    nodes = 0
    leaves = 0
    overflow = False
    w = np.zeros(d, dtype=np.int64)

    depth = 0
    fr_as[0] = 0
    fr_an[0] = na
    fr_exp[0] = False

    while depth >= 0:
        if not fr_exp[depth]:
            fr_exp[depth] = True
            nodes += 1
            fr_nv[depth] = nv
            fr_nf[depth] = nf
            fr_log[depth] = nlog
            fr_used[depth] = used
            a0 = fr_as[depth]
            an = fr_an[depth]
            cstart = 0 if depth == 0 else fr_cs[depth - 1] + fr_cn[depth - 1]
            # choose the ridge to close
            bf = -1
            bp = -1
            if depth == 0:
                bf = 0
                bp = 0
            else:
                best = -1
                for f in range(nf):
                    for p in range(d):
                        if closed[f, p]:
                            continue
                        cnt = 0
                        hs = FD[f, p]
                        for k in range(nv):
                            if (FM[f] >> k) & 1:
                                continue
                            if _dot(hs, V[k]) == -1:
                                if not _sym_ok(d, V, vcost, FM, nf, f, FV[f, p], V[k], vcost[k], k):
                                    continue
                                if _closer_ok(d, V, nv, FN, FV, FD, FM, nf, closed, f, p, V[k], k, False):
                                    cnt += 1
                        for j in range(an if nv < vmax else 0):
                            c = alive[a0 + j]
                            if _dot(hs, pool[c]) == -1:
                                if not _sym_ok(d, V, vcost, FM, nf, f, FV[f, p], pool[c], cost[c], nv):
                                    continue
                                if _closer_ok(d, V, nv, FN, FV, FD, FM, nf, closed, f, p, pool[c], nv, True):
                                    cnt += 1
                                    if best >= 0 and cnt >= best:
                                        break
                        if best < 0 or cnt < best:
                            best = cnt
                            bf = f
                            bp = p
                        if best <= 1:
                            break
                    if best == 0 or best == 1:
                        break
                if bf < 0:
                    # no open ridge: closed polytope
                    leaves += 1
                    ok = True
                    for i in range(d):
                        s = 0
                        for k in range(nv):
                            s += V[k, i]
                        if s < 0:
                            ok = False
                    if ok:
                        out = _grow(out, nout + 2 + (nv + nf) * d)
                        out[nout] = nv
                        out[nout + 1] = nf
                        nout += 2
                        for k in range(nv):
                            for i in range(d):
                                out[nout] = V[k, i]
                                nout += 1
                        for k in range(nf):
                            for i in range(d):
                                out[nout] = FN[k, i]
                                nout += 1
                    fr_cs[depth] = cstart
                    fr_cn[depth] = 0
                    fr_it[depth] = 0
                    fr_f[depth] = -1
                    continue
            # collect valid closers of ridge (bf, bp); codes: c >= 0 pool index,
            # c < 0 existing vertex -c-1
            fr_f[depth] = bf
            fr_p[depth] = bp
            n = 0
            hs = FD[bf, bp]
            for k in range(nv):
                if (FM[bf] >> k) & 1:
                    continue
                if _dot(hs, V[k]) != -1:
                    continue
                if not _sym_ok(d, V, vcost, FM, nf, bf, FV[bf, bp], V[k], vcost[k], k):
                    continue
                if _closer_ok(d, V, nv, FN, FV, FD, FM, nf, closed, bf, bp, V[k], k, False):
                    choices = _grow(choices, cstart + n + 1)
                    choices[cstart + n] = -k - 1
                    n += 1
            for j in range(an):
                c = alive[a0 + j]
                if depth == 0 and (c < first_lo or c >= first_hi):
                    continue
                if _dot(hs, pool[c]) != -1:
                    continue
                if not _sym_ok(d, V, vcost, FM, nf, bf, FV[bf, bp], pool[c], cost[c], nv):
                    continue
                if nv >= vmax:
                    continue
                if nv >= MAXV:
                    overflow = True
                    continue
                if _closer_ok(d, V, nv, FN, FV, FD, FM, nf, closed, bf, bp, pool[c], nv, True):
                    choices = _grow(choices, cstart + n + 1)
                    choices[cstart + n] = c
                    n += 1
            fr_cs[depth] = cstart
            fr_cn[depth] = n
            fr_it[depth] = 0

        # next child of this frame
        it = fr_it[depth]
        if fr_f[depth] < 0 or it >= fr_cn[depth]:
            # undo and pop
            depth -= 1
            if depth >= 0:
                _undo(closed, log, nlog, fr_log[depth])
                nlog = fr_log[depth]
                nv = fr_nv[depth]
                nf = fr_nf[depth]
                used = fr_used[depth]
            continue
        fr_it[depth] = it + 1
        # restore this frame's state before applying the next child
        _undo(closed, log, nlog, fr_log[depth])
        nlog = fr_log[depth]
        nv = fr_nv[depth]
        nf = fr_nf[depth]
        used = fr_used[depth]
        if nf >= MAXF or depth + 1 > MAXF:
            overflow = True
            continue
        code = choices[fr_cs[depth] + it]
        f = fr_f[depth]
        p = fr_p[depth]
        if code < 0:
            wk = -code - 1
            for i in range(d):
                w[i] = V[wk, i]
        else:
            wk = nv
            for i in range(d):
                w[i] = pool[code, i]
                V[nv, i] = w[i]
            vcost[nv] = cost[code]
            nv += 1
            used += cost[code]
        uH = FN[f]
        hs = FD[f, p]
        lam = _dot(uH, w) + 1
        G = nf
        nf += 1
        for i in range(d):
            FN[G, i] = uH[i] + lam * hs[i]
        for q in range(d):
            if q == p:
                FV[G, q] = wk
                for i in range(d):
                    FD[G, q, i] = -hs[i]
            else:
                FV[G, q] = FV[f, q]
                cq = _dot(FD[f, q], w)
                for i in range(d):
                    FD[G, q, i] = FD[f, q, i] + cq * hs[i]
            closed[G, q] = False
        FM[G] = (FM[f] & ~(np.int64(1) << FV[f, p])) | (np.int64(1) << wk)
        # close the ridge we came through and any ridge shared with old facets
        closed[f, p] = True
        closed[G, p] = True
        log[nlog] = f * d + p
        log[nlog + 1] = G * d + p
        nlog += 2
        if code < 0:
            for q in range(d):
                if q == p:
                    continue
                rq = FM[G] & ~(np.int64(1) << FV[G, q])
                for h in range(G):
                    if (FM[h] & rq) == rq:
                        for t in range(d):
                            if not (rq >> FV[h, t]) & 1:
                                closed[h, t] = True
                                log[nlog] = h * d + t
                                nlog += 1
                        closed[G, q] = True
                        log[nlog] = G * d + q
                        nlog += 1
        # filter the candidate pool by the new facet and the budget
        pa = fr_as[depth]
        pn = fr_an[depth]
        ca = pa + pn
        alive = _grow(alive, ca + pn)
        cn = 0
        uG = FN[G]
        left = budget - used
        for j in range(pn):
            c = alive[pa + j]
            if cost[c] > left:
                continue
            if _dot(uG, pool[c]) > -1:
                alive[ca + cn] = c
                cn += 1
        depth += 1
        fr_as[depth] = ca
        fr_an[depth] = cn
        fr_exp[depth] = False
    return out[:nout], nodes, leaves, overflow


@njit(cache=True)
def _undo(closed, log, nlog, target):
    d = closed.shape[1]
    for j in range(target, nlog):
        x = log[j]
        closed[x // d, x % d] = False


@njit(cache=True)
def _popcount(x):
    n = 0
    while x:
        x &= x - 1
        n += 1
    return n


@njit(cache=True)
def _sym_ok(d, V, vcost, FM, nf, f, drop, w, wcost, wk):
    """Symmetry breaking on the neighbours of the special facet.

    The facet across the special ridge opposite ``e_q`` contains one vertex
    ``x_q`` off the special facet; we require ``(cost, sorted coordinates)``
    of ``x_q`` to be nondecreasing in ``q``.  Checked whenever a new facet
    ``FM[f] - drop + w`` is a neighbour of the special facet.
    """
    fm = FM[0]
    gmask = (FM[f] & ~(np.int64(1) << drop)) | (np.int64(1) << wk)
    if _popcount(gmask & fm) != d - 1:
        return True
    q = 0
    while (gmask >> q) & 1:
        q += 1
    # the extra vertex need not be w: closing with some e_j can also yield
    # a neighbour of the special facet
    y = d
    while not (gmask >> y) & 1:
        y += 1
    if y != wk:
        w = V[y]
        wcost = vcost[y]
    for h in range(1, nf):
        hm = FM[h]
        if _popcount(hm & fm) != d - 1:
            continue
        q2 = 0
        while (hm >> q2) & 1:
            q2 += 1
        x = d
        while not (hm >> x) & 1:
            x += 1
        xc = vcost[x]
        if q2 < q:
            if xc > wcost or (xc == wcost and _key_cmp(V[x], w) > 0):
                return False
        elif q2 > q:
            if xc < wcost or (xc == wcost and _key_cmp(V[x], w) < 0):
                return False
    return True
