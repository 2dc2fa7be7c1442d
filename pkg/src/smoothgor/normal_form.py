"""Canonical forms of lattice polytopes up to affine unimodular equivalence.

The vertex-facet pairing matrix ``<a_F, v> + b_F`` is invariant under lattice
automorphisms and translations.  We encode it as a coloured graph (one node per
vertex, per facet and per matrix entry, the entry nodes coloured by value) and
let nauty pick a canonical vertex order.  The vertex matrix, translated to the
first canonical vertex, is then brought to Hermite normal form under the left
action of GL(d, Z).

nauty only fixes the order up to symmetries of the pairing matrix.  When every
such symmetry is induced by a lattice automorphism the HNF does not depend on
the choice; otherwise the group is enumerated and the smallest HNF is taken.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

import pynauty

from . import intlin

_GROUP_LIMIT = 200_000


@dataclass(frozen=True)
class NormalForm:
    matrix: tuple          # d x n, columns are the vertices in canonical order
    digest: bytes

    @property
    def hexdigest(self) -> str:
        return self.digest.hex()

    def vertices(self):
        return [tuple(row[j] for row in self.matrix) for j in range(len(self.matrix[0]))]


def _pairing_graph(P):
    M = P.pairing_matrix
    nv, nf = len(M), len(P.facets)
    values = sorted({x for row in M for x in row})
    vidx = {x: i for i, x in enumerate(values)}
    n = nv + nf + nv * nf
    adj = {}
    classes = [set() for _ in values]
    for i in range(nv):
        for k in range(nf):
            node = nv + nf + i * nf + k
            adj[node] = [i, nv + k]
            classes[vidx[M[i][k]]].add(node)
    coloring = [set(range(nv)), set(range(nv, nv + nf))] + classes
    coloring = [c for c in coloring if c]
    return pynauty.Graph(n, adjacency_dict=adj, vertex_coloring=coloring), values


def pairing_digest(M) -> bytes:
    """Digest of an integer matrix up to row and column permutations.

    For the vertex-facet pairing matrix of a polytope whose vertices affinely
    generate the lattice (every smooth polytope) this is a complete invariant
    of the polytope up to affine unimodular maps.
    """
    rows = [[int(x) for x in row] for row in M]
    nv, nf = len(rows), len(rows[0])
    values = sorted({x for row in rows for x in row})
    vidx = {x: i for i, x in enumerate(values)}
    adj = {}
    classes = [set() for _ in values]
    for i in range(nv):
        for k in range(nf):
            node = nv + nf + i * nf + k
            adj[node] = [i, nv + k]
            classes[vidx[rows[i][k]]].add(node)
    coloring = [set(range(nv)), set(range(nv, nv + nf))] + classes
    g = pynauty.Graph(nv + nf + nv * nf, adjacency_dict=adj, vertex_coloring=coloring)
    head = repr((nv, nf, values, [len(c) for c in classes])).encode()
    return hashlib.sha256(head + pynauty.certificate(g)).digest()


def _hnf_rows(cols):
    """Canonical representative of ``{U M : U in GL(d,Z)}`` for ``M`` with given columns."""
    h, _ = intlin.hnf([list(c) for c in cols])  # n x d, right action on M^T
    return tuple(tuple(row[j] for row in h) for j in range(len(h[0])))


def _matrix_for(P, order):
    v0 = P.vertices[order[0]]
    cols = [tuple(a - b for a, b in zip(P.vertices[i], v0)) for i in order]
    return _hnf_rows(cols)


def _affine_basis(vertices):
    d = len(vertices[0])
    chosen = [0]
    rows = []
    for i in range(1, len(vertices)):
        diff = [a - b for a, b in zip(vertices[i], vertices[0])]
        if intlin.rank(rows + [diff]) > len(rows):
            rows.append(diff)
            chosen.append(i)
            if len(rows) == d:
                break
    return chosen


def _is_lattice_symmetry(P, perm, basis) -> bool:
    """Whether the vertex permutation ``perm`` comes from an affine unimodular map."""
    V = P.vertices
    d = P.dim
    b0 = basis[0]
    src = [[Fraction(a - b) for a, b in zip(V[i], V[b0])] for i in basis[1:]]
    dst = [[a - b for a, b in zip(V[perm[i]], V[perm[b0]])] for i in basis[1:]]
    lin = []
    for row in range(d):
        sol = intlin.solve_rational(src, [dst[j][row] for j in range(d)])
        if sol is None or any(x.denominator != 1 for x in sol):
            return False
        lin.append([int(x) for x in sol])
    if abs(intlin.det(lin)) != 1:
        return False
    for i, v in enumerate(V):
        img = intlin.matvec(lin, [a - b for a, b in zip(v, V[b0])])
        if tuple(a + b for a, b in zip(img, V[perm[b0]])) != V[perm[i]]:
            return False
    return True


def canonical_form(P) -> NormalForm:
    if P.dim == 0:
        return NormalForm((), hashlib.sha256(b"point").digest())
    graph, values = _pairing_graph(P)
    nv = P.n_vertices
    lab = pynauty.canon_label(graph)
    order = [x for x in lab if x < nv]
    gens, *_ = pynauty.autgrp(graph)
    vperms = [tuple(g[:nv]) for g in gens]
    vperms = [p for p in vperms if p != tuple(range(nv))]
    basis = _affine_basis(P.vertices)
    if all(_is_lattice_symmetry(P, p, basis) for p in vperms):
        mat = _matrix_for(P, order)
    else:
        mat = min(_matrix_for(P, [p[i] for i in order]) for p in _group_elements(vperms, nv))
    payload = repr((P.dim, nv, len(P.facets), mat)).encode()
    return NormalForm(mat, hashlib.sha256(payload).digest())


def _group_elements(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[g[i]] for i in range(n))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > _GROUP_LIMIT:
                        raise RuntimeError("symmetry group too large for canonical form")
        frontier = nxt
    return seen
