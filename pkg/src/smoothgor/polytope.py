"""Lattice polytopes: hulls, faces, reflexivity, smoothness and the Gorenstein index."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from . import intlin
from .errors import LowerDimensional, NoInteriorPoint, PolytopeFormatError
from .hull import facets_of


@dataclass(frozen=True, order=True)
class FacetData:
    """Facet inequality ``<normal, x> + offset >= 0`` with primitive normal."""

    normal: tuple
    offset: int

    def value(self, x) -> int:
        return sum(a * b for a, b in zip(self.normal, x)) + self.offset


@dataclass(frozen=True)
class GorensteinData:
    index: int
    interior_point_of_rP: tuple
    cy_dim: int


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


class LatticePolytope:
    """Full-dimensional lattice polytope with exact facet data.

    Vertices are stored in lexicographic order; facets sorted as
    ``(normal, offset)`` tuples.  Derived data is computed lazily and cached.
    """

    def __init__(self, points, ambient_dim: int | None = None):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("a polytope needs at least one point")
        d = len(pts[0]) if ambient_dim is None else ambient_dim
        if any(len(p) != d for p in pts):
            raise ValueError("points of inconsistent length")
        self.ambient_dim = d
        if d == 0:
            self.vertices = ((),)
            self.facets = ()
            self._incidence = ()
            return
        raw_facets, zeros = facets_of(pts)
        # keep only extreme points: normals of their facets have rank d
        keep = []
        for i, p in enumerate(pts):
            normals = [list(a) for (a, _), z in zip(raw_facets, zeros) if z >> i & 1]
            if len(normals) >= d and intlin.rank(normals) == d:
                keep.append(i)
        self._setup([pts[i] for i in keep],
                    [FacetData(a, b) for a, b in raw_facets])

    @classmethod
    def from_trusted(cls, vertices, facets) -> "LatticePolytope":
        """Build from known vertices and facet inequalities.

        Incidences are recomputed and every inequality is checked; callers
        are responsible for completeness of the facet list.
        """
        self = cls.__new__(cls)
        vs = sorted({tuple(int(x) for x in v) for v in vertices})
        self.ambient_dim = len(vs[0])
        fs = [f if isinstance(f, FacetData) else FacetData(tuple(f[0]), int(f[1]))
              for f in facets]
        self._setup(vs, fs)
        return self

    def _setup(self, vertices, facets):
        self.vertices = tuple(vertices)
        self.facets = tuple(sorted(facets))
        inc = []
        for f in self.facets:
            mask = 0
            for i, v in enumerate(self.vertices):
                val = f.value(v)
                if val < 0:
                    raise ValueError(f"vertex {v} violates facet {f}")
                if val == 0:
                    mask |= 1 << i
            inc.append(mask)
        self._incidence = tuple(inc)

    # -- basic data -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_dim

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def incidences(self):
        """Vertex-facet boolean matrix, rows indexed by vertices."""
        return [[bool(mask >> i & 1) for mask in self._incidence]
                for i in range(len(self.vertices))]

    def facet_vertex_sets(self):
        return self._incidence

    @cached_property
    def vertex_facets(self):
        """Bitmask of facets containing each vertex."""
        out = []
        for i in range(len(self.vertices)):
            m = 0
            for k, mask in enumerate(self._incidence):
                if mask >> i & 1:
                    m |= 1 << k
            out.append(m)
        return tuple(out)

    @cached_property
    def pairing_matrix(self):
        """``M[i][k] = <a_k, v_i> + b_k`` (vertices x facets)."""
        return tuple(tuple(f.value(v) for f in self.facets) for v in self.vertices)

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return (isinstance(other, LatticePolytope)
                and self.ambient_dim == other.ambient_dim
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def translate(self, t) -> "LatticePolytope":
        vs = [tuple(a + b for a, b in zip(v, t)) for v in self.vertices]
        fs = [FacetData(f.normal, f.offset - intlin.dot(f.normal, t)) for f in self.facets]
        return LatticePolytope.from_trusted(vs, fs)

    def dilate(self, k: int) -> "LatticePolytope":
        if k < 1:
            raise ValueError("dilation factor must be positive")
        vs = [tuple(k * x for x in v) for v in self.vertices]
        fs = [FacetData(f.normal, k * f.offset) for f in self.facets]
        return LatticePolytope.from_trusted(vs, fs)

    def linear_image(self, u) -> "LatticePolytope":
        """Image under a unimodular matrix ``u``."""
        uinv = intlin.inverse_unimodular(u)
        vs = [intlin.matvec(u, v) for v in self.vertices]
        # <a, u^-1 y> = <u^-T a, y>
        uinv_t = intlin.transpose(uinv)
        fs = [FacetData(intlin.matvec(uinv_t, f.normal), f.offset) for f in self.facets]
        return LatticePolytope.from_trusted(vs, fs)

    def contains(self, x) -> bool:
        return all(f.value(x) >= 0 for f in self.facets)

    def strictly_contains(self, x) -> bool:
        return all(f.value(x) > 0 for f in self.facets)

    # -- lattice points -------------------------------------------------

    def lattice_points(self, k: int = 1):
        """Lattice points of ``k P`` in lexicographic order."""
        return _enumerate_points(self, k, strict=False)

    def interior_lattice_points(self, k: int = 1):
        return _enumerate_points(self, k, strict=True)

    def lattice_point_array(self, k: int = 1) -> np.ndarray:
        """``lattice_points(k)`` as an ``(n, d)`` integer array."""
        arr = _enumerate_array(self, k, strict=False)
        if arr is None:
            return np.array(self.lattice_points(k), dtype=object).reshape(-1, self.dim)
        return arr

    # -- combinatorics --------------------------------------------------

    @cached_property
    def face_lattice(self) -> "FaceLattice":
        return FaceLattice.of(self)

    @cached_property
    def edges(self):
        """Pairs of vertex indices spanning an edge."""
        return tuple(tuple(_bits(m)) for m in self.face_lattice.faces_of_dim(1))

    def is_simple(self) -> bool:
        return all(_popcount(m) == self.dim for m in self.vertex_facets)

    def is_simplicial(self) -> bool:
        return all(_popcount(m) == self.dim for m in self._incidence)

    def is_smooth(self) -> bool:
        if not self.is_simple():
            return False
        nbrs = [[] for _ in self.vertices]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        for i, v in enumerate(self.vertices):
            dirs = [intlin.make_primitive(tuple(a - b for a, b in zip(self.vertices[j], v)))[0]
                    for j in nbrs[i]]
            if len(dirs) != self.dim or not intlin.is_lattice_basis(dirs):
                return False
        return True

    # -- reflexivity and Gorenstein index ---------------------------------

    def is_reflexive(self) -> bool:
        """Unique interior lattice point at lattice distance one from every facet."""
        inner = self.interior_lattice_points()
        if len(inner) != 1:
            return False
        w = inner[0]
        return all(f.value(w) == 1 for f in self.facets)

    def gorenstein_index(self) -> GorensteinData | None:
        """Smallest ``r`` such that ``r P - w`` is reflexive for a lattice point ``w``."""
        d = self.dim
        A = [list(f.normal) for f in self.facets]
        rows = _independent_rows(A, d)
        for r in range(1, d + 2):
            rhs = [1 - r * f.offset for f in self.facets]
            w = intlin.solve_rational([A[i] for i in rows], [rhs[i] for i in rows])
            if w is None or any(x.denominator != 1 for x in w):
                continue
            w = tuple(int(x) for x in w)
            if all(intlin.dot(a, w) == b for a, b in zip(A, rhs)):
                return GorensteinData(r, w, d + 1 - 2 * r)
        return None

    def max_divisibility(self) -> int:
        v0 = self.vertices[0]
        g = 0
        for v in self.vertices[1:]:
            for a, b in zip(v, v0):
                g = gcd(g, a - b)
        return g

    def is_divisible_by(self, r: int) -> bool:
        v0 = self.vertices[0]
        return all((a - b) % r == 0 for v in self.vertices for a, b in zip(v, v0))

    def divide(self, r: int, origin=None) -> "LatticePolytope":
        """``(P - v) / r`` for a vertex ``v`` (the first vertex by default)."""
        from .errors import DivisibilityError
        v0 = self.vertices[0] if origin is None else tuple(origin)
        vs = []
        for v in self.vertices:
            diff = [a - b for a, b in zip(v, v0)]
            if any(x % r for x in diff):
                raise DivisibilityError(f"polytope is not divisible by {r}")
            vs.append(tuple(x // r for x in diff))
        fs = []
        for f in self.facets:
            val = f.value(v0)
            if val % r:
                raise DivisibilityError(f"facet offset not divisible by {r}")
            fs.append(FacetData(f.normal, val // r))
        return LatticePolytope.from_trusted(vs, fs)

    def canonical_form(self):
        from .normal_form import canonical_form
        return canonical_form(self)


def _independent_rows(rows, d):
    chosen = []
    cur = []
    for i, row in enumerate(rows):
        if intlin.rank(cur + [row]) > len(cur):
            cur.append(row)
            chosen.append(i)
            if len(cur) == d:
                break
    return chosen


# -- lattice point enumeration ---------------------------------------------

def _projections(P: LatticePolytope):
    """Inequalities ``A_i y + b_i >= 0`` of the projections of ``P`` to its first ``i`` coordinates."""
    cached = P.__dict__.get("_proj")
    if cached is None:
        cached = []
        for i in range(1, P.dim):
            Q = LatticePolytope([v[:i] for v in P.vertices])
            cached.append(([f.normal for f in Q.facets], [f.offset for f in Q.facets]))
        cached.append(([f.normal for f in P.facets], [f.offset for f in P.facets]))
        P.__dict__["_proj"] = cached
    return cached


def _enumerate_points(P: LatticePolytope, k: int, strict: bool):
    """Lattice points of ``kP`` (or its interior) as sorted tuples."""
    arr = _enumerate_array(P, k, strict)
    if arr is None:
        d = P.dim
        lo = [k * min(v[i] for v in P.vertices) for i in range(d)]
        hi = [k * max(v[i] for v in P.vertices) for i in range(d)]
        return _enumerate_points_slow(P, k, strict, lo, hi)
    return [tuple(row) for row in arr.tolist()]


def _enumerate_array(P: LatticePolytope, k: int, strict: bool):
    """Lattice points of ``kP`` (or its interior) as a lexicographically sorted int64 array.

    ``None`` when the coordinates could overflow int64.

    Coordinates are fixed one at a time; the range of ``y_i`` given
    ``y_1..y_{i-1}`` comes from the projection of ``kP`` to the first ``i``
    coordinates, so every partial point extends to a full one.  The interior
    projects onto the interior of each projection.
    """
    d = P.dim
    if d == 0 or k == 0:
        n = 0 if (strict and k == 0) else 1
        return np.zeros((n, d), dtype=np.int64)
    proj = _projections(P)
    big = max(max(abs(x) for v in P.vertices for x in v), 1) * k
    width = max(sum(abs(a) for a in row) for A, _ in proj for row in A)
    if width * big * 4 + 4 > 2 ** 62:
        return None
    front = np.zeros((1, 0), dtype=np.int64)
    for i in range(d):
        A = np.array(proj[i][0], dtype=np.int64).reshape(-1, i + 1)
        b = k * np.array(proj[i][1], dtype=np.int64) - (1 if strict else 0)
        # a_i y_i >= -(b + A[:, :i] y)
        rhs = -(b[None, :] + front @ A[:, :i].T)
        c = A[:, i]
        lo = np.full(len(front), np.iinfo(np.int64).min // 4, dtype=np.int64)
        hi = np.full(len(front), np.iinfo(np.int64).max // 4, dtype=np.int64)
        pos, neg = c > 0, c < 0
        if pos.any():
            lo = np.max(-((-rhs[:, pos]) // c[pos]), axis=1)
        if neg.any():
            hi = np.min(rhs[:, neg] // c[neg], axis=1)
        keep = np.all(rhs[:, c == 0] <= 0, axis=1) & (lo <= hi)
        front, lo, hi = front[keep], lo[keep], hi[keep]
        n = hi - lo + 1
        if len(front) == 0:
            return np.zeros((0, d), dtype=np.int64)
        rows = np.repeat(np.arange(len(front)), n)
        offs = np.arange(int(n.sum())) - np.repeat(np.cumsum(n) - n, n)
        front = np.column_stack([front[rows], lo[rows] + offs])
    return front


def _enumerate_points_slow(P, k, strict, lo, hi):
    out = []
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        vals = [sum(a * c for a, c in zip(f.normal, x)) + k * f.offset for f in P.facets]
        if all(v > 0 if strict else v >= 0 for v in vals):
            out.append(x)
    return out


# -- face lattice -------------------------------------------------------------

class FaceLattice:
    """All faces of a polytope as vertex bitmasks, graded by dimension.

    ``faces[i]`` is a vertex bitmask, ``dims[i]`` its dimension; index 0 is
    the empty face and the last index is the polytope itself.
    """

    def __init__(self, n_vertices: int, dim: int, levels):
        self.n_vertices = n_vertices
        self.dim = dim
        faces = []
        dims = []
        for k in range(-1, dim + 1):
            for m in sorted(levels[k]):
                faces.append(m)
                dims.append(k)
        self.faces = tuple(faces)
        self.dims = tuple(dims)
        self.index = {m: i for i, m in enumerate(faces)}

    @classmethod
    def of(cls, P: LatticePolytope) -> "FaceLattice":
        d = P.dim
        full = (1 << P.n_vertices) - 1
        levels = {d: {full}, -1: {0}}
        facet_sets = list(set(P.facet_vertex_sets()))
        if d >= 1:
            levels[d - 1] = set(facet_sets)
        for k in range(d - 1, 0, -1):
            nxt = set()
            for F in levels[k]:
                cands = {F & G for G in facet_sets if F & G != F}
                cands.discard(0)
                # inclusion-maximal intersections are the (k-1)-faces of F
                for c in cands:
                    if not any(c != e and c & e == c for e in cands):
                        nxt.add(c)
            levels[k - 1] = nxt
        if d == 0:
            levels = {-1: {0}, 0: {1}}
        return cls(P.n_vertices, d, levels)

    def __len__(self):
        return len(self.faces)

    def faces_of_dim(self, k: int):
        return [m for m, dm in zip(self.faces, self.dims) if dm == k]

    def f_vector(self):
        return tuple(self.dims.count(k) for k in range(-1, self.dim + 1))

    @cached_property
    def below(self):
        """For each face, indices of all faces contained in it (inclusive)."""
        out = []
        for m in self.faces:
            out.append(tuple(j for j, g in enumerate(self.faces) if g & m == g))
        return tuple(out)

    @cached_property
    def above(self):
        out = [[] for _ in self.faces]
        for i, js in enumerate(self.below):
            for j in js:
                out[j].append(i)
        return tuple(tuple(x) for x in out)

    def leq(self, i: int, j: int) -> bool:
        return self.faces[i] & self.faces[j] == self.faces[i]

    def interval(self, i: int, j: int):
        """Face indices ``z`` with ``faces[i] <= z <= faces[j]``."""
        fi = self.faces[i]
        return [k for k in self.below[j] if self.faces[k] & fi == fi]

    def mobius_check(self, i: int, j: int) -> bool:
        """Eulerian spot check: ``mu(x, y) == (-1)^(rank difference)``."""
        elems = self.interval(i, j)
        elems.sort(key=lambda k: self.dims[k])
        mu = {}
        for z in elems:
            if z == i:
                mu[z] = 1
                continue
            fz = self.faces[z]
            mu[z] = -sum(mu[w] for w in mu if self.faces[w] & fz == self.faces[w] and w != z)
        return mu[j] == (-1) ** (self.dims[j] - self.dims[i])


# -- module-level API ---------------------------------------------------------

def hull(points) -> LatticePolytope:
    return LatticePolytope(points)


def _span_frame(pts):
    """``(k, fwd)`` with ``fwd`` unimodular taking the span of ``pts - pts[0]`` onto ``Z^k x 0``."""
    n = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    k = intlin.rank(diffs) if diffs else 0
    if k == 0:
        return 0, None
    ortho = intlin.kernel_basis(diffs)  # vectors orthogonal to the span
    if ortho:
        basis = intlin.kernel_basis([list(o) for o in ortho])
    else:
        basis = [tuple(r) for r in intlin.identity(n)]
    bt = [list(b) for b in basis]  # k x n
    _, u = intlin.hnf(bt)          # bt @ u = [I_k | 0]
    return k, intlin.transpose(u)  # u^T maps span onto Z^k x 0


def span_coordinates(points):
    """Coordinates of ``points`` in the saturated lattice of their affine hull."""
    pts = [tuple(int(x) for x in p) for p in points]
    k, fwd = _span_frame(pts)
    if k == 0:
        return [()] * len(pts)
    p0 = pts[0]
    return [tuple(intlin.matvec(fwd, [a - b for a, b in zip(p, p0)])[:k]) for p in pts]


def restrict_to_span(points, with_map: bool = True):
    """Re-coordinatize points in the saturated lattice of their affine hull.

    Returns ``(Q, back)`` where ``Q`` is full-dimensional in ``Z^k`` and
    ``back`` is an affine unimodular map of the ambient ``Z^n`` such that
    ``back(q + (0,)*(n-k))`` recovers the original points.  ``back`` is
    ``None`` when ``with_map`` is false.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    n = len(pts[0])
    p0 = pts[0]
    if n == 0:
        return LatticePolytope([()], ambient_dim=0), intlin.AffineUnimodularMap((), ())
    k, fwd = _span_frame(pts)
    if k == 0:
        return (LatticePolytope([()], ambient_dim=0),
                intlin.AffineUnimodularMap(intlin.identity(n), p0))
    Q = LatticePolytope(span_coordinates(pts))
    if not with_map:
        return Q, None
    return Q, intlin.AffineUnimodularMap(intlin.inverse_unimodular(fwd), p0)


def dual(P: LatticePolytope):
    """Vertices of the polar ``{y : <y, x> >= -1 on P}``.

    Integer tuples when ``P`` is reflexive (with 0 as interior point),
    otherwise tuples of ``Fraction``.
    """
    if any(f.offset <= 0 for f in P.facets):
        raise NoInteriorPoint("origin is not an interior point")
    out = []
    for f in P.facets:
        v = tuple(Fraction(a, f.offset) for a in f.normal)
        if all(x.denominator == 1 for x in v):
            v = tuple(int(x) for x in v)
        out.append(v)
    return out


def reflexive_dual(P: LatticePolytope) -> LatticePolytope:
    verts = dual(P)
    if not all(isinstance(x, int) for v in verts for x in v):
        raise ValueError("polytope is not reflexive")
    # facets of P* correspond to vertices of P
    fs = [FacetData(v, 1) for v in P.vertices]
    return LatticePolytope.from_trusted(verts, fs)


def is_reflexive(P: LatticePolytope) -> bool:
    return P.is_reflexive()


def is_simple(P: LatticePolytope) -> bool:
    return P.is_simple()


def is_smooth(P: LatticePolytope) -> bool:
    return P.is_smooth()


def gorenstein_index(P: LatticePolytope):
    return P.gorenstein_index()


def max_divisibility(Q: LatticePolytope) -> int:
    return Q.max_divisibility()


def face_lattice(P: LatticePolytope) -> FaceLattice:
    return P.face_lattice


def lattice_points(P: LatticePolytope):
    return P.lattice_points()


def interior_lattice_points(P: LatticePolytope):
    return P.interior_lattice_points()


def is_isomorphic(P: LatticePolytope, Q: LatticePolytope) -> bool:
    if P.dim != Q.dim or P.n_vertices != Q.n_vertices or len(P.facets) != len(Q.facets):
        return False
    return P.canonical_form() == Q.canonical_form()


# -- JSON documents -------------------------------------------------------------

def to_json(P: LatticePolytope, canonical: bool = False) -> str:
    """``{"lattice_dim": d, "vertices": [...]}`` with vertices in sorted order.

    With ``canonical=True`` the normal-form representative is written, so
    isomorphic inputs give identical documents.
    """
    verts = P.canonical_form().vertices() if canonical and P.dim else P.vertices
    body = ",\n    ".join(json.dumps([int(x) for x in v]) for v in sorted(verts))
    return f'{{\n  "lattice_dim": {P.dim},\n  "vertices": [\n    {body}\n  ]\n}}\n'


def from_json(text: str) -> LatticePolytope:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PolytopeFormatError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict) or "vertices" not in doc or "lattice_dim" not in doc:
        raise PolytopeFormatError('expected an object with "lattice_dim" and "vertices"')
    d = doc["lattice_dim"]
    verts = doc["vertices"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise PolytopeFormatError("lattice_dim must be a nonnegative integer")
    if not isinstance(verts, list) or not verts:
        raise PolytopeFormatError("vertices must be a nonempty list")
    for i, v in enumerate(verts):
        if (not isinstance(v, list) or len(v) != d
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in v)):
            raise PolytopeFormatError(f"vertex {i} is not a list of {d} integers")
    return LatticePolytope(verts, ambient_dim=d)


def read_polytope(path) -> LatticePolytope:
    with open(path) as fh:
        return from_json(fh.read())


def write_polytope(P: LatticePolytope, path, canonical: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(P, canonical))
