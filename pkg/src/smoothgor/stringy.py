"""Dual Gorenstein polytopes, toric g-polynomials and stringy E-polynomials.

For a Gorenstein polytope ``P`` of index ``r`` with ``rP - w`` reflexive, the
cone over ``P x {1}`` has primitive facet normals ``eta_F = (a_F, b_F)`` and
Gorenstein point ``p = (w, r)`` with ``<eta_F, p> = 1``.  The dual Gorenstein
polytope is ``P^x = conv(eta_F)`` inside ``{y : <y, p> = 1}``; its face dual
to ``F`` is ``conv(eta_G : G ⊇ F)``.

    S~(F; t) = sum over faces F' ⊆ F of (-1)^(dim F - dim F') h*_F'(t) g([F', F]^*; t)
    E_st(P; u, v) = (uv)^(-r) sum_F (-u)^(dim F + 1) S~_P(F; v/u) S~_P^x(F^x; uv)
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb

from . import intlin
from .errors import (ExponentRangeViolation, GorensteinConditionViolated,
                     NotEulerian)
from .intlin import affine_rank
from .polytope import GorensteinData, LatticePolytope, restrict_to_span, span_coordinates


# -- polynomials ---------------------------------------------------------------

class UniPoly:
    """Integer polynomial in ``t``; ``coeffs[i]`` is the coefficient of ``t^i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0,)):
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c) if c else (0,)

    @classmethod
    def one(cls):
        return cls((1,))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return UniPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPoly([other * x for x in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = UniPoly((other,))
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"


_T_MINUS_1 = UniPoly((-1, 1))


def _power(p: UniPoly, k: int) -> UniPoly:
    out = UniPoly.one()
    for _ in range(k):
        out = out * p
    return out


@lru_cache(maxsize=None)
def _t_minus_1_power(k: int) -> tuple:
    return tuple((-1) ** (k - i) * comb(k, i) for i in range(k + 1))


class BivariateLaurent:
    """Integer Laurent polynomial in ``u, v`` stored as ``{(p, q): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, c: int):
        return cls({(0, 0): c})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivariateLaurent(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, int):
            return BivariateLaurent({k: other * v for k, v in self.terms.items()})
        out = defaultdict(int)
        for (a, b), x in self.terms.items():
            for (c, d), y in other.terms.items():
                out[(a + c, b + d)] += x * y
        return BivariateLaurent(out)

    __rmul__ = __mul__

    def shift(self, du: int, dv: int):
        return BivariateLaurent({(p + du, q + dv): c for (p, q), c in self.terms.items()})

    def swap(self):
        """``E(v, u)``."""
        return BivariateLaurent({(q, p): c for (p, q), c in self.terms.items()})

    def invert_u(self):
        """``E(u^-1, v)``."""
        return BivariateLaurent({(-p, q): c for (p, q), c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = BivariateLaurent.constant(other)
        return isinstance(other, BivariateLaurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, p: int, q: int) -> int:
        return self.terms.get((p, q), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def exponent_box(self):
        if not self.terms:
            return None
        ps = [p for p, _ in self.terms]
        qs = [q for _, q in self.terms]
        return min(ps), max(ps), min(qs), max(qs)

    def matrix(self, n: int):
        """Coefficient matrix ``M[p][q]`` for ``0 <= p, q <= n``."""
        return [[self.coefficient(p, q) for q in range(n + 1)] for p in range(n + 1)]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, q), c in sorted(self.terms.items()):
            mono = "".join(x if e == 1 else f"{x}^{e}" for x, e in (("u", p), ("v", q)) if e)
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)


def _subst_ratio(p: UniPoly) -> BivariateLaurent:
    """``p(v/u)``."""
    return BivariateLaurent({(-i, i): c for i, c in enumerate(p.coeffs) if c})


def _subst_product(p: UniPoly) -> BivariateLaurent:
    """``p(uv)``."""
    return BivariateLaurent({(i, i): c for i, c in enumerate(p.coeffs) if c})


# -- h* of faces ------------------------------------------------------------------

def _simplex_hstar(verts) -> UniPoly:
    """h* of a full-dimensional lattice simplex by counting its fundamental parallelepiped."""
    m = len(verts) - 1
    B = [list(v) + [1] for v in verts]           # rows are the cone generators
    N = abs(intlin.det(B))
    if N == 1:
        return UniPoly.one()
    # parallelepiped points <-> Z^{m+1} / (row lattice of B); use the Smith form
    s, U, Vm = intlin.snf(intlin.transpose(B))   # U B^T V = S
    diag = [s[i][i] for i in range(m + 1)]
    Uinv = intlin.inverse_unimodular(U)
    BT = intlin.transpose(B)
    counts = [0] * (m + 1)
    ranges = [range(x) for x in diag]
    import itertools
    for c in itertools.product(*ranges):
        x = intlin.matvec(Uinv, c)
        lam = intlin.solve_rational(BT, x)
        height = sum(l - (l.numerator // l.denominator) for l in lam)
        counts[int(height)] += 1
    return UniPoly(counts)


def face_hstar(points) -> UniPoly:
    """h* of ``conv(points)`` in the saturated lattice of its affine hull."""
    pts = sorted({tuple(p) for p in points})
    if len(pts) <= 1:
        return UniPoly.one()
    if affine_rank(pts) == len(pts) - 1:
        return _simplex_hstar(span_coordinates(pts))
    Q, _ = restrict_to_span(pts, with_map=False)
    return UniPoly(_hstar_by_reciprocity(Q))


@lru_cache(maxsize=None)
def _cached_face_hstar(points) -> UniPoly:
    return face_hstar(points)


def _counts_from_hstar(h: UniPoly, m: int, kmax: int):
    """``|kF cap Z|`` for ``k <= kmax`` from the h* of an ``m``-dimensional face."""
    return [sum(c * comb(k - j + m, m) for j, c in enumerate(h.coeffs) if k - j >= 0)
            for k in range(kmax + 1)]


def _product_face_hstar(blocks, points, dim: int) -> UniPoly:
    """h* of a face of a product, multiplying the Ehrhart counts of its factor faces."""
    counts = [1] * (dim + 1)
    start = 0
    for b in blocks:
        proj = tuple(sorted({p[start:start + b] for p in points}))
        start += b
        m = affine_rank(proj) if len(proj) > 1 else 0
        if m == 0:
            continue
        ck = _counts_from_hstar(_cached_face_hstar(proj), m, dim)
        counts = [x * y for x, y in zip(counts, ck)]
    coeffs = [sum((-1) ** j * comb(dim + 1, j) * counts[i - j] for j in range(i + 1))
              for i in range(dim + 1)]
    return UniPoly(coeffs)


def _hstar_by_reciprocity(Q: LatticePolytope):
    """h* from counts in ``kQ`` for small ``k`` plus interior counts via reciprocity."""
    from fractions import Fraction
    m = Q.dim
    a = (m + 1) // 2
    b = m - a
    xs, ys = [], []
    for k in range(a + 1):
        xs.append(k)
        ys.append(1 if k == 0 else len(Q.lattice_point_array(k)))
    for k in range(1, b + 1):
        xs.append(-k)
        ys.append((-1) ** m * len(Q.interior_lattice_points(k)))

    def L(x):
        total = Fraction(0)
        for i, xi in enumerate(xs):
            term = Fraction(ys[i])
            for j, xj in enumerate(xs):
                if j != i:
                    term *= Fraction(x - xj, xi - xj)
            total += term
        return total

    vals = [L(k) for k in range(m + 1)]
    out = []
    for i in range(m + 1):
        h = sum((-1) ** j * comb(m + 1, j) * vals[i - j] for j in range(i + 1))
        if h.denominator != 1:
            raise ArithmeticError("non-integral h* coefficient")
        out.append(int(h))
    return out


# -- face posets and g-polynomials -----------------------------------------------

class FacePoset:
    """Face lattice of a polytope with cover relations and g-polynomial memo."""

    def __init__(self, P: LatticePolytope):
        self.P = P
        L = P.face_lattice
        self.faces = L.faces
        self.dims = L.dims
        self.index = L.index
        self.n = len(self.faces)
        self.bottom = 0
        self.top = self.n - 1
        self._g = {}
        self._hstar = {}
        self._stilde = {}
        self._checked = 0
        # coordinate blocks of a product; faces of products are products of faces
        fs = getattr(P, "factors", None)
        self.factors = tuple(F.dim for F in fs) if fs else ()
        self._build_covers()

    def _build_covers(self):
        up = [[] for _ in range(self.n)]
        down = [[] for _ in range(self.n)]
        facets = self.P.facet_vertex_sets()
        by_dim = defaultdict(list)
        for i, dm in enumerate(self.dims):
            by_dim[dm].append(i)
        for j in range(self.n):
            dm = self.dims[j]
            if dm <= 0:
                continue
            m = self.faces[j]
            subs = set()
            if dm == self.P.dim:
                subs = {self.index[f] for f in facets}
            else:
                for f in facets:
                    x = m & f
                    if x != m:
                        k = self.index.get(x)
                        if k is not None and self.dims[k] == dm - 1:
                            subs.add(k)
            for k in subs:
                down[j].append(k)
                up[k].append(j)
        for v in by_dim.get(0, []):
            down[v].append(self.bottom)
            up[self.bottom].append(v)
        self.up = [tuple(x) for x in up]
        self.down = [tuple(x) for x in down]

    def leq(self, x: int, y: int) -> bool:
        fx = self.faces[x]
        return fx & self.faces[y] == fx

    def interval(self, x: int, y: int):
        """Elements of ``[x, y]``."""
        seen = {x}
        stack = [x]
        fy = self.faces[y]
        while stack:
            z = stack.pop()
            for w in self.up[z]:
                if w not in seen and (self.faces[w] & fy) == self.faces[w]:
                    seen.add(w)
                    stack.append(w)
        return seen

    def below(self, y: int):
        """All faces of ``y`` including the empty face."""
        seen = {y}
        stack = [y]
        while stack:
            z = stack.pop()
            for w in self.down[z]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def _is_boolean(self, x, y) -> bool:
        m = self.dims[y] - self.dims[x]
        fy = self.faces[y]
        atoms = sum(1 for z in self.up[x] if (self.faces[z] & fy) == self.faces[z])
        return atoms == m

    def g(self, x: int, y: int, dual: bool = False) -> UniPoly:
        """Toric g-polynomial of ``[x, y]``, or of its order dual when ``dual``."""
        key = (x, y, dual)
        if key in self._g:
            return self._g[key]
        m = self.dims[y] - self.dims[x]
        if m <= 2 or self._is_boolean(x, y):
            res = UniPoly.one()
        else:
            self._spot_check(x, y)
            h = [0] * m
            for z in self.interval(x, y):
                if dual:
                    if z == x:
                        continue
                    gz = self.g(z, y, True).coeffs
                    rho = self.dims[y] - self.dims[z]
                else:
                    if z == y:
                        continue
                    gz = self.g(x, z, False).coeffs
                    rho = self.dims[z] - self.dims[x]
                pw = _t_minus_1_power(m - 1 - rho)
                for i, a in enumerate(gz):
                    if a:
                        for j, b in enumerate(pw):
                            h[i + j] += a * b
            res = UniPoly([h[i] - (h[i - 1] if i else 0) for i in range((m - 1) // 2 + 1)])
        self._g[key] = res
        return res

    def _spot_check(self, x, y):
        # Eulerian check on the first few nontrivial intervals of small rank
        if self._checked >= 8 or self.dims[y] - self.dims[x] > 4:
            return
        self._checked += 1
        elems = sorted(self.interval(x, y), key=lambda k: self.dims[k])
        mu = {}
        for z in elems:
            if z == x:
                mu[z] = 1
                continue
            mu[z] = -sum(v for w, v in mu.items() if w != z and self.leq(w, z))
        if mu[y] != (-1) ** (self.dims[y] - self.dims[x]):
            raise NotEulerian(f"interval of rank {self.dims[y] - self.dims[x]} is not Eulerian")

    def face_points(self, i: int):
        V = self.P.vertices
        m = self.faces[i]
        return [V[k] for k in range(len(V)) if m >> k & 1]

    def hstar(self, i: int) -> UniPoly:
        if i not in self._hstar:
            if self.dims[i] <= 0:
                self._hstar[i] = UniPoly.one()
            elif self.factors:
                self._hstar[i] = _product_face_hstar(self.factors, self.face_points(i), self.dims[i])
            else:
                self._hstar[i] = face_hstar(self.face_points(i))
        return self._hstar[i]

    def s_tilde(self, i: int) -> UniPoly:
        if i in self._stilde:
            return self._stilde[i]
        dF = self.dims[i]
        total = UniPoly((0,))
        for j in self.below(i):
            term = self.hstar(j) * self.g(j, i, True)
            if (dF - self.dims[j]) % 2:
                total = total - term
            else:
                total = total + term
        self._stilde[i] = total
        return total


# -- Gorenstein cones and dual pairs -------------------------------------------------

@dataclass(frozen=True)
class GorensteinCone:
    base: LatticePolytope
    point: tuple           # (w, r)
    normals: tuple         # eta_F, one per facet of base, in facet order

    @classmethod
    def of(cls, P: LatticePolytope, data: GorensteinData | None = None) -> "GorensteinCone":
        if data is None:
            data = P.gorenstein_index()
            if data is None:
                raise GorensteinConditionViolated("polytope is not Gorenstein")
        p = tuple(data.interior_point_of_rP) + (data.index,)
        normals = tuple(f.normal + (f.offset,) for f in P.facets)
        for eta in normals:
            if intlin.dot(eta, p) != 1:
                raise GorensteinConditionViolated(
                    f"<eta, p> = {intlin.dot(eta, p)} for facet normal {eta}")
        return cls(P, p, normals)

    @property
    def index(self) -> int:
        return self.point[-1]


@dataclass
class DualPair:
    P: LatticePolytope
    P_dual: LatticePolytope
    index: int
    face_match: dict         # face index of P -> face index of P_dual
    facet_to_vertex: tuple   # facet k of P -> vertex index of P_dual
    cone: GorensteinCone

    @property
    def dim(self) -> int:
        return self.P.dim

    @property
    def cy_dim(self) -> int:
        return self.P.dim + 1 - 2 * self.index

    @cached_property
    def poset(self) -> FacePoset:
        return FacePoset(self.P)

    @cached_property
    def dual_poset(self) -> FacePoset:
        return FacePoset(self.P_dual)

    def swapped(self) -> "DualPair":
        """The pair ``(P^x, P)``.

        ``P`` stands in for ``P^xx``: the two are isomorphic, and reusing ``P``
        keeps its face posets and any product structure.  Call
        ``dual_gorenstein(pair.P_dual)`` for an independent recomputation.
        """
        inv = {j: i for i, j in self.face_match.items()}
        L, Ld = self.P.face_lattice, self.P_dual.face_lattice
        f2v = []
        for mask in self.P_dual.facet_vertex_sets():
            vmask = L.faces[inv[Ld.index[mask]]]
            f2v.append(vmask.bit_length() - 1)
        out = DualPair(self.P_dual, self.P, self.index, inv, tuple(f2v), GorensteinCone.of(self.P_dual))
        out.__dict__["poset"] = self.dual_poset
        out.__dict__["dual_poset"] = self.poset
        return out


def dual_gorenstein(P: LatticePolytope, data: GorensteinData | None = None) -> DualPair:
    cone = GorensteinCone.of(P, data)
    Pd, back = restrict_to_span(cone.normals)
    if Pd.dim != P.dim:
        raise GorensteinConditionViolated("dual cone is not full-dimensional")
    fwd = back.inverse()
    vpos = {v: i for i, v in enumerate(Pd.vertices)}
    k = Pd.dim
    facet_to_vertex = []
    for eta in cone.normals:
        y = fwd(eta)
        if any(y[k:]):
            raise AssertionError("normal left the dual hyperplane")
        facet_to_vertex.append(vpos[tuple(y[:k])])
    L, Ld = P.face_lattice, Pd.face_lattice
    vfacets = P.vertex_facets
    match = {}
    for i, m in enumerate(L.faces):
        # facets containing the face; all facets for the empty face
        common = (1 << len(P.facets)) - 1
        for v in range(P.n_vertices):
            if m >> v & 1:
                common &= vfacets[v]
        dm = 0
        for f in range(len(P.facets)):
            if common >> f & 1:
                dm |= 1 << facet_to_vertex[f]
        j = Ld.index.get(dm)
        if j is None:
            raise AssertionError("dual face not found")
        if L.dims[i] + Ld.dims[j] != P.dim - 1:
            raise AssertionError("dual face has the wrong dimension")
        match[i] = j
    return DualPair(P, Pd, cone.index, match, tuple(facet_to_vertex), cone)


def g_polynomial(P: LatticePolytope, x: int | None = None, y: int | None = None,
                 dual: bool = False) -> UniPoly:
    """g of the interval ``[x, y]`` of the face lattice of ``P`` (whole lattice by default)."""
    fp = FacePoset(P)
    return fp.g(fp.bottom if x is None else x, fp.top if y is None else y, dual)


def s_tilde(P: LatticePolytope, face_mask: int) -> UniPoly:
    fp = FacePoset(P)
    return fp.s_tilde(fp.index[face_mask])


def stringy_E(pair: DualPair) -> BivariateLaurent:
    A, B = pair.poset, pair.dual_poset
    r = pair.index
    total = BivariateLaurent()
    for i in range(A.n):
        sa = A.s_tilde(i)
        if sa.is_zero():
            continue
        sb = B.s_tilde(pair.face_match[i])
        if sb.is_zero():
            continue
        k = A.dims[i] + 1
        term = _subst_ratio(sa) * _subst_product(sb)
        total = total + term.shift(k, 0) * ((-1) ** k)
    E = total.shift(-r, -r)
    n = pair.cy_dim
    box = E.exponent_box()
    if box is not None:
        lo_p, hi_p, lo_q, hi_q = box
        if lo_p < 0 or lo_q < 0 or hi_p > n or hi_q > n:
            raise ExponentRangeViolation(f"exponents {box} outside [0, {n}]^2")
    return E


@dataclass(frozen=True)
class HodgeTable:
    n: int
    entries: tuple     # entries[p][q] = h^{p,q}

    def __getitem__(self, pq):
        p, q = pq
        return self.entries[p][q]

    @property
    def pair(self):
        """``(h^{1,1}, h^{1,2})`` for threefolds."""
        if self.n != 3:
            raise ValueError("the Hodge pair is defined for n = 3")
        return self.entries[1][1], self.entries[1][2]

    def negative_entries(self):
        return [(p, q) for p in range(self.n + 1) for q in range(self.n + 1)
                if self.entries[p][q] < 0]

    def text(self) -> str:
        width = max([len(str(x)) for row in self.entries for x in row] + [1])
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.entries)


def hodge_table(E: BivariateLaurent, n: int) -> HodgeTable:
    if n < 0:
        if not E.is_zero():
            raise ExponentRangeViolation("nonzero E-polynomial with n < 0")
        return HodgeTable(n, ())
    box = E.exponent_box()
    if box is not None and (box[0] < 0 or box[2] < 0 or box[1] > n or box[3] > n):
        raise ExponentRangeViolation(f"exponents {box} outside [0, {n}]^2")
    return HodgeTable(n, tuple(tuple((-1) ** (p + q) * E.coefficient(p, q) for q in range(n + 1))
                               for p in range(n + 1)))


def mirror_check(pair: DualPair, E=None, E_dual=None) -> bool:
    """``E(P; u, v) == (-u)^n E(P^x; u^-1, v)``."""
    n = pair.cy_dim
    if E is None:
        E = stringy_E(pair)
    if E_dual is None:
        E_dual = stringy_E(pair.swapped())
    rhs = E_dual.invert_u().shift(n, 0) * ((-1) ** n)
    return E == rhs


def reduction_check(s: int, bs) -> bool:
    """``E_st(S_s * b_2 S_s * ...) == E_st(b_2 S_{s-1} * ...)`` when ``sum(b) == s``."""
    from .construct import cayley_of_simplices, dilate, simplex
    bs = [int(b) for b in bs]
    if min(bs, default=0) < 1 or sum(bs) != s:
        raise ValueError("need b_i >= 1 with sum s")
    left = cayley_of_simplices(s, [1] + bs)
    if len(bs) == 1:
        right = dilate(simplex(s - 1), bs[0])
    else:
        right = cayley_of_simplices(s - 1, bs)
    return stringy_E(dual_gorenstein(left)) == stringy_E(dual_gorenstein(right))
