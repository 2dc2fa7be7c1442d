"""Builders: simplices, dilates, products, sums, Cayley polytopes and the large-index families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import intlin
from .errors import LowerDimensional, OutOfRange
from .polytope import FacetData, LatticePolytope, hull, restrict_to_span

SIMPLEX = "Simplex"
TWICE_SIMPLEX = "TwiceSimplex"
PRODUCT = "ProductOfSimplices"
CAYLEY = "CayleyFamily"


def simplex(d: int) -> LatticePolytope:
    """``S_d = conv(0, e_1, ..., e_d)``."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    if d == 0:
        return LatticePolytope([()], ambient_dim=0)
    verts = [(0,) * d] + [tuple(int(i == j) for j in range(d)) for i in range(d)]
    facets = [FacetData(tuple(int(i == j) for j in range(d)), 0) for i in range(d)]
    facets.append(FacetData((-1,) * d, 1))
    return LatticePolytope.from_trusted(verts, facets)


def dilate(P: LatticePolytope, k: int) -> LatticePolytope:
    Q = P.dilate(k)
    factors = getattr(P, "factors", None)
    if factors:
        # k(P1 x P2) = kP1 x kP2 keeps the factor structure for counting
        Q.factors = tuple(dilate(F, k) for F in factors)
    return Q


def product(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    """Cartesian product; remembers its factors for Ehrhart counting."""
    if P.dim == 0:
        return Q
    if Q.dim == 0:
        return P
    p, q = P.dim, Q.dim
    verts = [v + w for v in P.vertices for w in Q.vertices]
    facets = [FacetData(f.normal + (0,) * q, f.offset) for f in P.facets]
    facets += [FacetData((0,) * p + f.normal, f.offset) for f in Q.facets]
    R = LatticePolytope.from_trusted(verts, facets)
    R.factors = _factors(P) + _factors(Q)
    return R


def _factors(P):
    return tuple(getattr(P, "factors", None) or (P,))


def free_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    """``conv(P x 0, 0 x Q)``; both summands must contain the origin."""
    for X in (P, Q):
        if not X.contains((0,) * X.dim):
            raise ValueError("free sum needs the origin in each summand")
    p, q = P.dim, Q.dim
    pts = [v + (0,) * q for v in P.vertices] + [(0,) * p + w for w in Q.vertices]
    return hull(pts)


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.dim != Q.dim:
        raise ValueError("summands live in different lattices")
    return hull({tuple(a + b for a, b in zip(v, w)) for v in P.vertices for w in Q.vertices})


def cayley(factors) -> LatticePolytope:
    """``P_0 * ... * P_k``: the ``P_i`` placed over the vertices of a unimodular simplex."""
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    s = factors[0].ambient_dim
    if any(F.ambient_dim != s for F in factors):
        raise ValueError("factors must share their ambient lattice")
    if len(factors) == 1:
        return factors[0]
    k = len(factors) - 1
    pts = []
    for i, F in enumerate(factors):
        tag = tuple(int(j == i - 1) for j in range(k))
        pts.extend(v + tag for v in F.vertices)
    try:
        return hull(pts)
    except LowerDimensional:
        Q, _ = restrict_to_span(pts)
        if Q.dim != s + k:
            raise
        return Q


def cayley_of_simplices(s: int, dilations) -> LatticePolytope:
    """``b_0 S_s * ... * b_k S_s`` with its facets written down directly.

    With coordinates ``(x, y)`` in ``Z^s x Z^k`` the facets are ``x_i >= 0``,
    ``y_j >= 0``, ``sum(y) <= 1`` and ``sum(x) <= b_0 + sum_j (b_j - b_0) y_j``.
    """
    bs = [int(b) for b in dilations]
    if s < 1 or not bs or min(bs) < 1:
        raise ValueError("need s >= 1 and positive dilations")
    k = len(bs) - 1
    verts = []
    for i, b in enumerate(bs):
        tag = tuple(int(j == i - 1) for j in range(k))
        verts.append((0,) * s + tag)
        for a in range(s):
            verts.append(tuple(b * int(a == c) for c in range(s)) + tag)
    facets = [FacetData(tuple(int(i == c) for c in range(s + k)), 0) for i in range(s + k)]
    if k:
        facets.append(FacetData((0,) * s + (-1,) * k, 1))
    facets.append(FacetData((-1,) * s + tuple(b - bs[0] for b in bs[1:]), bs[0]))
    return LatticePolytope.from_trusted(verts, facets)


# -- partitions and the large-index families --------------------------------

@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted((int(x) for x in self.parts), reverse=True)))
        if any(x <= 0 for x in self.parts):
            raise ValueError("parts must be positive")

    def __len__(self):
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)


def partitions(N: int, max_parts: int):
    """Partitions of ``N`` into at most ``max_parts`` positive parts, in lexicographic order."""
    if N < 0 or max_parts < 1:
        raise ValueError("need N >= 0 and max_parts >= 1")
    out = []

    def rec(rest, largest, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        if len(acc) == max_parts:
            return
        for x in range(min(rest, largest), 0, -1):
            rec(rest - x, x, acc + [x])

    rec(N, N, [])
    return sorted(out)


@dataclass(frozen=True)
class FamilySpec:
    d: int
    r: int
    case: str
    partition: Partition = field(default_factory=Partition)

    def __post_init__(self):
        if self.case == CAYLEY:
            if self.partition.total != self.d + 2 - 2 * self.r or len(self.partition) > self.r:
                raise ValueError("partition does not fit d and r")
        elif self.case == TWICE_SIMPLEX and self.d % 2 == 0:
            raise ValueError("2S_d occurs only for odd d")
        elif self.case == PRODUCT and self.d % 2:
            raise ValueError("S_{d/2} x S_{d/2} needs even d")
        elif self.case not in (SIMPLEX, TWICE_SIMPLEX, PRODUCT, CAYLEY):
            raise ValueError(f"unknown family case {self.case!r}")

    @property
    def cy_dim(self) -> int:
        return self.d + 1 - 2 * self.r

    def dilations(self):
        """Dilation factors of the ``r`` Cayley factors, largest first."""
        a = list(self.partition.parts) + [0] * (self.r - len(self.partition))
        return [x + 1 for x in a]

    def build(self) -> LatticePolytope:
        d = self.d
        if self.case == SIMPLEX:
            return simplex(d)
        if self.case == TWICE_SIMPLEX:
            return dilate(simplex(d), 2)
        if self.case == PRODUCT:
            return product(simplex(d // 2), simplex(d // 2))
        return cayley_of_simplices(d + 1 - self.r, self.dilations())

    def describe(self) -> str:
        if self.case == SIMPLEX:
            return f"S_{self.d}"
        if self.case == TWICE_SIMPLEX:
            return f"2S_{self.d}"
        if self.case == PRODUCT:
            return f"S_{self.d // 2} x S_{self.d // 2}"
        s = self.d + 1 - self.r
        return " * ".join(f"{b}S_{s}" if b > 1 else f"S_{s}" for b in self.dilations())


def family_specs(d: int, r: int):
    """The families with ``r > (d + 3) / 3``, in a fixed order."""
    if d < 1 or r < 1 or r > d + 1:
        raise OutOfRange(f"no smooth Gorenstein polytopes with d={d}, r={r}")
    if 3 * r <= d + 3:
        raise OutOfRange(f"r={r} <= (d+3)/3 for d={d}: the family list is incomplete there, "
                         "use the classification search")
    specs = []
    if r == d + 1:
        specs.append(FamilySpec(d, r, SIMPLEX))
    if d % 2 == 1 and 2 * r == d + 1:
        specs.append(FamilySpec(d, r, TWICE_SIMPLEX))
    # d = 2 is included: the unit square has index 2 > 5/3
    if d % 2 == 0 and 2 * r == d + 2:
        specs.append(FamilySpec(d, r, PRODUCT))
    if 2 * r <= d + 1:
        for part in partitions(d + 2 - 2 * r, r):
            specs.append(FamilySpec(d, r, CAYLEY, part))
    return specs


def theorem_family(d: int, r: int, build: bool = True):
    """Pairs ``(spec, polytope)`` of all smooth Gorenstein polytopes with ``r > (d+3)/3``.

    With ``build=False`` the polytopes are omitted (``None``).
    """
    return [(s, s.build() if build else None) for s in family_specs(d, r)]


def kleinschmidt_polytope(d: int, k: int, a) -> LatticePolytope:
    """``conv(e_1..e_d, -e_1-...-e_k, a_1 e_1 + ... + a_k e_k - e_{k+1} - ... - e_d)``."""
    a = [int(x) for x in a]
    if not 1 <= k <= d - 1 or len(a) != k or min(a, default=0) < 0 or sum(a) > d - k:
        raise ValueError("need 1 <= k <= d-1 and k nonnegative a_i with sum <= d-k")
    pts = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    pts.append(tuple(-1 if j < k else 0 for j in range(d)))
    pts.append(tuple(a[j] if j < k else -1 for j in range(d)))
    return hull(pts)


def triple_product(n: int) -> LatticePolytope:
    """``S_{n+1} x S_{n+1} x S_{n+1}``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    S = simplex(n + 1)
    return product(product(S, S), S)


def ci_degrees(spec: FamilySpec):
    """``(s~, degrees)`` of the complete intersection attached to a family.

    Cayley factors with ``a_i = 0`` are dropped; each remaining factor gives a
    hypersurface of degree ``a_i + 1`` in projective space of dimension
    ``s~ = (d + 1 - r) - #{a_i = 0}``, and the degrees sum to ``s~ + 1``.
    """
    if spec.cy_dim < 0:
        raise OutOfRange(f"Calabi-Yau dimension {spec.cy_dim} < 0")
    if spec.case == TWICE_SIMPLEX:
        return 1, [2]
    if spec.case != CAYLEY:
        raise ValueError("degrees are defined for Cayley families and 2S_d")
    a = list(spec.partition.parts) + [0] * (spec.r - len(spec.partition))
    s_tilde = spec.d + 1 - spec.r - sum(1 for x in a if x == 0)
    degrees = [x + 1 for x in a if x > 0]
    assert sum(degrees) == s_tilde + 1
    return s_tilde, degrees
