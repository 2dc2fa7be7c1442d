import pytest
from hypothesis import given, settings, strategies as st

from smoothgor.construct import cayley_of_simplices, dilate, product, simplex
from smoothgor.errors import ExponentRangeViolation, GorensteinConditionViolated
from smoothgor.polytope import hull, is_isomorphic
from smoothgor.stringy import (BivariateLaurent, FacePoset, UniPoly, dual_gorenstein, face_hstar,
                               g_polynomial, hodge_table, mirror_check, reduction_check, s_tilde,
                               stringy_E)

SEGMENT = hull([(-1,), (1,)])
SQUARE = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
OCTAHEDRON = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
CUBE = product(product(simplex(1), simplex(1)), simplex(1))


def polygon(m):
    # lattice m-gons for m = 3..6
    pts = {3: [(0, 0), (1, 0), (0, 1)],
           4: [(0, 0), (1, 0), (0, 1), (1, 1)],
           5: [(0, 0), (2, 0), (3, 1), (2, 2), (0, 1)],
           6: [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]}[m]
    return hull(pts)


def test_unipoly_arithmetic():
    a, b = UniPoly((1, 2)), UniPoly((0, 1, 0))
    assert (a * b).coeffs == (0, 1, 2)
    assert (a - a).is_zero() and (a - a).degree == -1
    assert b.coeffs == (0, 1)
    assert a * 3 == UniPoly((3, 6))


def test_g_of_boolean_lattices_is_one():
    for d in range(1, 6):
        assert g_polynomial(simplex(d)) == 1


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_g_of_polygons(m):
    assert g_polynomial(polygon(m)) == UniPoly((1, m - 3))


def test_g_of_three_polytopes():
    # g_1 = f_0 - 4 for the toric g of a 3-polytope
    assert g_polynomial(OCTAHEDRON) == UniPoly((1, 2))
    assert g_polynomial(CUBE) == UniPoly((1, 4))
    # the order dual of the cube's lattice is the octahedron's
    assert g_polynomial(CUBE, dual=True) == UniPoly((1, 2))


def test_s_tilde_examples():
    assert s_tilde(SEGMENT, 0) == 1
    assert s_tilde(SEGMENT, 0b01).is_zero()
    assert s_tilde(SEGMENT, 0b11) == UniPoly((0, 1))


def test_face_hstar():
    assert face_hstar([(0, 0, 0)]) == 1
    assert face_hstar([(0, 0, 5), (1, 2, 5)]) == 1
    assert face_hstar([(0, 0, 5), (2, 4, 5)]) == UniPoly((1, 1))
    # triangle of normalized area 3 in a plane of Z^3
    assert face_hstar([(0, 0, 1), (1, 0, 1), (1, 3, 1)]) == UniPoly((1, 2))
    # square face of a cube needs the non-simplex path
    assert face_hstar([(0, 0, 2), (3, 0, 2), (0, 3, 2), (3, 3, 2)]) == UniPoly((1, 13, 4))


def test_segment_and_simplices():
    assert stringy_E(dual_gorenstein(SEGMENT)) == BivariateLaurent.constant(2)
    for d in range(1, 5):
        assert stringy_E(dual_gorenstein(simplex(d))).is_zero()


def test_quintic_pair():
    Q = dilate(simplex(4), 5).translate((-1,) * 4)
    pair = dual_gorenstein(Q)
    E = stringy_E(pair)
    E_dual = stringy_E(pair.swapped())
    assert hodge_table(E, 3).pair == (1, 101)
    assert hodge_table(E_dual, 3).pair == (101, 1)
    assert mirror_check(pair, E, E_dual)
    table = hodge_table(E_dual, 3)
    assert table[0, 0] == table[3, 3] == 1
    assert table[0, 3] == table[3, 0] == 1
    assert not table.negative_entries()


def test_k3_from_triple_product():
    from smoothgor.construct import triple_product
    pair = dual_gorenstein(triple_product(2))
    E = stringy_E(pair)
    t = hodge_table(E, 2)
    assert t.entries == ((1, 0, 1), (0, 20, 0), (1, 0, 1))


@pytest.mark.parametrize("P", [SEGMENT, SQUARE, simplex(3), OCTAHEDRON, CUBE,
                               cayley_of_simplices(2, [2, 1]), dilate(simplex(2), 3)],
                         ids=["segment", "square", "S3", "octahedron", "cube", "cayley", "3S2"])
def test_dual_pair_properties(P):
    pair = dual_gorenstein(P)
    d = P.dim
    A, B = pair.poset, pair.dual_poset
    seen = set()
    for i, j in pair.face_match.items():
        assert A.dims[i] + B.dims[j] == d - 1
        seen.add(j)
    # F -> F^x is a bijection that reverses inclusion
    assert len(seen) == A.n == B.n
    some = list(pair.face_match)[:12]
    for x in some:
        for y in some:
            if A.leq(x, y):
                assert B.leq(pair.face_match[y], pair.face_match[x])
    back = pair.swapped()
    assert back.index == pair.index and back.P_dual is P
    assert back.swapped().face_match == pair.face_match
    assert is_isomorphic(dual_gorenstein(pair.P_dual).P_dual, P)
    assert mirror_check(pair)


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(1, 2), min_size=1, max_size=3))
def test_double_dual_of_cayley_polytopes(s, bs):
    P = cayley_of_simplices(s, bs)
    if P.gorenstein_index() is None:
        with pytest.raises(GorensteinConditionViolated):
            dual_gorenstein(P)
        return
    pair = dual_gorenstein(P)
    assert is_isomorphic(dual_gorenstein(pair.P_dual).P_dual, P)


@pytest.mark.parametrize("s,bs", [(2, (2,)), (3, (3,)), (4, (2, 2))])
def test_reduction(s, bs):
    assert reduction_check(s, bs)


def test_reduction_rejects_bad_input():
    with pytest.raises(ValueError):
        reduction_check(3, (1, 1))


def test_non_gorenstein_is_rejected():
    with pytest.raises(GorensteinConditionViolated):
        dual_gorenstein(dilate(simplex(2), 2))


def test_exponent_range():
    E = BivariateLaurent({(0, 0): 1, (4, 0): 1})
    with pytest.raises(ExponentRangeViolation):
        hodge_table(E, 3)
    with pytest.raises(ExponentRangeViolation):
        hodge_table(BivariateLaurent.constant(1), -1)
    assert hodge_table(BivariateLaurent(), -1).entries == ()


def test_face_poset_intervals():
    fp = FacePoset(SQUARE)
    assert len(fp.interval(fp.bottom, fp.top)) == 10
    assert fp.g(fp.bottom, fp.top) == UniPoly((1, 1))
