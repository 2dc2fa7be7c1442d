from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from smoothgor.construct import dilate, product, simplex
from smoothgor.ehrhart import (ehrhart_counts, ehrhart_polynomial, evaluate, gorenstein_via_symmetry,
                               hstar, is_normal)
from smoothgor.errors import LowerDimensional
from smoothgor.polytope import hull

SQUARE = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
REEVE = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])


def test_counts():
    assert ehrhart_counts(SQUARE, 2) == [1, 4, 9]
    assert ehrhart_counts(simplex(2), 3) == [1, 3, 6, 10]
    assert ehrhart_counts(dilate(simplex(2), 2), 2) == [1, 6, 15]


def test_hstar_examples():
    for d in range(1, 5):
        assert tuple(hstar(simplex(d))) == (1,) + (0,) * d
    assert tuple(hstar(SQUARE)) == (1, 1, 0)
    assert tuple(hstar(dilate(simplex(2), 2))) == (1, 3, 0)


def test_symmetry_examples():
    assert gorenstein_via_symmetry(simplex(3)) == 4
    assert gorenstein_via_symmetry(dilate(simplex(2), 2)) is None
    assert gorenstein_via_symmetry(SQUARE) == 2


def test_normality_examples():
    assert is_normal(SQUARE)
    assert is_normal(simplex(3))
    assert not is_normal(REEVE)
    assert is_normal(dilate(REEVE, 2))


def test_product_counts_multiply():
    P = product(simplex(2), dilate(simplex(1), 3))
    direct = [len(P.lattice_points(k)) for k in range(4)]
    assert ehrhart_counts(P, 3) == direct


def _simplex_volume(verts):
    # normalized volume |det| of a simplex
    from smoothgor.intlin import det
    v0 = verts[0]
    return abs(det([[a - b for a, b in zip(v, v0)] for v in verts[1:]]))


points3 = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=4, max_size=7, unique=True)


@settings(max_examples=30, deadline=None)
@given(points3)
def test_hstar_against_volume_and_reciprocity(points):
    try:
        P = hull(points)
    except LowerDimensional:
        return
    h = hstar(P)
    L = P.lattice_points()
    assert h[0] == 1 and h[1] == len(L) - P.dim - 1
    assert all(x >= 0 for x in h)
    # sum of h* is the normalized volume; cone over a vertex triangulates P
    if P.n_vertices == P.dim + 1:
        assert h.normalized_volume() == _simplex_volume(P.vertices)
    poly = ehrhart_polynomial(P)
    assert poly[-1] * factorial(P.dim) == h.normalized_volume()
    for k in (1, 2):
        inner = len(P.interior_lattice_points(k))
        assert inner == (-1) ** P.dim * evaluate(poly, Fraction(-k))


@settings(max_examples=25, deadline=None)
@given(points3)
def test_palindromic_iff_gorenstein(points):
    try:
        P = hull(points)
    except LowerDimensional:
        return
    g = P.gorenstein_index()
    h = hstar(P)
    assert h.is_palindromic() == (g is not None)
    if g is not None:
        assert h.codegree == g.index


@pytest.mark.parametrize("P", [simplex(4), dilate(simplex(3), 2), product(simplex(2), simplex(2)),
                               SQUARE, REEVE], ids=["S4", "2S3", "S2xS2", "square", "reeve"])
def test_palindromic_iff_gorenstein_fixtures(P):
    g = P.gorenstein_index()
    assert hstar(P).is_palindromic() == (g is not None)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=4, max_size=6, unique=True))
def test_normality_agrees_with_pairwise_check(points):
    from smoothgor.ehrhart import _is_normal_pairwise
    try:
        P = hull(points)
    except LowerDimensional:
        return
    assert is_normal(P) == _is_normal_pairwise(P)
