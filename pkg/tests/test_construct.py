import pytest
from hypothesis import given, settings, strategies as st

from smoothgor.construct import (CAYLEY, FamilySpec, Partition, cayley, cayley_of_simplices,
                                 ci_degrees, dilate, family_specs, free_sum, kleinschmidt_polytope,
                                 minkowski_sum, partitions, product, simplex, theorem_family,
                                 triple_product)
from smoothgor.errors import OutOfRange
from smoothgor.fixtures import TABLE
from smoothgor.polytope import hull, is_isomorphic

SQUARE = hull([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_basic_builders():
    assert set(simplex(2).vertices) == {(0, 0), (1, 0), (0, 1)}
    assert minkowski_sum(simplex(1), simplex(1)) == dilate(simplex(1), 2)
    assert product(simplex(1), simplex(1)) == SQUARE
    fs = free_sum(hull([(-1,), (1,)]), hull([(-1,), (1,)]))
    assert set(fs.vertices) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    with pytest.raises(ValueError):
        free_sum(simplex(1).translate((1,)), simplex(1))


def test_cayley():
    assert is_isomorphic(cayley([simplex(1), simplex(1)]), SQUARE)
    assert cayley([simplex(2)]) == simplex(2)
    with pytest.raises(ValueError):
        cayley([simplex(1), simplex(2)])
    # the closed-form Cayley builder agrees with the generic hull
    for bs in ([1, 2], [2, 1, 3], [1, 1, 1]):
        direct = cayley_of_simplices(2, bs)
        generic = cayley([dilate(simplex(2), b) for b in bs])
        assert direct == generic


@pytest.mark.parametrize("bs", [[6], [4, 1], [2, 1, 1], [1, 2, 1], [3, 1, 1, 1]])
def test_cayley_of_simplices_with_matching_dilations(bs):
    # sum(b) = d + 2 - r gives a smooth d-polytope of index r
    r = len(bs)
    d = sum(bs) + r - 2
    P = cayley_of_simplices(d + 1 - r, bs)
    assert P.dim == d
    assert P.is_smooth()
    assert P.gorenstein_index().index == r


def test_equal_factors_need_r_half_of_d_plus_two():
    for d in (2, 4, 6):
        r = (d + 2) // 2
        assert cayley_of_simplices(d + 1 - r, [1] * r).gorenstein_index().index == r
    assert cayley_of_simplices(4, [1, 1]).gorenstein_index() is None


def test_partitions():
    assert [p.parts for p in partitions(4, 9)] == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
    assert partitions(0, 3) == [Partition(())]
    assert len(partitions(6, 8)) == 11
    assert Partition((1, 3, 2)).parts == (3, 2, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 14), st.integers(1, 8))
def test_partitions_against_brute_force(n, k):
    def count(rest, largest, parts):
        if rest == 0:
            return 1
        if parts == 0:
            return 0
        return sum(count(rest - x, x, parts - 1) for x in range(1, min(rest, largest) + 1))
    ps = partitions(n, k)
    assert len(ps) == count(n, n, k) == len(set(ps))
    assert all(p.total == n and len(p) <= k for p in ps)


def test_family_examples():
    assert len(theorem_family(20, 8, build=False)) == 11
    assert len(theorem_family(14, 6, build=False)) == 5
    (spec, P), = theorem_family(4, 5)
    assert P == simplex(4)
    with pytest.raises(OutOfRange):
        theorem_family(6, 3)


def test_family_counts_match_every_large_index_cell():
    cells = 0
    for d, row in TABLE.items():
        for r, n in row.items():
            if d >= 1 and 3 * r > d + 3 and r <= d + 1:
                assert len(family_specs(d, r)) == n, (d, r)
                cells += 1
    assert cells > 50


@pytest.mark.parametrize("d", range(2, 10))
def test_family_members_are_smooth_gorenstein_and_distinct(d):
    for r in range(1, d + 2):
        if 3 * r <= d + 3:
            continue
        fam = theorem_family(d, r)
        digests = set()
        for spec, P in fam:
            g = P.gorenstein_index()
            assert P.dim == d and P.is_smooth()
            assert g.index == r and g.cy_dim == d + 1 - 2 * r == spec.cy_dim
            digests.add(P.canonical_form())
        assert len(digests) == len(fam)


def test_ci_degrees():
    assert ci_degrees(FamilySpec(5, 3, CAYLEY, Partition((1,)))) == (1, [2])
    spec = FamilySpec(4, 1, CAYLEY, Partition((4,)))
    assert ci_degrees(spec) == (4, [5])
    assert spec.build() == dilate(simplex(4), 5)
    (two,) = [s for s, _ in theorem_family(7, 4) if s.case == "TwiceSimplex"]
    assert ci_degrees(two) == (1, [2])


def test_family_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec(5, 3, CAYLEY, Partition((2,)))
    with pytest.raises(ValueError):
        FamilySpec(4, 2, "TwiceSimplex")
    with pytest.raises(ValueError):
        FamilySpec(5, 3, "ProductOfSimplices")


def test_kleinschmidt():
    P = kleinschmidt_polytope(3, 1, (2,))
    assert P.n_vertices == 5 and P.is_reflexive() and P.is_simplicial()
    assert set(kleinschmidt_polytope(2, 1, (1,)).vertices) == {(1, 0), (0, 1), (-1, 0), (1, -1)}


@pytest.mark.parametrize("n,d,r", [(0, 3, 2), (1, 6, 3)])
def test_triple_product(n, d, r):
    P = triple_product(n)
    assert P.dim == d == 3 * n + 3
    g = P.gorenstein_index()
    assert g.index == r == n + 2
    assert P.is_smooth()
    # (rP - w)^* has d + 3 vertices
    assert len(P.facets) == d + 3
