import warnings

import pytest

from conftest import cached_run
from smoothgor.classify import (classify, cross_validate, delta, fano_index_table, to_gorenstein,
                                vertex_limit)
from smoothgor.construct import simplex
from smoothgor.errors import BoxPossiblyInsufficient, OutOfRange
from smoothgor.fixtures import FANO_INDEX, TABLE
from smoothgor.polytope import hull, is_isomorphic


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_small_dimensions_match_reference_counts(d):
    assert cached_run(d, 1).counts() == {r: n for r, n in TABLE[d].items() if n}


@pytest.mark.parametrize("d", [2, 3, 4])
def test_fano_index_histogram(d):
    assert fano_index_table(d, cached_run(d, 1)) == FANO_INDEX[d]


def test_fano_table_needs_full_run():
    with pytest.raises(ValueError):
        fano_index_table(3, cached_run(3, 2))


def test_results_are_smooth_gorenstein_and_distinct():
    run = cached_run(4, 1)
    digests = set()
    for c in run.results:
        P = c.polytope
        assert P.dim == 4 and P.is_smooth()
        assert P.gorenstein_index().index == c.index
        assert c.fano.is_reflexive() and c.fano.is_simplicial()
        digests.add((c.index, c.digest))
    assert len(digests) == len(run.results)


def test_to_gorenstein_inverts_the_dual():
    for c in cached_run(3, 1).results:
        assert is_isomorphic(to_gorenstein(c.fano, c.index), c.polytope)


def test_delta():
    assert delta(hull([(1, 0), (-1, 0), (0, 1), (0, -1)])) == 1
    assert delta(hull([(1, 0), (0, 1), (-1, -1)])) == 2
    with pytest.raises(ValueError):
        delta(simplex(2))


@pytest.mark.parametrize("d", [3, 4, 5])
def test_vertex_limit_holds(d):
    run = cached_run(d, 2)
    for c in run.results:
        r = c.index
        assert delta(c.fano) >= r - 1
        assert c.fano.n_vertices <= vertex_limit(d, r)


def test_pruned_runs_agree_with_the_full_run():
    full = cached_run(4, 1).counts()
    assert cached_run(4, 2).counts() == {r: n for r, n in full.items() if r >= 2}
    assert cached_run(4, 2).digests(2) == cached_run(4, 1).digests(2)
    assert classify(4, 3, r_max=3, threads=1).counts() == {3: 1}


def test_runs_are_deterministic():
    a = classify(3, 1, threads=1)
    b = classify(3, 1, threads=1)
    assert a.digests() == b.digests()


def test_small_box_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        run = classify(3, 1, box=1, threads=1)
    assert any(issubclass(w.category, BoxPossiblyInsufficient) for w in caught)
    assert sum(run.counts().values()) < sum(cached_run(3, 1).counts().values())


@pytest.mark.parametrize("d,r", [(4, 3), (4, 5), (5, 3), (5, 6), (6, 4)])
def test_cross_validation(d, r):
    cv = cross_validate(d, r, threads=1)
    assert cv.ok, cv.report()
    assert not cv.missing and not cv.extra


def test_cross_validation_range():
    with pytest.raises(OutOfRange):
        cross_validate(6, 3)


@pytest.mark.parametrize("d", [2, 3])
def test_compiled_search_matches_reference_search(d):
    from smoothgor.polytope import LatticePolytope
    from smoothgor.search import SpecialFacetSearch
    slow = {LatticePolytope(list(v)).canonical_form().hexdigest for v in SpecialFacetSearch(d, 1).run()}
    fast = {c.fano.canonical_form().hexdigest for c in cached_run(d, 1).at_index(1)}
    assert slow == fast
