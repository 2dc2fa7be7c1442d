"""End-to-end acceptance checks; each test prints one ``[n] ... OK|FAIL`` line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
when output is captured).
"""
from collections import Counter

import numpy as np
import pytest

from conftest import cached_run, random_unimodular, transform
from smoothgor.classify import cross_validate, fano_index_table
from smoothgor.construct import dilate, family_specs, product, simplex, triple_product
from smoothgor.ehrhart import gorenstein_via_symmetry, hstar, is_normal
from smoothgor.fixtures import (FANO_INDEX, HODGE_D4_R1_MEMBERS, HODGE_D6_R2, TABLE)
from smoothgor.polytope import hull, is_isomorphic
from smoothgor.stringy import (BivariateLaurent, dual_gorenstein, hodge_table, mirror_check,
                               reduction_check, stringy_E)


@pytest.fixture
def report(capsys):
    def emit(n, label, ok, detail=""):
        with capsys.disabled():
            extra = f" ({detail})" if detail else ""
            print(f"\n[{n}] {label}{extra}: {'OK' if ok else 'FAIL'}")
        return ok
    return emit


def _pairs(d, r):
    """Hodge pairs of the duals and the number of failed mirror checks at ``(d, r)``."""
    pairs, bad = [], 0
    for c in cached_run(d, r, r).at_index(r):
        pair = dual_gorenstein(c.polytope)
        E = stringy_E(pair)
        E_dual = stringy_E(pair.swapped())
        bad += not mirror_check(pair, E, E_dual)
        pairs.append(hodge_table(E_dual, pair.cy_dim).pair)
    return pairs, bad


def test_1_full_classification(report):
    expected = {1: {1: 1, 2: 1}, 2: {1: 5, 2: 1, 3: 1}, 3: {1: 18, 2: 3, 4: 1},
                4: {1: 124, 2: 4, 3: 1, 5: 1}, 5: {1: 866, 2: 12, 3: 2, 6: 1}}
    got = {d: cached_run(d, 1).counts() for d in expected}
    assert report(1, "classify(d, 1) counts for d = 1..5", got == expected, str(got[5]))


def test_2_index_pruned_runs(report):
    six = cached_run(6, 2).counts()
    seven = cached_run(7, 3).counts()
    ok = six == {2: 28, 3: 3, 4: 1, 7: 1} and seven.get(3) == 4
    assert report(2, "pruned runs (6, r>=2) and (7, r>=3)", ok, f"{six}, {seven}")


def test_2b_eight_three(report):
    n = cached_run(8, 3, 3).counts().get(3)
    assert report("2b", "(8, r=3) count, non-blocking", n == 13, f"{n}")


def test_3_family_counts(report):
    bad = []
    for d, row in TABLE.items():
        for r, n in row.items():
            if 1 <= d <= 20 and 3 * r > d + 3 and r <= d + 1 and len(family_specs(d, r)) != n:
                bad.append((d, r))
    assert report(3, "large-index family counts equal the reference cells", not bad, str(bad) if bad else "")


def test_4_cross_validation(report):
    bad = []
    for d in range(4, 8):
        for r in range(1, d + 2):
            if 3 * r > d + 3 and not cross_validate(d, r, threads=1).ok:
                bad.append((d, r))
    assert report(4, "search agrees with the families for 4 <= d <= 7", not bad, str(bad) if bad else "")


def test_5_fano_tables(report):
    got = {d: fano_index_table(d, cached_run(d, 1)) for d in (2, 3, 4, 5)}
    ok = all(got[d] == FANO_INDEX[d] for d in (2, 3, 4)) and got[5].get(1) == 853
    assert report(5, "toric Fano index histograms d = 2..5", ok, str(got[4]))


def test_6_stringy_values(report):
    seg = stringy_E(dual_gorenstein(hull([(-1,), (1,)]))) == BivariateLaurent.constant(2)
    simp = all(stringy_E(dual_gorenstein(simplex(d))).is_zero() for d in range(1, 5))
    pair = dual_gorenstein(dilate(simplex(4), 5).translate((-1,) * 4))
    quintic = hodge_table(stringy_E(pair.swapped()), 3).pair
    assert report(6, "E of segment, simplices and the quintic dual", seg and simp and quintic == (101, 1),
                  f"{quintic}")


def test_7_and_8_mirror_and_hodge_pairs(report):
    p4, bad4 = _pairs(4, 1)
    p6, bad6 = _pairs(6, 2)
    ok7 = bad4 == 0 and bad6 == 0 and len(p4) == 124 and len(p6) == 28
    report(7, "mirror identity on all (4,1) and (6,2) pairs", ok7, f"{bad4 + bad6} failures")
    ok8 = Counter(p6) == Counter(HODGE_D6_R2) and all(x in p4 for x in HODGE_D4_R1_MEMBERS)
    report(8, "Hodge pairs of the duals at (6,2) and (4,1)", ok8)
    assert ok7 and ok8


def test_9_normality(report):
    bad = [(d, c.digest) for d in range(1, 6) for c in cached_run(d, 1).results
           if not is_normal(c.polytope)]
    assert report(9, "every classified polytope with d <= 5 is normal", not bad, f"{len(bad)} not normal")


def test_10_properties(report):
    rng = np.random.default_rng(7)
    shapes = [hull([(0, 0, 0), (2, 0, 0), (0, 3, 0), (0, 0, 1), (1, 1, 1)]),
              product(simplex(1), simplex(2)), dilate(simplex(3), 2)]
    canon = all(transform(P, random_unimodular(P.dim, rng), rng.integers(-9, 10, P.dim)).canonical_form()
                == P.canonical_form() for P in shapes for _ in range(100))
    pal = True
    for _ in range(40):
        pts = {tuple(int(x) for x in rng.integers(-2, 3, 3)) for _ in range(6)}
        try:
            P = hull(sorted(pts))
        except ValueError:
            continue
        g = P.gorenstein_index()
        pal &= hstar(P).is_palindromic() == (g is not None)
        pal &= gorenstein_via_symmetry(P) == (g.index if g else None)
    for d in range(1, 6):
        for c in cached_run(d, 1).results:
            h = hstar(c.polytope)
            pal &= h.is_palindromic() and h.codegree == c.index
    dual_ok = True
    for c in cached_run(3, 1).results + cached_run(4, 2).results:
        pair = dual_gorenstein(c.polytope)
        dual_ok &= is_isomorphic(dual_gorenstein(pair.P_dual).P_dual, c.polytope)
        dual_ok &= all(pair.poset.dims[i] + pair.dual_poset.dims[j] == c.dim - 1
                       for i, j in pair.face_match.items())
    red = all(reduction_check(s, bs) for s, bs in [(2, (2,)), (3, (3,)), (4, (2, 2))])
    ok = canon and pal and dual_ok and red
    assert report(10, "canonical form, palindromy, double dual, face dims, reduction", ok,
                  f"canon={canon} palindromic={pal} dual={dual_ok} reduction={red}")


def test_11_triple_product_stretch(report):
    P = triple_product(3)
    pair = dual_gorenstein(P)
    assert (P.dim, pair.index) == (12, 5)
    E = stringy_E(pair)
    E_dual = stringy_E(pair.swapped())
    got = (hodge_table(E, 3).pair, hodge_table(E_dual, 3).pair)
    assert report(11, "S_4^3 Hodge pairs, stretch", got == ((2, 52), (52, 2)), str(got))
