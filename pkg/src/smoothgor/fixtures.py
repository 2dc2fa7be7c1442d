"""Reference values used to check classification and Hodge-number runs.

Each fixture carries a short anchor string so a mismatch report says which
reference table disagreed.
"""
from __future__ import annotations

from dataclasses import dataclass

# Number of smooth Gorenstein polytopes by dimension d and index r.  Cells
# that are unknown are absent here (not computed, not zero).
TABLE = {
    20: {13: 0, 12: 0, 11: 1, 10: 2, 9: 5, 8: 11},
    19: {13: 0, 12: 0, 11: 0, 10: 2, 9: 3, 8: 7},
    18: {13: 0, 12: 0, 11: 0, 10: 1, 9: 2, 8: 5},
    17: {13: 0, 12: 0, 11: 0, 10: 0, 9: 2, 8: 3, 7: 7},
    16: {13: 0, 12: 0, 11: 0, 10: 0, 9: 1, 8: 2, 7: 5},
    15: {13: 0, 12: 0, 11: 0, 10: 0, 9: 0, 8: 2, 7: 3},
    14: {13: 0, 12: 0, 11: 0, 10: 0, 9: 0, 8: 1, 7: 2, 6: 5},
    13: {13: 0, 12: 0, 11: 0, 10: 0, 9: 0, 8: 0, 7: 2, 6: 3},
    12: {13: 1, 12: 0, 11: 0, 10: 0, 9: 0, 8: 0, 7: 1, 6: 2, 5: 6},
    11: {12: 1, 11: 0, 10: 0, 9: 0, 8: 0, 7: 0, 6: 2, 5: 3, 4: 14},
    10: {11: 1, 10: 0, 9: 0, 8: 0, 7: 0, 6: 1, 5: 2, 4: 6, 3: 64},
    9: {10: 1, 9: 0, 8: 0, 7: 0, 6: 0, 5: 2, 4: 4, 3: 23, 2: 896, 1: 8229721},
    8: {9: 1, 8: 0, 7: 0, 6: 0, 5: 1, 4: 2, 3: 13, 2: 258, 1: 749892},
    7: {8: 1, 7: 0, 6: 0, 5: 0, 4: 2, 3: 4, 2: 85, 1: 72256},
    6: {7: 1, 6: 0, 5: 0, 4: 1, 3: 3, 2: 28, 1: 7622},
    5: {6: 1, 5: 0, 4: 0, 3: 2, 2: 12, 1: 866},
    4: {5: 1, 4: 0, 3: 1, 2: 4, 1: 124},
    3: {4: 1, 3: 0, 2: 3, 1: 18},
    2: {3: 1, 2: 1, 1: 5},
    1: {2: 1, 1: 1},
    0: {1: 1},
}
TABLE_ANCHOR = "smooth Gorenstein count by (d, r)"

# Toric Fano d-folds by index i_X (only the entries that are known).
FANO_INDEX = {
    2: {3: 1, 2: 1, 1: 3},
    3: {4: 1, 2: 2, 1: 15},
    4: {5: 1, 3: 1, 2: 4, 1: 118},
    5: {6: 1, 3: 1, 2: 11, 1: 853},
    6: {7: 1, 4: 1, 3: 3, 2: 27, 1: 7590},
    7: {8: 1, 4: 1, 3: 4, 2: 83},
    8: {9: 1, 5: 1, 4: 2, 3: 12},
}
FANO_ANCHOR = "toric Fano manifolds by index"

# (h11, h12) of the duals of the index-2 smooth Gorenstein 6-polytopes.
HODGE_D6_R2 = (
    (101, 1), (86, 2), (78, 2), (77, 2), (83, 2), (77, 2), (63, 3), (59, 2), (85, 1),
    (76, 2), (70, 2), (58, 2), (59, 3), (62, 2), (73, 1), (60, 3), (56, 3), (58, 3),
    (50, 4), (51, 3), (62, 2), (62, 2), (45, 5), (55, 3), (66, 2), (89, 1), (73, 1),
    (69, 1),
)
# pairs that must occur among the duals of smooth reflexive 4-polytopes
HODGE_D4_R1_MEMBERS = ((101, 1), (122, 2))
# S_4^3, d = 12, r = 5
HODGE_D12_R5 = ((101, 1), (89, 1), (73, 1), (65, 1), (52, 2))
HODGE_ANCHOR = "stringy Hodge pairs of the duals"


@dataclass(frozen=True)
class Check:
    label: str
    expected: int
    actual: int
    anchor: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        flag = "OK" if self.ok else "FAIL"
        return f"{self.label}: {self.actual} (expected {self.expected}, {self.anchor}) {flag}"


def table_checks(d: int, counts: dict, indices=None):
    """Compare per-index counts of a run with the table, for cells that exist."""
    row = TABLE.get(d, {})
    out = []
    for r in sorted(row):
        if indices is not None and r not in indices:
            continue
        out.append(Check(f"d={d} r={r}", row[r], counts.get(r, 0), TABLE_ANCHOR))
    return out


def fano_checks(d: int, hist: dict):
    row = FANO_INDEX.get(d, {})
    return [Check(f"d={d} i_X={i}", row[i], hist.get(i, 0), FANO_ANCHOR) for i in sorted(row)]
