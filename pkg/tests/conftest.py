import numpy as np
import pytest

from smoothgor.classify import classify
from smoothgor.polytope import LatticePolytope


def random_unimodular(d: int, rng: np.random.Generator, steps: int = 12):
    """Product of random elementary matrices and a signed permutation."""
    U = np.eye(d, dtype=object)
    for _ in range(steps):
        i, j = rng.choice(d, 2, replace=False) if d > 1 else (0, 0)
        if i != j:
            E = np.eye(d, dtype=object)
            E[i, j] = int(rng.integers(-2, 3))
            U = U @ E
    perm = rng.permutation(d)
    signs = rng.choice([-1, 1], d)
    P = np.zeros((d, d), dtype=object)
    for a, b in enumerate(perm):
        P[a, b] = int(signs[a])
    return U @ P


def transform(P: LatticePolytope, U, t) -> LatticePolytope:
    verts = [tuple(int(x) for x in np.array(v, dtype=object) @ U.T + np.array(t, dtype=object))
             for v in P.vertices]
    return LatticePolytope(verts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# classification runs are shared across test files
_RUNS = {}


def cached_run(d: int, r_min: int, r_max=None):
    key = (d, r_min, r_max)
    if key not in _RUNS:
        _RUNS[key] = classify(d, r_min, r_max=r_max, threads=1)
    return _RUNS[key]
