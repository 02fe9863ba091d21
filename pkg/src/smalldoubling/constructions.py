"""Named example sets and seeded random families."""

from __future__ import annotations

import numpy as np

from .core_sets import IntSet
from .progressions import GAP2


def interval(N: int) -> IntSet:
    """[N] = {1, ..., N}."""
    return IntSet.interval(1, N)


def a1_set(N: int) -> IntSet:
    """{0, 10N, 2^N} + [N]: three far-apart intervals with doubling just under 4."""
    return IntSet(b + i for b in (0, 10 * N, 2 ** N) for i in range(1, N + 1))


def evens(l: int) -> IntSet:
    """2*[l] = {2, 4, ..., 2l}."""
    return IntSet.from_sorted(range(2, 2 * l + 1, 2))


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_subset(rng: np.random.Generator, universe, size: int) -> IntSet:
    pool = list(universe)
    idx = rng.choice(len(pool), size=size, replace=False)
    return IntSet(pool[int(i)] for i in idx)


def gap_subset(seed: int, frac: float = 0.95, L1: int = 12, L2: int = 12,
               a1: int = 1, a2: int = 1000, a0: int = 0) -> tuple:
    """A seeded subset keeping round(frac*L1*L2) points of a proper GAP2; returns (A, Q)."""
    Q = GAP2(a0, a1, a2, L1, L2)
    E = Q.elements()
    keep = round(frac * len(E))
    return random_subset(rng_for(seed), E.elements, keep), Q


def random_sparse(seed: int, count: int = 300, hi: int = 10 ** 9) -> IntSet:
    """``count`` distinct seeded integers drawn uniformly from [1, hi]."""
    rng = rng_for(seed)
    out: set = set()
    while len(out) < count:
        out.update(int(x) for x in rng.integers(1, hi + 1, size=count - len(out)))
    return IntSet(out)


def random_dense_subset(seed: int, N: int, p: float) -> IntSet:
    """Each element of [N] kept independently with probability p."""
    rng = rng_for(seed)
    keep = rng.random(N) < p
    return IntSet.from_sorted((np.flatnonzero(keep) + 1).tolist())
