"""Affine normalization and Freiman k-isomorphism checks."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Optional, Sequence

from .core_sets import IntSet
from .errors import PreconditionError, ResourceError

DEFAULT_BUDGET = 10 ** 8


@dataclass(frozen=True)
class AffineMap:
    """x -> (x - u) / v forward, y -> u + v*y backward."""

    u: int
    v: int

    def __post_init__(self):
        if self.v == 0:
            raise PreconditionError("affine dilation must be nonzero")

    def forward(self, x: int) -> int:
        q, r = divmod(x - self.u, self.v)
        if r:
            raise PreconditionError(f"{x} is not in the domain of {self}")
        return q

    def inverse(self, y: int) -> int:
        return self.u + self.v * y

    def apply(self, X: IntSet) -> IntSet:
        return IntSet(self.forward(x) for x in X)

    def unapply(self, Y: IntSet) -> IntSet:
        return IntSet(self.inverse(y) for y in Y)


def normalize_affine(X: IntSet) -> tuple:
    """Return (Y, map) with Y = (X - min X)/g, g the gcd of the differences.

    Y contains 0, has gcd 1 and max (max X - min X)/g.  A singleton maps to
    {0} with v = 1.
    """
    if len(X) == 0:
        raise PreconditionError("cannot normalize an empty set")
    lo = X.min
    g = 0
    for x in X:
        g = gcd(g, x - lo)
    amap = AffineMap(lo, g or 1)
    return IntSet.from_sorted([(x - lo) // amap.v for x in X]), amap


@dataclass(frozen=True)
class FreimanResult:
    holds: bool
    witness_indices: Optional[tuple] = None
    witness: Optional[tuple] = None  # the 2k elements of A at witness_indices
    image: Optional[tuple] = None  # their images in B

    def __bool__(self) -> bool:
        return self.holds


def _check_bijection(phi: Sequence[int], n: int) -> None:
    if len(phi) != n or sorted(phi) != list(range(n)):
        raise PreconditionError("phi must be a permutation of range(len(A))")


def verify_freiman_isomorphism(A: IntSet, B: IntSet, phi: Sequence[int], k: int,
                               budget: int = DEFAULT_BUDGET) -> FreimanResult:
    """Check that A[i] -> B[phi[i]] preserves equality of k-fold sums both ways.

    Returns the lexicographically first violating index tuple
    (i_1..i_k, j_1..j_k) where the A-sums and B-sums disagree about equality.
    """
    n = len(A)
    if n != len(B):
        raise PreconditionError(f"|A| = {n} but |B| = {len(B)}")
    if k < 1:
        raise PreconditionError("order k must be at least 1")
    _check_bijection(phi, n)
    if n ** (2 * k) > budget:
        raise ResourceError(f"{n}^{2 * k} tuples exceed the budget of {budget}")
    a = A.elements
    b = [B.elements[phi[i]] for i in range(n)]

    tuples = list(product(range(n), repeat=k))
    keys = [(sum(a[i] for i in t), sum(b[i] for i in t)) for t in tuples]

    # For each A-sum: the first tuple overall, and the first whose B-sum differs from it.
    by_a: dict = {}
    by_b: dict = {}
    for idx, (sa, sb) in enumerate(keys):
        for table, own, other in ((by_a, sa, sb), (by_b, sb, sa)):
            slot = table.get(own)
            if slot is None:
                table[own] = [idx, other, None]
            elif slot[2] is None and other != slot[1]:
                slot[2] = idx

    def first_mismatch(table, own, other):
        first, first_other, alt = table[own]
        return first if first_other != other else alt

    for s_idx, (sa, sb) in enumerate(keys):
        cands = [c for c in (first_mismatch(by_a, sa, sb), first_mismatch(by_b, sb, sa)) if c is not None]
        if cands:
            t = tuples[min(cands)]
            s = tuples[s_idx]
            ids = s + t
            return FreimanResult(False, ids, tuple(a[i] for i in ids), tuple(b[i] for i in ids))
    return FreimanResult(True)


def naive_freiman_check(A: IntSet, B: IntSet, phi: Sequence[int], k: int) -> FreimanResult:
    """Direct scan over all 2k-tuples in lexicographic order."""
    n = len(A)
    a = A.elements
    b = [B.elements[phi[i]] for i in range(n)]
    for ids in product(range(n), repeat=2 * k):
        left, right = ids[:k], ids[k:]
        eq_a = sum(a[i] for i in left) == sum(a[i] for i in right)
        eq_b = sum(b[i] for i in left) == sum(b[i] for i in right)
        if eq_a != eq_b:
            return FreimanResult(False, ids, tuple(a[i] for i in ids), tuple(b[i] for i in ids))
    return FreimanResult(True)


def compose(phi: Sequence[int], psi: Sequence[int]) -> list:
    """Index map of psi after phi."""
    return [psi[phi[i]] for i in range(len(phi))]


def order_preserving(n: int) -> list:
    return list(range(n))
