"""One- and two-dimensional arithmetic progressions.

Indices run over ``1 <= l <= L``, so ``Progression1D(a0=3, v=4, L=3)`` is
``{7, 11, 15}``.  A GAP2 is ``{a0 + l1*a1 + l2*a2}`` over the same index box;
it need not be proper, and :func:`is_proper` says whether it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

import numpy as np

from .core_sets import IntSet
from .errors import PreconditionError

_SCAN_LIMIT = 1 << 20


@dataclass(frozen=True)
class Progression1D:
    a0: int
    v: int
    L: int

    def __post_init__(self):
        if self.v < 1:
            raise PreconditionError(f"step must be positive, got {self.v}")
        if self.L < 1:
            raise PreconditionError(f"length must be positive, got {self.L}")

    @classmethod
    def normalized(cls, a0: int, v: int, L: int) -> "Progression1D":
        """Build from a possibly negative step, reversing the index order if needed."""
        if v == 0:
            raise PreconditionError("step must be nonzero")
        if v < 0:
            return cls(a0 + (L + 1) * v, -v, L)
        return cls(a0, v, L)

    @classmethod
    def symmetric(cls, x: int, L: int) -> "Progression1D":
        """The set {l*x : |l| <= L}."""
        step = abs(x)
        if step == 0:
            raise PreconditionError("symmetric progression needs a nonzero generator")
        return cls(-(L + 1) * step, step, 2 * L + 1)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Progression1D":
        return cls(lo - 1, 1, hi - lo + 1)

    @property
    def first(self) -> int:
        return self.a0 + self.v

    @property
    def last(self) -> int:
        return self.a0 + self.L * self.v

    @property
    def size(self) -> int:
        return self.L

    def __contains__(self, x: int) -> bool:
        q, rem = divmod(x - self.a0, self.v)
        return rem == 0 and 1 <= q <= self.L

    def elements(self) -> IntSet:
        return IntSet.from_sorted(range(self.first, self.last + 1, self.v))

    def shift(self, t: int) -> "Progression1D":
        return Progression1D(self.a0 + t, self.v, self.L)


@dataclass(frozen=True)
class GAP2:
    a0: int
    a1: int
    a2: int
    L1: int
    L2: int

    def __post_init__(self):
        if self.L1 < 1 or self.L2 < 1:
            raise PreconditionError("GAP2 lengths must be positive")

    @classmethod
    def symmetric(cls, x1: int, x2: int, L1: int, L2: int) -> "GAP2":
        """The set {l1*x1 + l2*x2 : |l1| <= L1, |l2| <= L2}."""
        return cls(-(L1 + 1) * x1 - (L2 + 1) * x2, x1, x2, 2 * L1 + 1, 2 * L2 + 1)

    @property
    def box_size(self) -> int:
        return self.L1 * self.L2

    @property
    def size(self) -> int:
        return len(self.elements())

    def value(self, l1: int, l2: int) -> int:
        return self.a0 + l1 * self.a1 + l2 * self.a2

    def elements(self) -> IntSet:
        lo = min(self.value(1, 1), self.value(self.L1, 1), self.value(1, self.L2), self.value(self.L1, self.L2))
        hi = max(self.value(1, 1), self.value(self.L1, 1), self.value(1, self.L2), self.value(self.L1, self.L2))
        if -(1 << 62) < lo and hi < (1 << 62):
            l1 = np.arange(1, self.L1 + 1, dtype=np.int64)
            l2 = np.arange(1, self.L2 + 1, dtype=np.int64)
            grid = self.a0 + l1[:, None] * self.a1 + l2[None, :] * self.a2
            return IntSet.from_sorted(np.unique(grid).tolist())
        return IntSet(
            self.value(i, j) for i in range(1, self.L1 + 1) for j in range(1, self.L2 + 1)
        )

    def shift(self, t: int) -> "GAP2":
        return GAP2(self.a0 + t, self.a1, self.a2, self.L1, self.L2)


Progression = Union[Progression1D, GAP2]


def elements(P: Progression) -> IntSet:
    """Materialize a progression as an IntSet."""
    return P.elements()


@dataclass(frozen=True)
class ProperResult:
    proper: bool
    witness: Optional[tuple] = None  # ((l1, l2), (l1', l2')) with equal values

    def __bool__(self) -> bool:
        return self.proper


def _collision_step(Q: GAP2):
    """A nonzero (d1, d2) with |d1| < L1, |d2| < L2 and d1*a1 + d2*a2 = 0, or None."""
    a1, a2, L1, L2 = Q.a1, Q.a2, Q.L1, Q.L2
    if a1 == 0 and a2 == 0:
        if L1 > 1:
            return (1, 0)
        if L2 > 1:
            return (0, 1)
        return None
    if a1 == 0:
        return (1, 0) if L1 > 1 else None
    if a2 == 0:
        return (0, 1) if L2 > 1 else None
    g = gcd(abs(a1), abs(a2))
    d1, d2 = abs(a2) // g, abs(a1) // g
    if d1 < L1 and d2 < L2:
        # d1*a1 + d2*a2 = 0 needs opposite signs on the second coordinate when a1, a2 agree.
        return (d1, -d2) if (a1 > 0) == (a2 > 0) else (d1, d2)
    return None


def is_proper(Q: GAP2) -> ProperResult:
    """Whether all L1*L2 index pairs give distinct values.

    On failure the witness is the first repeated value met when scanning
    (l1, l2) with l1 outermost, paired with its earlier occurrence.  Very large
    boxes use an arithmetic witness instead of a scan.
    """
    step = _collision_step(Q)
    if step is None:
        return ProperResult(True)
    if Q.box_size <= _SCAN_LIMIT:
        seen = {}
        for l1 in range(1, Q.L1 + 1):
            for l2 in range(1, Q.L2 + 1):
                val = Q.value(l1, l2)
                if val in seen:
                    return ProperResult(False, (seen[val], (l1, l2)))
                seen[val] = (l1, l2)
        raise AssertionError("collision predicted but not found")
    d1, d2 = step
    l2 = 1 if d2 >= 0 else 1 - d2
    return ProperResult(False, ((1, l2), (1 + d1, l2 + d2)))


def smallest_containing_ap(X: IntSet) -> Progression1D:
    """The AP with fewest elements containing X: base min X, step the gcd of the offsets."""
    if len(X) == 0:
        raise PreconditionError("smallest_containing_ap needs a non-empty set")
    lo = X.min
    g = 0
    for x in X:
        g = gcd(g, x - lo)
    if g == 0:
        g = 1
    return Progression1D(lo - g, g, (X.max - lo) // g + 1)


def intersection_count(A: IntSet, P: Progression) -> int:
    if isinstance(P, Progression1D):
        return sum(1 for x in A if x in P)
    return len(A.intersection(P.elements()))


def density_on(A: IntSet, P: Progression) -> Fraction:
    """|A ∩ P| / |P| using the materialized size of P."""
    if isinstance(P, Progression1D):
        return Fraction(intersection_count(A, P), P.L)
    E = P.elements()
    return Fraction(len(A.intersection(E)), len(E))
