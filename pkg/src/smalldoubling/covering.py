"""Interval extraction from iterated sumsets and the lX - mX covering checks.

Each cover routine computes the signed combination and reports whether the
target progression lies inside it, returning the smallest missing element
when it does not.  Preconditions are enforced with ``strict=True`` (default);
``strict=False`` skips them so sharpness examples can be run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .core_sets import IntSet, iterated_sumset, signed_combination
from .errors import PreconditionError
from .progressions import GAP2, Progression1D, is_proper, smallest_containing_ap


@dataclass(frozen=True)
class LevParams:
    l: int
    cardX: int
    k: int
    r: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.l - 1, self.cardX - 2)

    def even_interval(self) -> tuple:
        k, l, r = self.k, self.l, self.r
        return (k * l - k * r, k * l + k * r)

    def odd_interval(self) -> tuple:
        k, l, r = self.k, self.l, self.r
        return (k * l - k * r, (k + 1) * l + k * r)


def _check_lev_input(X: IntSet) -> int:
    if len(X) < 3:
        raise PreconditionError("interval extraction needs |X| >= 3")
    if X.min != 0:
        raise PreconditionError("X must contain 0 as its minimum")
    g = 0
    for x in X:
        g = gcd(g, x)
    if g != 1:
        raise PreconditionError(f"X must have gcd 1, got {g}")
    return X.max


def lev_parameters(X: IntSet, k: Optional[int] = None) -> LevParams:
    """k and r for X ⊆ {0..l} with 0, l in X and gcd 1.

    By default k = floor((l-1)/(|X|-2)).  At an integer ratio t the bracketing
    also admits k = t - 1, which may be requested explicitly.
    """
    l = _check_lev_input(X)
    n = len(X)
    t = Fraction(l - 1, n - 2)
    if k is None:
        k = t.numerator // t.denominator
    if k < 1 or not (k <= t <= k + 1):
        raise PreconditionError(f"k = {k} does not bracket (l-1)/(|X|-2) = {t}")
    return LevParams(l=l, cardX=n, k=k, r=(k + 1) * (n - 2) - (l - 2))


def admissible_ks(X: IntSet) -> list:
    """Every k >= 1 with k <= (l-1)/(|X|-2) <= k+1."""
    p = lev_parameters(X)
    ks = [p.k]
    if p.ratio.denominator == 1 and p.k - 1 >= 1:
        ks.insert(0, p.k - 1)
    return ks


@dataclass(frozen=True)
class LevReport:
    params: LevParams
    contains_even: bool
    contains_odd: bool
    missing_even: Optional[int] = None
    missing_odd: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.contains_even and self.contains_odd


def _first_missing(lo: int, hi: int, S: IntSet) -> Optional[int]:
    look = S.as_set()
    for x in range(lo, hi + 1):
        if x not in look:
            return x
    return None


def lev_verify(X: IntSet, k: Optional[int] = None) -> LevReport:
    """Check 2kX ⊇ [kl-kr, kl+kr] and (2k+1)X ⊇ [kl-kr, (k+1)l+kr]."""
    p = lev_parameters(X, k)
    even = iterated_sumset(X, 2 * p.k)
    odd = iterated_sumset(X, 2 * p.k + 1)
    me = _first_missing(*p.even_interval(), even)
    mo = _first_missing(*p.odd_interval(), odd)
    return LevReport(p, me is None, mo is None, me, mo)


@dataclass(frozen=True)
class CoverResult:
    holds: bool
    witness: Optional[int]
    target_size: int
    combination_size: int
    strict: bool

    def __bool__(self) -> bool:
        return self.holds


def _cover(X: IntSet, target: IntSet, l: int, m: int, strict: bool) -> CoverResult:
    combo = signed_combination(X, l, m)
    missing = target.missing_from(combo)
    return CoverResult(missing is None, missing, len(target), len(combo), strict)


def cover_5_4(X: IntSet, P: Progression1D, strict: bool = True) -> CoverResult:
    """Does 5X - 4X contain P?  Needs X ⊆ P, |P| >= 12, |X| > |P|/2."""
    if len(X) == 0:
        raise PreconditionError("X must be non-empty")
    target = P.elements()
    if strict:
        if not X.issubset(target):
            raise PreconditionError("X is not contained in P")
        if P.L < 12:
            raise PreconditionError(f"|P| = {P.L} < 12")
        if 2 * len(X) <= P.L:
            raise PreconditionError(f"density {len(X)}/{P.L} is not above 1/2")
    return _cover(X, target, 5, 4, strict)


def cover_9_8(X: IntSet, strict: bool = True) -> CoverResult:
    """Does 9X - 8X contain the smallest AP containing X?  Needs |X| >= 100, density > 2/5."""
    if len(X) == 0:
        raise PreconditionError("X must be non-empty")
    P = smallest_containing_ap(X)
    if strict:
        if len(X) < 100:
            raise PreconditionError(f"|X| = {len(X)} < 100")
        if 5 * len(X) <= 2 * P.L:
            raise PreconditionError(f"density {len(X)}/{P.L} is not above 2/5")
    return _cover(X, P.elements(), 9, 8, strict)


def cover_41_40(X: IntSet, Q: GAP2, strict: bool = True) -> CoverResult:
    """Does 41X - 40X contain the proper GAP Q?  Needs X ⊆ Q, |X| >= 100, |X| > 9|Q|/10."""
    if len(X) == 0:
        raise PreconditionError("X must be non-empty")
    if strict:
        if not is_proper(Q):
            raise PreconditionError("Q is not proper")
        target = Q.elements()
        if not X.issubset(target):
            raise PreconditionError("X is not contained in Q")
        if len(X) < 100:
            raise PreconditionError(f"|X| = {len(X)} < 100")
        if 10 * len(X) <= 9 * len(target):
            raise PreconditionError(f"|X| = {len(X)} is not above 9|Q|/10 = {Fraction(9 * len(target), 10)}")
    else:
        target = Q.elements()
    return _cover(X, target, 41, 40, strict)
