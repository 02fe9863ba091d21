"""Exact arithmetic on finite sets of integers.

Everything here works on :class:`IntSet`, an immutable sorted tuple of Python
ints, so elements may be arbitrarily large (``2**100`` is fine).  Sumsets use a
dense kernel (bitset shifting or FFT convolution of indicator vectors) whenever
the combined span fits in ``window`` bits and the sets are dense enough to make
that worthwhile; otherwise they fall back to pairwise sums, splitting sparse
inputs into dense clusters first.
"""

from __future__ import annotations

import bisect
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import signal

from .errors import PreconditionError

DEFAULT_WINDOW = 1 << 26

# Below this many elements on the smaller side, shift-or on Python ints beats FFT.
_BITSET_MAX_SHIFTS = 64
# A cluster is broken wherever consecutive elements are further apart than this.
_CLUSTER_GAP = 64
_PAIRWISE_LIMIT = 4_000_000


class IntSet:
    """A finite set of integers stored as a strictly increasing tuple."""

    __slots__ = ("_elems", "_lookup")

    def __init__(self, elements: Iterable[int] = ()):
        self._elems = tuple(sorted({int(x) for x in elements}))
        self._lookup = None

    @classmethod
    def from_sorted(cls, elements: Sequence[int]) -> "IntSet":
        """Wrap an already strictly increasing sequence without re-sorting."""
        obj = cls.__new__(cls)
        obj._elems = tuple(int(x) for x in elements)
        obj._lookup = None
        return obj

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IntSet":
        return cls.from_sorted(range(lo, hi + 1))

    @property
    def elements(self) -> tuple:
        return self._elems

    @property
    def min(self) -> int:
        if not self._elems:
            raise PreconditionError("empty IntSet has no minimum")
        return self._elems[0]

    @property
    def max(self) -> int:
        if not self._elems:
            raise PreconditionError("empty IntSet has no maximum")
        return self._elems[-1]

    @property
    def diameter(self) -> int:
        return self.max - self.min

    def __len__(self) -> int:
        return len(self._elems)

    def __iter__(self):
        return iter(self._elems)

    def __getitem__(self, i):
        return self._elems[i]

    def __contains__(self, x) -> bool:
        i = bisect.bisect_left(self._elems, x)
        return i < len(self._elems) and self._elems[i] == x

    def __eq__(self, other) -> bool:
        if isinstance(other, IntSet):
            return self._elems == other._elems
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._elems)

    def __repr__(self) -> str:
        if len(self._elems) > 12:
            head = ", ".join(map(str, self._elems[:5]))
            tail = ", ".join(map(str, self._elems[-3:]))
            return f"IntSet([{head}, ..., {tail}] | n={len(self._elems)})"
        return f"IntSet({list(self._elems)})"

    def as_set(self) -> frozenset:
        if self._lookup is None:
            self._lookup = frozenset(self._elems)
        return self._lookup

    def issubset(self, other: "IntSet") -> bool:
        return self.as_set() <= other.as_set()

    def missing_from(self, other: "IntSet"):
        """First element of ``self`` (in increasing order) not in ``other``, else None."""
        look = other.as_set()
        for x in self._elems:
            if x not in look:
                return x
        return None

    def intersection(self, other: "IntSet") -> "IntSet":
        look = other.as_set()
        return IntSet.from_sorted([x for x in self._elems if x in look])

    def union(self, other: "IntSet") -> "IntSet":
        return IntSet(self.as_set() | other.as_set())

    def shift(self, t: int) -> "IntSet":
        return IntSet.from_sorted([x + t for x in self._elems])

    def dilate(self, v: int) -> "IntSet":
        """The set ``v * A``; a negative ``v`` reverses the order."""
        if v == 0:
            raise PreconditionError("dilation factor must be nonzero")
        if v > 0:
            return IntSet.from_sorted([v * x for x in self._elems])
        return IntSet.from_sorted([v * x for x in reversed(self._elems)])

    def negate(self) -> "IntSet":
        return self.dilate(-1)

    def is_arithmetic_progression(self) -> bool:
        e = self._elems
        if len(e) <= 2:
            return True
        step = e[1] - e[0]
        return all(e[i + 1] - e[i] == step for i in range(len(e) - 1))


class PairRelation:
    """A set of index pairs ``(i, j)`` into an IntSet (0-based)."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[tuple]):
        self.pairs = tuple(sorted({(int(i), int(j)) for i, j in pairs}))

    @classmethod
    def full(cls, n: int) -> "PairRelation":
        return cls((i, j) for i in range(n) for j in range(n))

    @classmethod
    def diagonal(cls, n: int) -> "PairRelation":
        return cls((i, i) for i in range(n))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _require_nonempty(*sets: IntSet) -> None:
    for s in sets:
        if len(s) == 0:
            raise PreconditionError("operation requires non-empty sets")


# --- kernels -------------------------------------------------------------


def _indicator(offsets: Sequence[int], span: int) -> np.ndarray:
    ind = np.zeros(span, dtype=np.uint8)
    ind[np.asarray(offsets, dtype=np.int64)] = 1
    return ind


def _to_bitmask(offsets: Sequence[int], span: int) -> int:
    packed = np.packbits(_indicator(offsets, span), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _from_bitmask(mask: int, span: int) -> np.ndarray:
    nbytes = (span + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:span])


def _dense_sum_offsets(a_off, b_off, span_a: int, span_b: int) -> np.ndarray:
    """Offsets (from min A + min B) of A+B, both sets given as offsets from their minima."""
    span = span_a + span_b - 1
    if min(len(a_off), len(b_off)) <= _BITSET_MAX_SHIFTS:
        if len(a_off) > len(b_off):
            a_off, b_off, span_a, span_b = b_off, a_off, span_b, span_a
        mask_b = _to_bitmask(b_off, span_b)
        acc = 0
        for off in a_off:
            acc |= mask_b << int(off)
        return _from_bitmask(acc, span)
    ind_a = _indicator(a_off, span_a).astype(np.float64)
    ind_b = _indicator(b_off, span_b).astype(np.float64)
    conv = signal.convolve(ind_a, ind_b, method="auto")
    return np.flatnonzero(conv > 0.5)


def _clusters(elems: Sequence[int], gap: int) -> list:
    out = []
    start = 0
    for i in range(1, len(elems)):
        if elems[i] - elems[i - 1] > gap:
            out.append(elems[start:i])
            start = i
    out.append(elems[start:])
    return out


def _sum_elements(a: Sequence[int], b: Sequence[int], window: int, split: bool = True) -> set | list:
    """A+B for non-empty sorted sequences; returns a sorted list or a set of sums."""
    span_a = a[-1] - a[0] + 1
    span_b = b[-1] - b[0] + 1
    span = span_a + span_b - 1
    if span <= window and span <= 32 * len(a) * len(b):
        base = a[0] + b[0]
        offs = _dense_sum_offsets(
            [x - a[0] for x in a], [x - b[0] for x in b], span_a, span_b
        )
        return [base + int(o) for o in offs]
    if len(a) * len(b) <= _PAIRWISE_LIMIT or not split:
        return {x + y for x in a for y in b}
    out: set = set()
    for ca in _clusters(a, _CLUSTER_GAP):
        for cb in _clusters(b, _CLUSTER_GAP):
            out.update(_sum_elements(ca, cb, window, split=False))
    return out


def naive_sumset(A: IntSet, B: IntSet) -> IntSet:
    """Double-loop reference kernel; no fast paths."""
    _require_nonempty(A, B)
    return IntSet({a + b for a in A for b in B})


# --- public operations ---------------------------------------------------


def sumset(A: IntSet, B: IntSet, *, window: int = DEFAULT_WINDOW) -> IntSet:
    """Return A+B."""
    _require_nonempty(A, B)
    res = _sum_elements(A.elements, B.elements, window)
    if isinstance(res, list):
        return IntSet.from_sorted(res)
    return IntSet(res)


def difference_set(A: IntSet, B: IntSet, *, window: int = DEFAULT_WINDOW) -> IntSet:
    """Return A-B."""
    _require_nonempty(A, B)
    return sumset(A, B.negate(), window=window)


def iterated_sumset(A: IntSet, h: int, *, window: int = DEFAULT_WINDOW) -> IntSet:
    """Return hA = {a_1 + ... + a_h}.

    Computed on ``A - min A`` by binary powering, then shifted back by
    ``h * min A`` so intermediate offsets stay small.
    """
    _require_nonempty(A)
    if h < 1:
        raise PreconditionError(f"iterated sumset needs h >= 1, got {h}")
    if h == 1:
        return A
    lo = A.min
    base = A.shift(-lo)
    result = None
    power = base
    n = h
    while n:
        if n & 1:
            result = power if result is None else sumset(result, power, window=window)
        n >>= 1
        if n:
            power = sumset(power, power, window=window)
    return result.shift(h * lo)


def signed_combination(A: IntSet, l: int, m: int, *, window: int = DEFAULT_WINDOW) -> IntSet:
    """Return lA - mA, with 0A taken to be {0}."""
    _require_nonempty(A)
    if l < 0 or m < 0:
        raise PreconditionError("l and m must be non-negative")
    if l + m == 0:
        raise PreconditionError("signed combination needs l + m >= 1")
    zero = IntSet.from_sorted([0])
    pos = iterated_sumset(A, l, window=window) if l else zero
    neg = iterated_sumset(A, m, window=window) if m else zero
    return difference_set(pos, neg, window=window)


def restricted_sumset(A: IntSet, gamma: PairRelation) -> IntSet:
    """Return {A[i] + A[j] : (i, j) in gamma} (0-based indices)."""
    if len(gamma) == 0:
        raise PreconditionError("restricted sumset needs a non-empty relation")
    n = len(A)
    for i, j in gamma:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"pair ({i}, {j}) out of range for a set of size {n}")
    e = A.elements
    return IntSet(e[i] + e[j] for i, j in gamma)


def doubling(A: IntSet, mode: str = "plus") -> Fraction:
    """|A+A|/|A| (``mode="plus"``) or |A-A|/|A| (``mode="minus"``), exact."""
    _require_nonempty(A)
    if mode == "plus":
        num = len(sumset(A, A))
    elif mode == "minus":
        num = len(difference_set(A, A))
    else:
        raise ValueError(f"mode must be 'plus' or 'minus', not {mode!r}")
    return Fraction(num, len(A))


def representation_counts(A: IntSet, B: IntSet | None = None) -> dict:
    """Map s -> #{(a, b) in A x B : a + b = s}."""
    B = A if B is None else B
    _require_nonempty(A, B)
    span = A.diameter + B.diameter + 1
    if span <= DEFAULT_WINDOW and span <= 32 * len(A) * len(B):
        ind_a = _indicator([x - A.min for x in A], A.diameter + 1)
        ind_b = _indicator([x - B.min for x in B], B.diameter + 1)
        if span <= 4096:
            counts = np.convolve(ind_a.astype(np.int64), ind_b.astype(np.int64))
        else:
            conv = signal.fftconvolve(ind_a.astype(np.float64), ind_b.astype(np.float64))
            counts = np.rint(conv).astype(np.int64)
        base = A.min + B.min
        nz = np.flatnonzero(counts)
        return {base + int(i): int(counts[i]) for i in nz}
    return dict(Counter(a + b for a in A for b in B))


def additive_energy(A: IntSet) -> int:
    """Number of quadruples (a1, a2, a3, a4) in A^4 with a1 + a2 = a3 + a4."""
    _require_nonempty(A)
    return sum(r * r for r in representation_counts(A).values())
