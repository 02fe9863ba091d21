"""Normalized l2 and U2 norms of real functions on [N] = {1, ..., N}.

The U2 norm is computed two ways: from representation sums
r_f(s) = sum_a f(a) f(s - a), and from the discrete Fourier transform after
embedding [N] in Z/pZ for a prime p in [200N, 400N).  Since p > 2N no sum
wraps around, so the two agree up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionError, ResourceError
from .progressions import Progression1D

DIRECT_GUARD = 4096


class GridFunction:
    """Real values f(1), ..., f(N), each in [-2, 2]."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence[float]):
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise PreconditionError("a grid function needs N >= 1")
        if not np.all(np.isfinite(arr)):
            raise PreconditionError("values must be finite")
        if np.any(np.abs(arr) > 2):
            raise PreconditionError("values must lie in [-2, 2]")
        arr.setflags(write=False)
        self.values = arr

    @property
    def N(self) -> int:
        return int(self.values.size)

    def __call__(self, n: int) -> float:
        return float(self.values[n - 1])

    def __repr__(self) -> str:
        return f"GridFunction(N={self.N})"


def quadruple_count(N: int) -> int:
    """#{(a, b, c, d) in [N]^4 : a + d = b + c} = (2N^3 + N)/3."""
    if N < 1:
        raise PreconditionError("N must be positive")
    return (2 * N ** 3 + N) // 3


def l2_norm(f: GridFunction) -> float:
    return float(np.sqrt(np.mean(f.values ** 2)))


def u2_norm_direct(f: GridFunction) -> float:
    if f.N > DIRECT_GUARD:
        raise ResourceError(f"N = {f.N} exceeds the direct-path guard {DIRECT_GUARD}")
    r = np.convolve(f.values, f.values)
    total = float(np.dot(r, r))
    return (max(total, 0.0) / quadruple_count(f.N)) ** 0.25


def primes_between(lo: int, hi: int) -> list:
    """Primes p with lo <= p < hi by a sieve of Eratosthenes."""
    lo = max(lo, 2)
    if hi <= lo:
        return []
    root = int(np.sqrt(hi)) + 1
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for i in range(2, int(root ** 0.5) + 1):
        if small[i]:
            small[i * i::i] = False
    seg = np.ones(hi - lo, dtype=bool)
    for p in np.flatnonzero(small):
        p = int(p)
        start = max(p * p, -(-lo // p) * p)
        seg[start - lo::p] = False
    return [int(x) for x in np.flatnonzero(seg) + lo]


def embedding_prime(N: int) -> int:
    """Least prime in [200N, 400N)."""
    ps = primes_between(200 * N, 400 * N)
    if not ps:
        raise AssertionError(f"no prime in [{200 * N}, {400 * N})")
    return ps[0]


def u2_norm_fourier(f: GridFunction) -> float:
    p = embedding_prime(f.N)
    padded = np.zeros(p)
    padded[: f.N] = f.values
    fhat = np.fft.fft(padded) / p
    total = float(np.sum(np.abs(fhat) ** 4)) * p ** 3
    return (max(total, 0.0) / quadruple_count(f.N)) ** 0.25


def u2_norm(f: GridFunction) -> float:
    return u2_norm_direct(f) if f.N <= DIRECT_GUARD else u2_norm_fourier(f)


@dataclass(frozen=True)
class MeanBoundReport:
    lhs: float
    rhs: float
    ratio: float


def progression_mean_bound_check(f: GridFunction, P: Progression1D, eta: float) -> MeanBoundReport:
    """|mean of f over P| against eta^-1 * ||f||_U2."""
    if eta <= 0:
        raise PreconditionError("eta must be positive")
    if P.first < 1 or P.last > f.N:
        raise PreconditionError("P must lie inside [N]")
    if P.L < eta * f.N:
        raise PreconditionError(f"|P| = {P.L} is below eta*N = {eta * f.N}")
    idx = np.arange(P.first - 1, P.last, P.v)
    lhs = abs(float(np.mean(f.values[idx])))
    rhs = u2_norm(f) / eta
    if rhs == 0:
        ratio = 0.0 if lhs == 0 else float("inf")
    else:
        ratio = lhs / rhs
    return MeanBoundReport(lhs, rhs, ratio)
