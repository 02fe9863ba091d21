"""Functions on the discretized torus (Z_m)^d for d = 1, 2.

Grid point j stands for j/m.  Measures are counting measure divided by m^d,
and convolutions are normalized the same way:

    (f * g)(x) = m^-d sum_y f(y) g(x - y)
    (f o g)(x) = m^-d sum_y f(y) g(y - x)      (cross-correlation)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Sequence

import numpy as np

from .bohr_gap import certify_irrational, IrrationalityResult
from .errors import PreconditionError
from .progressions import Progression1D

MAX_SIDE = {1: 4096, 2: 512}
_FLOAT_SLACK = 1e-12


class TorusGrid:
    """Values in [0, 1] on (Z_m)^d, stored as an array of shape (m,) or (m, m)."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim not in (1, 2):
            raise PreconditionError("torus grids have dimension 1 or 2")
        if arr.ndim == 2 and arr.shape[0] != arr.shape[1]:
            raise PreconditionError("a 2-dimensional grid must be square")
        m = arr.shape[0]
        if m < 1 or m > MAX_SIDE[arr.ndim]:
            raise PreconditionError(f"grid side {m} outside 1..{MAX_SIDE[arr.ndim]}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 1:
            raise PreconditionError("grid values must lie in [0, 1]")
        arr.setflags(write=False)
        self.values = arr

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def npoints(self) -> int:
        return self.values.size

    def is_indicator(self) -> bool:
        return bool(np.all((self.values == 0) | (self.values == 1)))

    def measure(self) -> Fraction:
        """Exact measure of a 0/1 grid."""
        if not self.is_indicator():
            raise PreconditionError("measure is defined for 0/1 grids")
        return Fraction(int(self.values.sum()), self.npoints)

    def integral(self) -> float:
        return float(self.values.mean())

    def __repr__(self) -> str:
        return f"TorusGrid(d={self.d}, m={self.m})"


def from_mask(mask) -> TorusGrid:
    return TorusGrid(np.asarray(mask, dtype=np.float64))


def arc_mask(m: int, start: int, length: int) -> np.ndarray:
    """Indicator of the grid arc {start, ..., start+length-1} mod m."""
    mask = np.zeros(m, dtype=bool)
    if length >= m:
        mask[:] = True
    elif length > 0:
        mask[(start + np.arange(length)) % m] = True
    return mask


def _check_pair(f: TorusGrid, g: TorusGrid) -> None:
    if f.values.shape != g.values.shape:
        raise PreconditionError(f"shape mismatch: {f.values.shape} vs {g.values.shape}")


def _fftn(a):
    return np.fft.fftn(a)


def _clip(a: np.ndarray) -> np.ndarray:
    return np.clip(a, 0.0, 1.0)


def convolve(f: TorusGrid, g: TorusGrid) -> TorusGrid:
    _check_pair(f, g)
    out = np.fft.ifftn(_fftn(f.values) * _fftn(g.values)).real / f.npoints
    return TorusGrid(_clip(out))


def correlate(f: TorusGrid, g: TorusGrid) -> TorusGrid:
    _check_pair(f, g)
    out = np.fft.ifftn(_fftn(f.values) * np.conj(_fftn(g.values))).real / f.npoints
    return TorusGrid(_clip(out))


def direct_convolve(f: TorusGrid, g: TorusGrid, cross: bool = False) -> np.ndarray:
    """Reference double loop over y; O(m^2d)."""
    _check_pair(f, g)
    fv, gv = f.values, g.values
    axes = tuple(range(fv.ndim))
    if cross:
        # g(y - x) = gr(x - y) with gr(z) = g(-z)
        gv = np.roll(np.flip(gv), 1, axis=axes)
    out = np.zeros_like(fv)
    for y in np.ndindex(fv.shape):
        if fv[y] != 0:
            out += fv[y] * np.roll(gv, y, axis=axes)
    return out / fv.size


def superlevel_measure(f: TorusGrid, t: float) -> Fraction:
    """Fraction of grid points with value >= t (FFT rounding tolerated at 1e-12)."""
    return Fraction(int(np.count_nonzero(f.values >= t - _FLOAT_SLACK)), f.npoints)


@dataclass(frozen=True)
class KneserReport:
    measure: Fraction
    bound: Fraction
    deficiency: Fraction
    lam: float
    mu1: Fraction
    mu2: Fraction


def kneser_deficiency(S1: TorusGrid, S2: TorusGrid, lam: float) -> KneserReport:
    """mu{1_S1 * 1_S2 >= lam} - min(1, mu(S1) + mu(S2)), exactly."""
    _check_pair(S1, S2)
    mu1, mu2 = S1.measure(), S2.measure()
    lam_q = Fraction(lam)
    if not 0 < lam_q < min(mu1 ** 2, mu2 ** 2):
        raise PreconditionError(f"lambda = {lam} must lie in (0, min(mu1^2, mu2^2))")
    counts = np.rint(np.fft.ifftn(_fftn(S1.values) * _fftn(S2.values)).real).astype(np.int64)
    need = ceil(lam_q * S1.npoints)
    measure = Fraction(int(np.count_nonzero(counts >= need)), S1.npoints)
    bound = min(Fraction(1), mu1 + mu2)
    return KneserReport(measure, bound, measure - bound, float(lam), mu1, mu2)


@dataclass(frozen=True)
class LevelSets:
    K: np.ndarray
    S: np.ndarray
    T: np.ndarray

    def measures(self) -> tuple:
        n = self.K.size
        return tuple(Fraction(int(x.sum()), n) for x in (self.K, self.S, self.T))


def level_sets(F: TorusGrid, eta: float, c: float) -> LevelSets:
    """K = {F >= eta/2}, S = {F >= eta}, T = {F >= 1 - eta^c}."""
    if not 0 < eta < 1 or c <= 0:
        raise PreconditionError("need 0 < eta < 1 and c > 0")
    top = 1 - eta ** c
    if top < eta:
        raise PreconditionError(f"1 - eta^c = {top} < eta, so T would not sit inside S")
    v = F.values
    return LevelSets(v >= eta / 2, v >= eta, v >= top)


# --- Lipschitz sandwich ------------------------------------------------------


def _arc_indices(m: int, lo: Fraction, hi: Fraction) -> np.ndarray:
    """Mask of grid points j/m (taken mod 1) lying in the closed arc [lo, hi]."""
    mask = np.zeros(m, dtype=bool)
    if hi < lo:
        return mask
    a, b = ceil(lo * m), floor(hi * m)
    if b - a + 1 >= m:
        mask[:] = True
    elif b >= a:
        mask[np.arange(a, b + 1) % m] = True
    return mask


def _box_average(mask: np.ndarray, w: int) -> np.ndarray:
    half = (w - 1) // 2
    acc = np.zeros(mask.size, dtype=np.int64)
    for k in range(-half, half + 1):
        acc += np.roll(mask, -k)
    return acc / w


@dataclass(frozen=True)
class SandwichReport:
    sandwich_ok: bool
    gap: float
    gap_bound: float
    lipschitz: float
    lipschitz_bound: float
    width: int
    sigma: float

    @property
    def ok(self) -> bool:
        return self.sandwich_ok and self.gap <= self.gap_bound + 1e-12 and self.lipschitz <= self.lipschitz_bound + 1e-12


def lipschitz_sandwich(center, halfwidth, tau, m: int):
    """Functions f1 <= 1_I <= f2 on Z_m, both averages of interval indicators.

    I = [c - h, c + h]; f1 averages the indicator of I shrunk by tau on each
    side, f2 that of I grown by tau, over a window of w = 2*floor(tau*m/2) + 1
    grid points (width at most tau).  Returns (f1, f2, report).
    """
    c, h, t = Fraction(center), Fraction(halfwidth), Fraction(tau)
    if h < 0 or t <= 0:
        raise PreconditionError("need halfwidth >= 0 and tau > 0")
    if 2 * h + 4 * t >= 1:
        raise PreconditionError("|I| + 4 tau must be below 1")
    if m < 1 or m > MAX_SIDE[1]:
        raise PreconditionError(f"grid side {m} outside 1..{MAX_SIDE[1]}")
    ind = _arc_indices(m, c - h, c + h)
    inner = _arc_indices(m, c - h + t, c + h - t)
    outer = _arc_indices(m, c - h - t, c + h + t)
    w = 2 * floor(t * m / 2) + 1
    f1 = _box_average(inner, w)
    f2 = _box_average(outer, w)
    sandwich = bool(np.all(f1 <= ind) and np.all(ind <= f2))
    gap = float(np.mean(f2 - f1))
    lip = max(_grid_lipschitz(f1), _grid_lipschitz(f2))
    sigma = float(4 * t)
    report = SandwichReport(sandwich, gap, sigma + 4 / m, lip, float(2 / t), w, sigma)
    return TorusGrid(f1), TorusGrid(f2), report


def _grid_lipschitz(f: np.ndarray) -> float:
    """max |f(x + 1/m) - f(x)| * m over the circle."""
    return float(np.max(np.abs(np.roll(f, -1) - f)) * f.size)


# --- equidistribution diagnostics -------------------------------------------


def _phase_indices(ns: np.ndarray, theta: Fraction, m: int) -> np.ndarray:
    """Nearest grid index round(frac(n*theta)*m) mod m, exactly."""
    p, q = theta.numerator, theta.denominator
    if np.abs(ns).max(initial=0) * abs(p) < (1 << 62) and 2 * q * m < (1 << 62):
        r = (ns.astype(np.int64) * p) % q
        return ((2 * r * m + q) // (2 * q)) % m
    out = np.empty(ns.size, dtype=np.int64)
    for i, n in enumerate(ns.tolist()):
        r = (int(n) * p) % q
        out[i] = ((2 * r * m + q) // (2 * q)) % m
    return out


def sample_at(F: TorusGrid, theta: Sequence, ns: np.ndarray) -> np.ndarray:
    th = [Fraction(x) for x in theta]
    if len(th) != F.d:
        raise PreconditionError(f"theta has {len(th)} coordinates for a {F.d}-dimensional grid")
    idx = tuple(_phase_indices(ns, t, F.m) for t in th)
    return F.values[idx]


@dataclass(frozen=True)
class EquidistributionReport:
    sample_mean: float
    integral: float
    gap: float
    irrational: IrrationalityResult


def equidistribution_gap(F: TorusGrid, theta: Sequence, P: Progression1D, N: int,
                         eta: float = 0.0, A=10) -> EquidistributionReport:
    """Mean of F(n theta) over n in P against the grid integral of F."""
    if P.first < 1 or P.last > N:
        raise PreconditionError("P must lie inside [N]")
    if P.L < eta * N:
        raise PreconditionError(f"|P| = {P.L} is below eta*N")
    ns = np.arange(P.first, P.last + 1, P.v, dtype=np.int64)
    mean = float(sample_at(F, theta, ns).mean())
    integral = F.integral()
    verdict = certify_irrational(theta, A, N)
    return EquidistributionReport(mean, integral, abs(mean - integral), verdict)


@dataclass(frozen=True)
class ProportionReport:
    proportion: float
    level_measure: float
    eta: float

    @property
    def margin(self) -> float:
        return self.proportion - (self.level_measure - self.eta)


def proportion_check(F: TorusGrid, theta: Sequence, P: Progression1D, eta: float) -> ProportionReport:
    """#{n in P : F(n theta) > eta}/|P| alongside mu{F > 2 eta}."""
    ns = np.arange(P.first, P.last + 1, P.v, dtype=np.int64)
    vals = sample_at(F, theta, ns)
    prop = float(np.count_nonzero(vals > eta)) / ns.size
    level = float(np.count_nonzero(F.values > 2 * eta)) / F.npoints
    return ProportionReport(prop, level, eta)


def grid_lipschitz_constant(F: TorusGrid) -> float:
    """Largest difference between neighbouring grid values, times m."""
    v = F.values
    return float(max(np.max(np.abs(np.roll(v, -1, axis=a) - v)) for a in range(v.ndim)) * F.m)


# --- interval pullbacks in two dimensions -------------------------------------


@dataclass(frozen=True)
class StripFit:
    distance: Fraction
    coeffs: tuple
    start: int
    length: int


def pullback_mask(m: int, a1: int, a2: int, start: int, length: int) -> np.ndarray:
    """Points (x, y) of Z_m^2 with a1*x + a2*y mod m in the arc [start, start+length)."""
    x, y = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    phase = (a1 * x + a2 * y) % m
    return arc_mask(m, start, length)[phase]


def nearest_strip(S: TorusGrid, max_coeff: int = 2) -> StripFit:
    """Closest set of the form phi^-1(arc), phi(x, y) = a1 x + a2 y, by symmetric difference.

    Candidates are all (a1, a2) with |a_i| <= max_coeff (not both zero, up to
    sign) and all grid arcs.
    """
    if S.d != 2:
        raise PreconditionError("strip fitting needs a 2-dimensional grid")
    m = S.m
    mask = S.values > 0.5
    x, y = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    total = int(mask.sum())
    best: Optional[StripFit] = None
    for a1 in range(0, max_coeff + 1):
        for a2 in range(-max_coeff, max_coeff + 1):
            if a1 == 0 and a2 <= 0:
                continue
            phase = (a1 * x + a2 * y) % m
            h_set = np.bincount(phase[mask], minlength=m)
            h_all = np.bincount(phase.ravel(), minlength=m)
            cs = np.concatenate([[0], np.cumsum(np.concatenate([h_set, h_set]))])
            ca = np.concatenate([[0], np.cumsum(np.concatenate([h_all, h_all]))])
            for length in range(0, m + 1):
                starts = np.arange(m)
                inter = cs[starts + length] - cs[starts]
                size = ca[starts + length] - ca[starts]
                diff = total + size - 2 * inter
                i = int(np.argmin(diff))
                cand = StripFit(Fraction(int(diff[i]), m * m), (a1, a2), i, length)
                if best is None or cand.distance < best.distance:
                    best = cand
    return best
