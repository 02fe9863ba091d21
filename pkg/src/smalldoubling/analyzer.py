"""Expansion, dense AP, or dense proper 2-dimensional GAP: a bounded search.

``dichotomy_check`` measures the doubling of A.  If it is at most 4 + delta,
it looks for a long AP on which A has density at least 1/2 - eps, then for
a large proper GAP2 on which A has density at least 1 - eps.  Both searches
are bounded, so failure to find a witness is reported as ``inconclusive``
rather than as evidence of absence.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional, Union

import numpy as np

from .core_sets import IntSet, doubling, representation_counts
from .errors import PreconditionError, ResourceError
from .freiman import AffineMap, normalize_affine
from .progressions import GAP2, Progression1D, density_on, is_proper

AP_BUDGET = 10 ** 9
GAP_RANGE_LIMIT = 1 << 24
POPULAR = 64
SMALL_STEPS = 32
_F64_EXACT = 1 << 52


def _better(key_a, key_b) -> bool:
    """Compare (density, size, step, a0) candidates under the tie-breaking order."""
    da, sa, va, aa = key_a
    db, sb, vb, ab = key_b
    if da != db:
        return da > db
    if sa != sb:
        return sa > sb
    if va != vb:
        return va < vb
    return aa < ab


# --- densest AP --------------------------------------------------------------


def _class_windows(pos: list, lo: int, hi: int, L0: int):
    """Candidate (start, length) windows on one residue class, in class units.

    ``pos`` are the class indices of A's elements, ``[lo, hi]`` the allowed
    index range.  A best window longer than L0 starts and ends on elements;
    a best window of length exactly L0 can be slid until it starts on an
    element, ends on one, or touches the range start.
    """
    out = []
    if hi - lo + 1 < L0:
        return out
    starts = {lo}
    starts.update(p for p in pos if p + L0 - 1 <= hi)
    starts.update(p - L0 + 1 for p in pos if p - L0 + 1 >= lo)
    for s in starts:
        out.append((s, L0))
    return out


def _count_in(pos: list, s: int, length: int) -> int:
    return bisect.bisect_right(pos, s + length - 1) - bisect.bisect_left(pos, s)


def densest_ap(A: IntSet, min_len: int, max_step: int, budget: int = AP_BUDGET):
    """Densest AP (step <= max_step, length >= min_len) inside [min A, max A].

    Returns (Progression1D, density), or (None, None) when no AP of the
    required length fits.  Ties go to the longer AP, then the smaller step,
    then the smaller base.
    """
    if min_len < 2:
        raise PreconditionError("min_len must be at least 2")
    if max_step < 1:
        raise PreconditionError("max_step must be at least 1")
    if len(A) == 0:
        raise PreconditionError("A must be non-empty")
    lo, hi = A.min, A.max
    work = 0
    best = None  # (key, Progression1D)

    def offer(dens: Fraction, length: int, v: int, start: int):
        nonlocal best
        key = (dens, length, v, start - v)
        if best is None or _better(key, best[0]):
            best = (key, Progression1D(start - v, v, length))

    for v in range(1, max_step + 1):
        if (hi - lo) // v + 1 < min_len:
            break
        classes: dict = {}
        for x in A:
            classes.setdefault((x - lo) % v, []).append(x)
        for r in range(v):
            first = lo + r
            if first > hi:
                break
            n_idx = (hi - first) // v  # indices 0..n_idx
            if n_idx + 1 < min_len:
                continue
            pos = [(x - first) // v for x in classes.get(r, [])]
            k = len(pos)
            work += k * k + 2 * k + 1
            if work > budget:
                raise ResourceError("densest_ap budget exhausted", partial=True,
                                    best=None if best is None else (best[1], best[0][0]))
            for s, length in _class_windows(pos, 0, n_idx, min_len):
                c = _count_in(pos, s, length)
                offer(Fraction(c, length), length, v, first + s * v)
            if k >= 2:
                _scan_spans(pos, min_len, lambda dens, length, s: offer(dens, length, v, first + s * v),
                            best[0][0] if best else Fraction(0))
    if best is None:
        return None, None
    return best[1], best[0][0]


def _scan_spans(pos: list, L0: int, offer, floor_density: Fraction) -> None:
    """Offer every span [pos[i], pos[j]] of length >= L0 that could beat the current best."""
    k = len(pos)
    span = pos[-1] - pos[0]
    if span < _F64_EXACT:
        p = np.asarray(pos, dtype=np.int64)
        idx = np.arange(k)
        hits = []
        top = -1.0
        for b0 in range(0, k, 1024):
            rows = slice(b0, min(k, b0 + 1024))
            lengths = p[None, :] - p[rows, None] + 1
            counts = idx[None, :] - idx[rows, None] + 1
            valid = lengths >= L0
            if not valid.any():
                continue
            dens = np.where(valid, counts / np.where(valid, lengths, 1), -1.0)
            block_top = float(dens.max())
            if block_top < top * (1 - 1e-9):
                continue
            top = max(top, block_top)
            ii, jj = np.nonzero(dens >= block_top * (1 - 1e-9))
            hits.extend(zip((ii + b0).tolist(), jj.tolist()))
        thresh = max(top, float(floor_density)) * (1 - 1e-9)
        for i, j in hits:
            length = pos[j] - pos[i] + 1
            if (j - i + 1) / length >= thresh:
                offer(Fraction(j - i + 1, length), length, pos[i])
        return
    best = floor_density
    for i in range(k):
        for j in range(i, k):
            length = pos[j] - pos[i] + 1
            if length < L0:
                continue
            c = j - i + 1
            # c/length >= best, compared without building a Fraction
            if c * best.denominator >= best.numerator * length:
                offer(Fraction(c, length), length, pos[i])


def densest_ap_exhaustive(A: IntSet, min_len: int, max_step: int):
    """Reference: every (step, base, length) inside [min A, max A], counted directly."""
    lo, hi = A.min, A.max
    look = A.as_set()
    best = None
    for v in range(1, max_step + 1):
        for start in range(lo, hi + 1):
            for length in range(min_len, (hi - start) // v + 2):
                c = sum(1 for l in range(length) if start + l * v in look)
                key = (Fraction(c, length), length, v, start - v)
                if best is None or _better(key, best[0]):
                    best = (key, Progression1D(start - v, v, length))
    if best is None:
        return None, None
    return best[1], best[0][0]


# --- densest GAP2 -----------------------------------------------------------


@dataclass(frozen=True)
class GapSearchResult:
    gap: Optional[GAP2]
    density: Optional[Fraction]
    exhaustive: bool
    evaluated: int


def popular_differences(A: IntSet, top: int = POPULAR) -> list:
    """The ``top`` positive differences with the most representations a - b."""
    if len(A) < 2:
        return []
    counts = representation_counts(A, A.negate())
    pos = [(c, d) for d, c in counts.items() if d > 0]
    pos.sort(key=lambda cd: (-cd[0], cd[1]))
    return [d for _, d in pos[:top]]


def _strided_cumsum(ind: np.ndarray, v: int) -> np.ndarray:
    """cs[x] = ind[x] + ind[x - v] + ind[x - 2v] + ..."""
    n = ind.size
    rows = -(-n // v)
    padded = np.zeros(rows * v, dtype=np.int64)
    padded[:n] = ind
    return np.cumsum(padded.reshape(rows, v), axis=0).reshape(-1)[:n]


def _strided_window_sums(ind: np.ndarray, v: int, L: int, cs: Optional[np.ndarray] = None) -> np.ndarray:
    """W[x] = sum_{l=0..L-1} ind[x + l v] for every x with x + (L-1) v in range."""
    n = ind.size
    if (L - 1) * v >= n:
        return np.zeros(0, dtype=np.int64)
    if cs is None:
        cs = _strided_cumsum(ind, v)
    cs = np.concatenate([np.zeros(v, dtype=np.int64), cs])
    return cs[L * v: n + v] - cs[: n + v - L * v]


def densest_gap2(A: IntSet, min_size: int, max_v1: Optional[int] = None, max_v2: Optional[int] = None,
                 max_L: int = 64, steps: Optional[list] = None) -> GapSearchResult:
    """Densest proper GAP2 {a0 + l1 v1 + l2 v2} with 0 < v1 < v2 inside [min A, max A].

    Steps come from the popular differences of A plus 1..32; lengths run up
    to ``max_L`` with L1*L2 >= min_size.  Candidates are taken in decreasing
    order of an upper bound (the best 1-dimensional densities along each
    step) and the scan stops once the bound falls below the best density.
    """
    if len(A) == 0:
        raise PreconditionError("A must be non-empty")
    if min_size < 1:
        raise PreconditionError("min_size must be positive")
    lo, hi = A.min, A.max
    width = hi - lo + 1
    if width > GAP_RANGE_LIMIT:
        raise ResourceError(f"range {width} exceeds the GAP search limit {GAP_RANGE_LIMIT}")
    if steps is None:
        steps = sorted(set(popular_differences(A)) | set(range(1, SMALL_STEPS + 1)))
    steps = [s for s in steps if 0 < s < width]
    if max_v1 is not None or max_v2 is not None:
        cap = max(x for x in (max_v1, max_v2) if x is not None)
        steps = [s for s in steps if s <= cap]
    if len(A) < 2 or not steps:
        return GapSearchResult(None, None, True, 0)

    ind = np.zeros(width, dtype=np.int64)
    ind[np.asarray([x - lo for x in A], dtype=np.int64)] = 1

    # best count of A on any L-term AP of step s, for L = 1..max_L
    Ls = np.arange(1, max_L + 1)
    rowbest = np.zeros((len(steps), max_L), dtype=np.float64)
    for i, s in enumerate(steps):
        cs = _strided_cumsum(ind, s)
        for L in range(1, max_L + 1):
            w = _strided_window_sums(ind, s, L, cs)
            if w.size == 0:
                break
            rowbest[i, L - 1] = w.max() / L
    size_ok = (Ls[:, None] * Ls[None, :]) >= min_size

    pairs = []
    for i, v1 in enumerate(steps):
        if max_v1 is not None and v1 > max_v1:
            continue
        for j in range(i + 1, len(steps)):
            v2 = steps[j]
            if max_v2 is not None and v2 > max_v2:
                continue
            bound = np.minimum(rowbest[i][:, None], rowbest[j][None, :])
            bound = np.where(size_ok, bound, -1.0)
            top = float(bound.max())
            if top > 0:
                pairs.append((top, i, j, bound))
    pairs.sort(key=lambda t: (-t[0], steps[t[1]], steps[t[2]]))

    best = None  # (key, GAP2, count)
    evaluated = 0
    for top, i, j, bound in pairs:
        if best is not None and top < float(best[0][0]) * (1 - 1e-9):
            break
        v1, v2 = steps[i], steps[j]
        Lpairs = np.argwhere(bound > 0)
        order = np.argsort(-bound[Lpairs[:, 0], Lpairs[:, 1]], kind="stable")
        for L1m, L2m in Lpairs[order]:
            if best is not None and bound[L1m, L2m] < float(best[0][0]) * (1 - 1e-9):
                break
            L1, L2 = int(L1m) + 1, int(L2m) + 1
            cand = GAP2(0, v1, v2, L1, L2)
            if not is_proper(cand):
                continue
            rows = _strided_window_sums(ind, v1, L1)
            if rows.size == 0:
                continue
            # total[x] counts A on the GAP whose first element is lo + x
            total = _strided_window_sums(rows, v2, L2)
            if total.size == 0:
                continue
            evaluated += 1
            c = int(total.max())
            a0 = lo + int(np.argmax(total)) - v1 - v2
            size = L1 * L2
            key = (Fraction(c, size), size, (v1, v2), a0)
            if best is None or _better(key, best[0]):
                best = (key, GAP2(a0, v1, v2, L1, L2))
    if best is None:
        return GapSearchResult(None, None, True, evaluated)
    return GapSearchResult(best[1], best[0][0], True, evaluated)


# --- the trichotomy ---------------------------------------------------------


@dataclass
class StructureReport:
    branch: str
    sigma: Fraction
    witness: Optional[Union[Progression1D, GAP2]] = None
    density: Optional[Fraction] = None
    params: dict = field(default_factory=dict)
    best_ap: Optional[tuple] = None
    best_gap: Optional[tuple] = None
    notes: list = field(default_factory=list)


def _map_back(P, amap: AffineMap):
    if isinstance(P, Progression1D):
        return Progression1D(amap.inverse(P.a0), P.v * amap.v, P.L)
    return GAP2(amap.inverse(P.a0), P.a1 * amap.v, P.a2 * amap.v, P.L1, P.L2)


def dichotomy_check(A: IntSet, delta, eps, min_frac=Fraction(1, 8), max_step: int = 32,
                    max_L: int = 64) -> StructureReport:
    delta, eps, min_frac = Fraction(delta), Fraction(eps), Fraction(min_frac)
    if len(A) == 0:
        raise PreconditionError("A must be non-empty")
    if not (0 < delta < 1 and 0 < eps < 1 and 0 < min_frac <= 1):
        raise PreconditionError("need delta, eps in (0, 1) and min_frac in (0, 1]")
    params = {"delta": delta, "eps": eps, "min_frac": min_frac}
    sigma = doubling(A)
    if sigma > 4 + delta:
        return StructureReport("expansion", sigma, params=params)

    need = max(2, ceil(min_frac * len(A)))
    Y, amap = normalize_affine(A)
    report = StructureReport("inconclusive", sigma, params=params)

    P, dens = densest_ap(Y, need, max_step)
    if P is not None:
        P = _map_back(P, amap)
        report.best_ap = (P, dens)
        if dens >= Fraction(1, 2) - eps:
            report.branch, report.witness, report.density = "ap_dense", P, dens
            return report

    try:
        res = densest_gap2(Y, need, max_L=max_L)
    except ResourceError as exc:
        report.notes.append(f"GAP search skipped: {exc}")
        return report
    if res.gap is not None:
        Q = _map_back(res.gap, amap)
        report.best_gap = (Q, res.density)
        if res.density >= 1 - eps:
            report.branch, report.witness, report.density = "gap_dense", Q, res.density
    return report


def verify_report(A: IntSet, report: StructureReport) -> list:
    """Recompute the branch invariants from scratch; returns a list of failures."""
    errs = []
    delta, eps, min_frac = (Fraction(report.params[k]) for k in ("delta", "eps", "min_frac"))
    sigma = doubling(A)
    if sigma != report.sigma:
        errs.append(f"sigma {report.sigma} != recomputed {sigma}")
    need = min_frac * len(A)
    if report.branch == "expansion":
        if not sigma > 4 + delta:
            errs.append("expansion claimed but sigma <= 4 + delta")
    elif report.branch == "ap_dense":
        P = report.witness
        if not isinstance(P, Progression1D):
            errs.append("ap_dense witness is not a 1-dimensional progression")
        else:
            d = density_on(A, P)
            if d != report.density:
                errs.append(f"density {report.density} != recomputed {d}")
            if d < Fraction(1, 2) - eps or P.L < need:
                errs.append("ap_dense thresholds not met")
    elif report.branch == "gap_dense":
        Q = report.witness
        if not isinstance(Q, GAP2) or not is_proper(Q):
            errs.append("gap_dense witness is not a proper GAP2")
        else:
            d = density_on(A, Q)
            if d != report.density:
                errs.append(f"density {report.density} != recomputed {d}")
            if d < 1 - eps or Q.box_size < need:
                errs.append("gap_dense thresholds not met")
    elif report.branch != "inconclusive":
        errs.append(f"unknown branch {report.branch!r}")
    return errs
