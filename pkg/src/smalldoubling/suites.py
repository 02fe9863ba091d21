"""Seeded randomized checks of the structural statements implemented here.

Each suite returns a :class:`SuiteResult` with the number of trials, the
failing cases and a few summary statistics.  All randomness flows from the
``seed`` argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, gcd, sqrt

import numpy as np

from . import bohr_gap, covering, fourier, torus_lab
from .constructions import rng_for
from .core_sets import IntSet
from .progressions import GAP2, Progression1D, is_proper


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.trials > 0 and not self.failures


# --- interval extraction and covers ----------------------------------------


def admissible_sets(l: int):
    """Every X ⊆ {0..l} with 0, l in X, |X| >= 3 and gcd 1."""
    inner = range(1, l)
    for size in range(1, l):
        for mid in combinations(inner, size):
            g = l
            for x in mid:
                g = gcd(g, x)
            if g == 1:
                yield IntSet.from_sorted((0,) + mid + (l,))


def lev_exhaustive(lmax: int = 14) -> SuiteResult:
    res = SuiteResult("lev_exhaustive")
    checks = 0
    for l in range(2, lmax + 1):
        for X in admissible_sets(l):
            res.trials += 1
            for k in covering.admissible_ks(X):
                checks += 1
                rep = covering.lev_verify(X, k)
                if not rep.ok:
                    res.failures.append((X.elements, k, rep.missing_even, rep.missing_odd))
    res.stats["containment_checks"] = checks
    return res


def cover_5_4_suite(trials: int = 1000, seed: int = 0) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("cover_5_4")
    for _ in range(trials):
        L = int(rng.integers(12, 61))
        P = Progression1D(int(rng.integers(-50, 51)), int(rng.integers(1, 6)), L)
        E = P.elements().elements
        size = int(rng.integers(L // 2 + 1, L + 1))
        X = IntSet(E[int(i)] for i in rng.choice(L, size=size, replace=False))
        out = covering.cover_5_4(X, P)
        res.trials += 1
        if not out.holds:
            res.failures.append((X.elements, P, out.witness))
    return res


def cover_9_8_suite(trials: int = 200, seed: int = 0) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("cover_9_8")
    for _ in range(trials):
        n = int(rng.integers(100, 161))
        span = int(rng.integers(n, (5 * n - 1) // 2 + 1))
        v = int(rng.integers(1, 4))
        u = int(rng.integers(-100, 101))
        X = IntSet(u + v * int(i) for i in rng.choice(span, size=n, replace=False))
        out = covering.cover_9_8(X)
        res.trials += 1
        if not out.holds:
            res.failures.append((X.elements, out.witness))
    return res


def _random_proper_gap(rng) -> GAP2:
    while True:
        L1 = int(rng.integers(8, 16))
        L2 = int(rng.integers(ceil(112 / L1), 17))
        if rng.random() < 0.1:
            a1, a2 = 1, int(rng.integers(500, 1001))
        else:
            a1 = int(rng.integers(1, 6))
            a2 = int(rng.integers(1, 60))
        Q = GAP2(int(rng.integers(-20, 21)), a1, a2, L1, L2)
        if is_proper(Q):
            return Q


def cover_41_40_suite(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("cover_41_40")
    for _ in range(trials):
        Q = _random_proper_gap(rng)
        E = Q.elements().elements
        n = len(E)
        drop_max = min((n - 1) // 10, n - 100)
        drop = int(rng.integers(0, drop_max + 1))
        keep = rng.choice(n, size=n - drop, replace=False)
        X = IntSet(E[int(i)] for i in keep)
        out = covering.cover_41_40(X, Q)
        res.trials += 1
        if not out.holds:
            res.failures.append((Q, X.elements, out.witness))
    return res


# --- Bohr extraction ---------------------------------------------------------


def random_bohr_spec(rng) -> bohr_gap.BohrSpec:
    sigma = Fraction(1, int(rng.integers(101, 1001)))
    N = int(rng.integers(ceil(400 / sigma), 10 ** 6 + 1))
    if rng.random() < 0.5:
        v = int(rng.integers(2, 10 ** 6))
        u = int(rng.integers(1, v))
        g = gcd(u, v)
        return bohr_gap.BohrSpec(Fraction(u // g, v // g), sigma, N)
    depth = int(rng.integers(2, 21))
    terms = [0] + [int(t) for t in rng.integers(1, 12, size=depth)]
    if terms[-1] == 1 and len(terms) > 2:
        terms[-1] = 2
    return bohr_gap.BohrSpec(tuple(terms), sigma, N)


def bohr_suite(trials: int = 500, seed: int = 0) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("bohr_extraction")
    methods: dict = {}
    worst = None
    minima_checked = 0
    for _ in range(trials):
        spec = random_bohr_spec(rng)
        ext = bohr_gap.extract_gap(spec)
        cert = ext.certificate
        res.trials += 1
        methods[cert.method] = methods.get(cert.method, 0) + 1
        if cert.minima is not None:
            minima_checked += 1
            m = cert.minima
            if m.lambda1 * m.lambda2 > m.minkowski_bound:
                res.failures.append((spec, "minkowski"))
        if not cert.ok:
            res.failures.append((spec, cert))
        ratio = Fraction(cert.size) / (spec.sigma * spec.N)
        worst = ratio if worst is None else min(worst, ratio)
    res.stats.update(methods=methods, minima_checked=minima_checked,
                     worst_size_over_sigmaN=worst)
    return res


# --- U2 identity -------------------------------------------------------------


def _random_grid_function(rng, N: int) -> fourier.GridFunction:
    kind = int(rng.integers(0, 4))
    if kind == 0:
        vals = rng.uniform(-1, 1, N)
    elif kind == 1:
        vals = rng.choice([-1.0, 1.0], N)
    elif kind == 2:
        vals = (rng.random(N) < rng.uniform(0.05, 0.95)).astype(float)
    else:
        vals = rng.uniform(-2, 2, N)
    return fourier.GridFunction(vals)


def u2_suite(trials: int = 200, seed: int = 0, maxN: int = 512) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("u2_identity")
    worst = 0.0
    for _ in range(trials):
        N = int(rng.integers(1, maxN + 1))
        f = _random_grid_function(rng, N)
        a, b = fourier.u2_norm_direct(f), fourier.u2_norm_fourier(f)
        rel = abs(a - b) / max(abs(a), 1e-300) if a else abs(b)
        worst = max(worst, rel)
        res.trials += 1
        if rel > 1e-9:
            res.failures.append((N, a, b, rel))
    res.stats["worst_relative_error"] = worst
    return res


def quadruple_suite(maxN: int = 200) -> SuiteResult:
    res = SuiteResult("quadruple_count")
    for N in range(1, maxN + 1):
        ones = np.ones(N, dtype=np.int64)
        r = np.convolve(ones, ones)
        res.trials += 1
        if int(np.dot(r, r)) != fourier.quadruple_count(N):
            res.failures.append(N)
    return res


# --- torus suites ------------------------------------------------------------


def _arc_union_1d(rng, m: int) -> np.ndarray:
    mask = np.zeros(m, dtype=bool)
    for _ in range(int(rng.integers(1, 4))):
        mask |= torus_lab.arc_mask(m, int(rng.integers(0, m)), int(rng.integers(m // 8, m // 2 + 1)))
    return mask


def _random_set_2d(rng, m: int) -> np.ndarray:
    if rng.random() < 0.5:
        mask = np.zeros((m, m), dtype=bool)
        for _ in range(int(rng.integers(1, 4))):
            rows = torus_lab.arc_mask(m, int(rng.integers(0, m)), int(rng.integers(m // 4, m + 1)))
            cols = torus_lab.arc_mask(m, int(rng.integers(0, m)), int(rng.integers(m // 4, m + 1)))
            mask |= rows[:, None] & cols[None, :]
        return mask
    a1, a2 = int(rng.integers(0, 3)), int(rng.integers(-2, 3))
    if a1 == 0 and a2 == 0:
        a1 = 1
    return torus_lab.pullback_mask(m, a1, a2, int(rng.integers(0, m)), int(rng.integers(m // 8, m // 2 + 1)))


def random_torus_set(rng, d: int, m: int) -> torus_lab.TorusGrid:
    mask = _arc_union_1d(rng, m) if d == 1 else _random_set_2d(rng, m)
    return torus_lab.from_mask(mask)


def kneser_suite(trials: int = 200, seed: int = 0, C: float = 3.0, ms=(32, 64), ds=(1, 2),
                 lam=None) -> SuiteResult:
    """Deficiency >= -(C sqrt(lam) + 2d/m) on random pairs of arc/strip/rectangle unions."""
    rng = rng_for(seed)
    res = SuiteResult("kneser")
    needed = 0.0
    attempts = 0
    while res.trials < trials and attempts < 50 * trials:
        attempts += 1
        d = int(rng.choice(ds))
        m = int(rng.choice(ms))
        S1, S2 = random_torus_set(rng, d, m), random_torus_set(rng, d, m)
        cap = float(min(S1.measure(), S2.measure())) ** 2
        this_lam = lam if lam is not None else float(rng.uniform(0.02, 0.98)) * cap
        if not 0 < this_lam < cap:
            continue
        rep = torus_lab.kneser_deficiency(S1, S2, this_lam)
        res.trials += 1
        slack = 2 * d / m
        shortfall = -(float(rep.deficiency) + slack)
        if shortfall > 0:
            needed = max(needed, shortfall / sqrt(this_lam))
        if float(rep.deficiency) < -(C * sqrt(this_lam) + slack):
            res.failures.append((d, m, this_lam, rep))
    res.stats.update(calibration_constant=C, smallest_constant_needed=needed,
                     skipped=attempts - res.trials)
    return res


def sandwich_suite(trials: int = 50, seed: int = 0) -> SuiteResult:
    rng = rng_for(seed)
    res = SuiteResult("lipschitz_sandwich")
    for _ in range(trials):
        c = Fraction(int(rng.integers(0, 10 ** 6)), 10 ** 6)
        h = Fraction(int(rng.integers(0, 4 * 10 ** 5)), 10 ** 6)
        tmax = min(Fraction(1, 20), (1 - 2 * h) / 4 - Fraction(1, 10 ** 6))
        t = Fraction(int(rng.integers(1000, int(tmax * 10 ** 6) + 1)), 10 ** 6)
        m = int(rng.integers(64, 4097))
        _, _, rep = torus_lab.lipschitz_sandwich(c, h, t, m)
        res.trials += 1
        if not rep.ok:
            res.failures.append((c, h, t, m, rep))
    return res
