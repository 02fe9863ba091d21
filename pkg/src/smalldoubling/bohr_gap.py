"""Bohr sets and proper progressions of dimension at most two inside them.

All frequencies are exact rationals (a continued fraction is a finite list of
partial quotients), so every membership test ``||n*alpha|| < sigma`` is decided
in integer arithmetic.  Extracted progressions are re-checked element by
element before being returned; a failed check raises :class:`InvariantError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Optional, Sequence, Union

import numpy as np

from .core_sets import IntSet
from .errors import InvariantError, PreconditionError, ResourceError
from .progressions import GAP2, Progression1D, is_proper

BOHR_GUARD = 10 ** 8
ENUM_BUDGET = 10 ** 8
SIZE_DIVISOR = 400
_I63 = 1 << 62


# --- continued fractions ---------------------------------------------------


def cf_terms(x: Fraction) -> list:
    """Partial quotients of a rational by the Euclidean algorithm."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    terms = []
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return terms


def cf_value(terms: Sequence[int]) -> Fraction:
    if not terms:
        raise PreconditionError("empty continued fraction")
    val = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        val = a + 1 / val
    return val


def convergents(alpha, depth: int) -> list:
    """The first ``depth`` convergents (p_k, q_k) of alpha.

    ``alpha`` is a Fraction or a list of partial quotients.  A rational alpha
    stops at its last convergent, so the list may be shorter than ``depth``.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    terms = list(alpha) if isinstance(alpha, (list, tuple)) else cf_terms(alpha)
    out = []
    p_prev, q_prev, p, q = 1, 0, terms[0], 1
    out.append((p, q))
    for a in terms[1:depth]:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append((p, q))
    return out


# --- specs and Bohr sets ---------------------------------------------------


@dataclass(frozen=True)
class BohrSpec:
    """B_N(alpha, sigma) = {n : |n| <= N, ||n alpha|| < sigma}.

    ``alpha`` is either a Fraction or a tuple of continued-fraction terms.
    """

    alpha: Union[Fraction, tuple]
    sigma: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        if isinstance(self.alpha, (list, tuple)):
            object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        else:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        val = self.value
        if not 0 < val < 1:
            raise PreconditionError(f"alpha must lie in (0, 1), got {val}")
        if not 0 < self.sigma < Fraction(1, 100):
            raise PreconditionError(f"sigma must lie in (0, 1/100), got {self.sigma}")
        if self.N < 1:
            raise PreconditionError("need N >= 1")

    @property
    def is_cf(self) -> bool:
        return isinstance(self.alpha, tuple)

    @property
    def value(self) -> Fraction:
        return cf_value(self.alpha) if isinstance(self.alpha, tuple) else self.alpha


def _phase_ok(ns, p: int, q: int, sigma: Fraction) -> np.ndarray:
    """Boolean mask of ||n p/q|| < sigma for each n (numpy or Python ints)."""
    s_num, s_den = sigma.numerator, sigma.denominator
    ns_list = ns if isinstance(ns, np.ndarray) else np.asarray(ns, dtype=object)
    fits = (
        ns_list.dtype != object
        and len(ns_list)
        and max(abs(int(ns_list.min())), abs(int(ns_list.max()))) * abs(p) < _I63
        and q * max(s_den, s_num) < _I63
    )
    if fits:
        r = (ns_list.astype(np.int64) * p) % q
        dist = np.minimum(r, q - r)
        return dist * s_den < s_num * q
    out = np.empty(len(ns_list), dtype=bool)
    for i, n in enumerate(ns_list.tolist()):
        r = (int(n) * p) % q
        out[i] = min(r, q - r) * s_den < s_num * q
    return out


def torus_distance(x: Fraction) -> Fraction:
    """Distance from x to the nearest integer."""
    frac = x - floor(x)
    return min(frac, 1 - frac)


def bohr_set(spec: BohrSpec) -> IntSet:
    """Enumerate B_N(alpha, sigma) exactly."""
    if spec.N > BOHR_GUARD:
        raise ResourceError(f"N = {spec.N} exceeds the enumeration guard {BOHR_GUARD}")
    a = spec.value
    ns = np.arange(-spec.N, spec.N + 1, dtype=np.int64)
    mask = _phase_ok(ns, a.numerator, a.denominator, spec.sigma)
    return IntSet.from_sorted(ns[mask].tolist())


# --- lattices and successive minima -----------------------------------------


@dataclass(frozen=True)
class Lattice2:
    b1: tuple
    b2: tuple

    def __post_init__(self):
        object.__setattr__(self, "b1", (int(self.b1[0]), int(self.b1[1])))
        object.__setattr__(self, "b2", (int(self.b2[0]), int(self.b2[1])))
        if self.det == 0:
            raise PreconditionError("lattice basis is degenerate")

    @property
    def det(self) -> int:
        return abs(self.b1[0] * self.b2[1] - self.b1[1] * self.b2[0])

    detLambda = det


@dataclass(frozen=True)
class MinimaResult:
    lambda1: Fraction
    lambda2: Fraction
    v1: tuple
    v2: tuple
    minkowski_bound: Fraction
    enumerated: int = 0


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b (b > 0), halves rounded down."""
    return -((-2 * a + b) // (2 * b)) if b > 0 else _round_div(-a, -b)


def _gauss_reduce(u, w):
    """Lagrange-Gauss reduction in the Euclidean norm, exact."""
    def dot(x, y):
        return x[0] * y[0] + x[1] * y[1]

    if dot(u, u) > dot(w, w):
        u, w = w, u
    while True:
        mu = _round_div(dot(u, w), dot(u, u))
        w = (w[0] - mu * u[0], w[1] - mu * u[1])
        if dot(w, w) >= dot(u, u):
            return u, w
        u, w = w, u


def _canon(z):
    """Sign-normalize so the first nonzero coordinate is positive."""
    if z[0] < 0 or (z[0] == 0 and z[1] < 0):
        return (-z[0], -z[1])
    return z


def _line_candidates(u, w, c2: int) -> set:
    """Integers c1 near the minimizers of max(|c1*u0 + c2*w0|, |c1*u1 + c2*w1|)."""
    pts = []
    b0, b1 = c2 * w[0], c2 * w[1]
    for num, den in ((-b0, u[0]), (-b1, u[1]), (-(b0 - b1), u[0] - u[1]), (-(b0 + b1), u[0] + u[1])):
        if den:
            if den < 0:
                num, den = -num, -den
            pts.append(num // den)
            pts.append(-((-num) // den))
    if not pts:
        pts = [0]
    cands = set()
    for c in pts:
        cands.update((c - 1, c, c + 1))
    return cands


def successive_minima_2d(lattice: Lattice2, N: int, halfheight, budget: int = ENUM_BUDGET) -> MinimaResult:
    """Exact successive minima of the box |z1| <= N, |z2| <= halfheight w.r.t. the lattice.

    The norm is max(|z1|/N, |z2|/halfheight).  Coordinates are scaled to
    integers, a reduced basis bounds the range of the second coefficient, and
    on each line of fixed second coefficient the convex sup-norm is minimised
    exactly at the floor/ceiling of its breakpoints.
    """
    h = Fraction(halfheight)
    if N <= 0 or h <= 0:
        raise PreconditionError("box must have positive extent")
    hp, hq = h.numerator, h.denominator
    sx, sy = hp, hq * N  # scaled vector (z1*sx, z2*sy), norm = sup / (N*hp)
    scale = N * hp

    def scaled(z):
        return (z[0] * sx, z[1] * sy)

    def snorm(z):
        return max(abs(z[0]) * sx, abs(z[1]) * sy)

    u, w = _gauss_reduce(scaled(lattice.b1), scaled(lattice.b2))
    # back to lattice coordinates (exact division)
    u = (u[0] // sx, u[1] // sy)
    w = (w[0] // sx, w[1] // sy)
    R = max(snorm(u), snorm(w))
    su, sw = scaled(u), scaled(w)
    det_s = abs(su[0] * sw[1] - su[1] * sw[0])
    c2max = (abs(su[0]) + abs(su[1])) * R // det_s
    if 2 * c2max + 1 > budget:
        raise ResourceError(f"second-coefficient range {2 * c2max + 1} exceeds budget")

    cands = []
    for c2 in range(-c2max, c2max + 1):
        for c1 in _line_candidates(su, sw, c2):
            if c1 == 0 and c2 == 0:
                continue
            z = (c1 * u[0] + c2 * w[0], c1 * u[1] + c2 * w[1])
            # ties: shorter in the Euclidean norm, then longer first coordinate
            cands.append((snorm(z), z[0] * z[0] + z[1] * z[1], -abs(z[0]), _canon(z)))
    cands.sort()
    n1, _, _, v1 = cands[0]
    second = None
    for n2, _, _, z in cands:
        if z[0] * v1[1] - z[1] * v1[0] != 0:
            second = (n2, z)
            break
    if second is None:
        raise InvariantError("no independent second vector found")
    n2, v2 = second
    lam1, lam2 = Fraction(n1, scale), Fraction(n2, scale)
    bound = Fraction(lattice.det, N) / h
    if lam1 * lam2 > bound:
        raise InvariantError(f"Minkowski bound violated: {lam1}*{lam2} > {bound}")
    return MinimaResult(lam1, lam2, v1, v2, bound, len(cands))


def brute_minima(lattice: Lattice2, N: int, halfheight, radius: int) -> tuple:
    """Reference minima by scanning coefficient pairs with |c_i| <= radius."""
    h = Fraction(halfheight)
    pts = []
    for c1, c2 in product(range(-radius, radius + 1), repeat=2):
        if c1 == 0 and c2 == 0:
            continue
        z = (c1 * lattice.b1[0] + c2 * lattice.b2[0], c1 * lattice.b1[1] + c2 * lattice.b2[1])
        pts.append((max(Fraction(abs(z[0]), N), abs(z[1]) / h), z))
    pts.sort()
    l1, v1 = pts[0]
    l2 = next(n for n, z in pts if z[0] * v1[1] - z[1] * v1[0] != 0)
    return l1, l2


# --- extraction --------------------------------------------------------------


@dataclass(frozen=True)
class GapCertificate:
    method: str
    members_ok: bool
    proper_ok: bool
    size: int
    size_bound: Fraction
    minima: Optional[MinimaResult] = None
    convergents: Optional[tuple] = None

    @property
    def size_ok(self) -> bool:
        return self.size >= self.size_bound

    @property
    def ok(self) -> bool:
        return self.members_ok and self.proper_ok and self.size_ok


@dataclass(frozen=True)
class Extraction:
    progression: Union[Progression1D, GAP2]
    certificate: GapCertificate


def _progression_size(P) -> int:
    return P.L if isinstance(P, Progression1D) else P.box_size


def _build(x1: int, L1: int, x2: int = 0, L2: int = 0):
    if L2 == 0 or x2 == 0:
        if L1 == 0 or x1 == 0:
            return Progression1D(-1, 1, 1)  # {0}
        return Progression1D.symmetric(x1, L1)
    if L1 == 0 or x1 == 0:
        return Progression1D.symmetric(x2, L2)
    return GAP2.symmetric(x1, x2, L1, L2)


def _lattice_construction(alpha: Fraction, sigma: Fraction, N: int):
    u, v = alpha.numerator, alpha.denominator
    lat = Lattice2((1, u), (0, v))
    mins = successive_minima_2d(lat, N, sigma * v)
    L1 = floor(1 / (10 * mins.lambda1))
    L2 = floor(1 / (10 * mins.lambda2))
    if mins.lambda2 >= Fraction(1, 10):
        P = _build(mins.v1[0], L1)
    else:
        P = _build(mins.v1[0], L1, mins.v2[0], L2)
    return P, mins


def _cf_candidates(alpha: Fraction, terms: Sequence[int], sigma: Fraction, N: int):
    """Progressions {m1 q1 + m2 q2} from consecutive convergent denominators."""
    qs = [q for _, q in convergents(list(terms), len(terms))]
    dist = [torus_distance(q * alpha) for q in qs]

    def m_cap(q, d, halve):
        lim = N // (2 * q) if halve else N // q
        if d > 0:
            share = sigma / 2 if halve else sigma
            lim = min(lim, ceil(share / d) - 1)
        return max(lim, 0)

    best = None
    for i, q in enumerate(qs):
        if q == 0:
            continue
        M = m_cap(q, dist[i], False)
        P = _build(q, M)
        cand = (_progression_size(P), P, (q,))
        if best is None or cand[0] > best[0]:
            best = cand
    for i in range(len(qs) - 1):
        q1, q2 = qs[i], qs[i + 1]
        if q1 == q2:
            continue
        M1 = m_cap(q1, dist[i], True)
        M2 = m_cap(q2, dist[i + 1], True)
        # gcd(q1, q2) = 1, so 2*M1 < q2 rules out m1*q1 + m2*q2 = 0 among differences
        M1 = min(M1, (q2 - 1) // 2)
        P = _build(q1, M1, q2, M2)
        cand = (_progression_size(P), P, (q1, q2))
        if cand[0] > best[0]:
            best = cand
    return best


def _members_in_bohr(P, alpha: Fraction, sigma: Fraction, N: int) -> bool:
    E = P.elements()
    if len(E) == 0:
        return False
    if E.min < -N or E.max > N:
        return False
    if -_I63 < E.min and E.max < _I63:
        arr = np.asarray(E.elements, dtype=np.int64)
    else:
        arr = np.asarray(E.elements, dtype=object)
    return bool(_phase_ok(arr, alpha.numerator, alpha.denominator, sigma).all())


def _certify(P, method, alpha, sigma, N, size_bound, minima=None, conv=None) -> GapCertificate:
    members = _members_in_bohr(P, alpha, sigma, N)
    proper = True if isinstance(P, Progression1D) else bool(is_proper(P))
    size = len(P.elements())
    return GapCertificate(method, members, proper, size, size_bound, minima, conv)


def _extract_core(alpha: Fraction, sigma: Fraction, N: int, terms=None, size_bound=None) -> Extraction:
    """Extraction without the sigma*N >= 400 guard; also handles alpha = 0."""
    if size_bound is None:
        size_bound = sigma * N / SIZE_DIVISOR
    alpha = alpha - floor(alpha)
    if alpha == 0:
        P = Progression1D.symmetric(1, N)
        cert = _certify(P, "trivial", alpha, sigma, N, size_bound)
        return _finish(P, cert)
    if terms is not None:
        size, P, qs = _cf_candidates(alpha, terms, sigma, N)
        cert = _certify(P, "convergents", alpha, sigma, N, size_bound, conv=qs)
        if cert.ok:
            return _finish(P, cert)
    P, mins = _lattice_construction(alpha, sigma, N)
    cert = _certify(P, "lattice", alpha, sigma, N, size_bound, minima=mins)
    return _finish(P, cert)


def _finish(P, cert: GapCertificate) -> Extraction:
    if not cert.members_ok:
        raise InvariantError(f"{cert.method} progression {P} leaves the Bohr set")
    if not cert.proper_ok:
        raise InvariantError(f"{cert.method} progression {P} is not proper")
    return Extraction(P, cert)


def extract_gap(spec: BohrSpec, enforce_scale: bool = True) -> Extraction:
    """A certified proper progression of dimension <= 2 inside the Bohr set.

    Rational alpha uses the successive minima of the box |z1| <= N,
    |z2| <= sigma*v for the lattice Z(1,u) + Z(0,v); generators are the minima
    vectors' first coordinates with L_i = floor(1/(10 lambda_i)).  A
    continued-fraction alpha first tries progressions built on consecutive
    convergent denominators and falls back to the lattice construction if
    those come out too small.

    ``enforce_scale=False`` drops the sigma*N >= 400 requirement; the
    membership and properness checks still apply.
    """
    if enforce_scale and spec.sigma * spec.N < SIZE_DIVISOR:
        raise PreconditionError(f"sigma*N = {spec.sigma * spec.N} is below {SIZE_DIVISOR}")
    terms = spec.alpha if spec.is_cf else None
    ext = _extract_core(spec.value, spec.sigma, spec.N, terms)
    if not ext.certificate.size_ok:
        raise InvariantError(
            f"progression of size {ext.certificate.size} is below sigma*N/{SIZE_DIVISOR}"
        )
    return ext


# --- inhomogeneous shift -----------------------------------------------------


@dataclass(frozen=True)
class InhomogeneousResult:
    found: bool
    progression: Optional[Union[Progression1D, GAP2]] = None
    shift: Optional[int] = None
    members_ok: bool = False
    size: int = 0
    target_size: int = 0
    inner: Optional[Extraction] = None

    @property
    def ratio(self) -> Optional[Fraction]:
        if not self.target_size:
            return None
        return Fraction(self.size, self.target_size)

    @property
    def size_ok(self) -> bool:
        return self.found and self.size * 10 ** 4 >= self.target_size


def in_arc(x: Fraction, center: Fraction, halfwidth: Fraction) -> bool:
    return torus_distance(x - center) < halfwidth


def _remap(P, base: int, step: int):
    """n -> base + n*step applied to a progression."""
    if isinstance(P, Progression1D):
        return Progression1D(base + P.a0 * step, P.v * step, P.L)
    return GAP2(base + P.a0 * step, P.a1 * step, P.a2 * step, P.L1, P.L2)


def extract_gap_inhomogeneous(theta, center, halfwidth, window: Progression1D) -> InhomogeneousResult:
    """A shifted progression inside B = {n in window : n*theta within halfwidth of center}.

    The window is re-indexed around its middle as m in [-M, M].  A point b of
    the quarter-width window is sought whose phase is within halfwidth/100 of
    the centre; a progression P' of phases within halfwidth/100 of 0 is then
    extracted, and b + P' lands inside B.
    """
    theta, center, hw = Fraction(theta), Fraction(center), Fraction(halfwidth)
    if not 0 < hw < Fraction(1, 4):
        raise PreconditionError(f"halfwidth must lie in (0, 1/4), got {hw}")
    if window.first < 1:
        raise PreconditionError("window must lie in the positive integers")
    B = [n for n in range(window.first, window.last + 1, window.v) if in_arc(n * theta, center, hw)]
    M = (window.L - 1) // 2
    mid = window.a0 + (M + 1) * window.v
    beta = window.v * theta
    shifted = center - mid * theta
    Mp = M // 2
    inner_hw = hw / 100
    if Mp < 1:
        return InhomogeneousResult(False, target_size=len(B))

    bs = sorted(range(-Mp, Mp + 1), key=lambda m: (abs(m), m))
    b = next((m for m in bs if in_arc(m * beta, shifted, inner_hw)), None)
    if b is None:
        return InhomogeneousResult(False, target_size=len(B))

    inner = _extract_core(beta, inner_hw, Mp, size_bound=0)
    Q = _remap(inner.progression.shift(b), mid, window.v)
    E = Q.elements()
    members = all(
        x in window and in_arc(x * theta, center, hw) for x in E
    )
    if not members:
        raise InvariantError(f"shifted progression {Q} leaves the target set")
    return InhomogeneousResult(True, Q, mid + b * window.v, members, len(E), len(B), inner)


# --- irrationality -----------------------------------------------------------


@dataclass(frozen=True)
class IrrationalityResult:
    irrational: bool
    witness: Optional[tuple] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.irrational


def _l1_ball_count(d: int, A: int) -> int:
    # number of integer points with |m|_1 <= A
    from math import comb
    return sum(comb(d, k) * comb(A, k) * 2 ** k for k in range(0, min(d, A) + 1))


def certify_irrational(theta: Sequence, A, N: int, budget: int = ENUM_BUDGET) -> IrrationalityResult:
    """Check ||m.theta|| >= A/N for every nonzero m with |m|_1 <= A.

    m and -m give the same distance, so only vectors whose first nonzero
    entry is positive are scanned, in lexicographic order.
    """
    th = [Fraction(t) for t in theta]
    A = Fraction(A)
    if A <= 0 or N <= 0:
        raise PreconditionError("A and N must be positive")
    d = len(th)
    R = floor(A)
    if d * _l1_ball_count(d, R) > budget:
        raise ResourceError(f"enumerating |m|_1 <= {R} in dimension {d} exceeds the budget")
    thresh = A / N
    checked = 0

    def walk(prefix, remaining, leading):
        nonlocal checked
        i = len(prefix)
        if i == d:
            if leading:
                return None
            checked += 1
            if torus_distance(sum(m * t for m, t in zip(prefix, th))) < thresh:
                return tuple(prefix)
            return None
        lo = 0 if leading else -remaining
        for m in range(lo, remaining + 1):
            hit = walk(prefix + [m], remaining - abs(m), leading and m == 0)
            if hit is not None:
                return hit
        return None

    hit = walk([], R, True)
    return IrrationalityResult(hit is None, hit, checked)
