import numpy as np
import pytest

from smalldoubling import PreconditionError, Progression1D, ResourceError
from smalldoubling.fourier import (
    GridFunction, embedding_prime, l2_norm, primes_between, progression_mean_bound_check,
    quadruple_count, u2_norm, u2_norm_direct, u2_norm_fourier,
)
from smalldoubling import suites


def u2_oracle(vals):
    # O(N^2) representation sums: r(s) = sum_{a+b=s} f(a) f(b)
    N = len(vals)
    r = {}
    for a in range(N):
        for b in range(N):
            r[a + b] = r.get(a + b, 0.0) + vals[a] * vals[b]
    return (sum(x * x for x in r.values()) / quadruple_count(N)) ** 0.25


def is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


class TestGridFunction:
    def test_range(self):
        with pytest.raises(PreconditionError):
            GridFunction([0.0, 3.0])
        with pytest.raises(PreconditionError):
            GridFunction([])
        assert GridFunction([1, -1])(2) == -1


class TestNorms:
    def test_l2_examples(self):
        assert l2_norm(GridFunction(np.ones(10))) == 1
        assert l2_norm(GridFunction(np.zeros(10))) == 0
        half = np.r_[np.ones(8), np.zeros(8)]
        assert l2_norm(GridFunction(half)) == pytest.approx(0.5 ** 0.5)

    def test_u2_constant(self):
        assert u2_norm_direct(GridFunction(np.ones(37))) == pytest.approx(1.0, rel=1e-12)
        assert u2_norm_direct(GridFunction(np.zeros(9))) == 0
        assert u2_norm_fourier(GridFunction(np.zeros(9))) == 0

    def test_u2_half_indicator(self):
        vals = np.r_[np.ones(32), np.zeros(32)]
        f = GridFunction(vals)
        expected = u2_oracle(vals.tolist())
        assert u2_norm_direct(f) == pytest.approx(expected, rel=1e-12)
        assert u2_norm_fourier(f) == pytest.approx(expected, rel=1e-9)

    def test_fourier_examples(self):
        f = GridFunction(np.ones(32))
        assert u2_norm_fourier(f) == pytest.approx(u2_norm_direct(f), rel=1e-9)
        alt = GridFunction([(-1) ** n for n in range(1, 65)])
        a, b = u2_norm_direct(alt), u2_norm_fourier(alt)
        assert b == pytest.approx(a, rel=1e-9)
        # r(s) only changes sign, so the norm equals that of the constant function
        assert a == pytest.approx(1.0, rel=1e-12)

    def test_direct_matches_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            vals = rng.uniform(-1, 1, int(rng.integers(1, 40)))
            assert u2_norm_direct(GridFunction(vals)) == pytest.approx(u2_oracle(vals.tolist()), rel=1e-10)

    def test_seeded_identity_suite(self):
        res = suites.u2_suite(40, seed=2, maxN=256)
        assert res.ok, res.failures[:2]

    def test_u2_at_most_sup_norm(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            vals = rng.uniform(-1, 1, int(rng.integers(1, 200)))
            f = GridFunction(vals)
            assert u2_norm(f) <= np.max(np.abs(vals)) + 1e-12

    def test_guard(self):
        with pytest.raises(ResourceError):
            u2_norm_direct(GridFunction(np.zeros(5000)))
        big = GridFunction(np.ones(5000))
        assert u2_norm(big) == pytest.approx(1.0, rel=1e-9)


class TestQuadruples:
    def test_examples(self):
        assert quadruple_count(1) == 1
        assert quadruple_count(2) == 6
        assert quadruple_count(10) == 670

    def test_against_representation_counts(self):
        assert suites.quadruple_suite(200).ok


class TestPrimes:
    def test_sieve_matches_trial_division(self):
        assert primes_between(90, 130) == [n for n in range(90, 130) if is_prime(n)]
        assert primes_between(0, 20) == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_embedding_prime_is_least(self):
        for N in (1, 2, 7, 64, 500):
            p = embedding_prime(N)
            assert 200 * N <= p < 400 * N and is_prime(p)
            assert not any(is_prime(n) for n in range(200 * N, p))


class TestMeanBound:
    def test_zero(self):
        rep = progression_mean_bound_check(GridFunction(np.zeros(64)), Progression1D(0, 1, 64), 0.5)
        assert rep.lhs == 0

    def test_constant(self):
        rep = progression_mean_bound_check(GridFunction(np.ones(64)), Progression1D(0, 1, 64), 0.25)
        assert rep.lhs == pytest.approx(1.0)
        assert rep.rhs == pytest.approx(4.0)

    def test_random_signs_on_evens(self):
        rng = np.random.default_rng(0)
        f = GridFunction(rng.choice([-1.0, 1.0], 1024))
        rep = progression_mean_bound_check(f, Progression1D(0, 2, 512), 0.5)
        assert 0 <= rep.ratio < 1

    def test_empirical_ratio_bounded(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(1000):
            N = int(rng.integers(16, 257))
            f = GridFunction(rng.uniform(-1, 1, N))
            eta = float(rng.uniform(0.1, 0.9))
            L = int(rng.integers(int(np.ceil(eta * N)), N + 1))
            v = int(rng.integers(1, N // L + 1))
            a0 = int(rng.integers(0, N - L * v + 1))
            rep = progression_mean_bound_check(f, Progression1D(a0, v, L), eta)
            worst = max(worst, rep.ratio)
        assert worst < 1.0

    def test_preconditions(self):
        f = GridFunction(np.ones(10))
        with pytest.raises(PreconditionError):
            progression_mean_bound_check(f, Progression1D(0, 1, 3), 0.5)
        with pytest.raises(PreconditionError):
            progression_mean_bound_check(f, Progression1D(5, 1, 10), 0.1)
