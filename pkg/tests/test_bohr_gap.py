from fractions import Fraction
from math import floor

import numpy as np
import pytest

from smalldoubling import GAP2, IntSet, InvariantError, PreconditionError, Progression1D, ResourceError, is_proper
from smalldoubling.bohr_gap import (
    BohrSpec, Lattice2, bohr_set, brute_minima, certify_irrational, cf_terms, cf_value, convergents,
    extract_gap, extract_gap_inhomogeneous, successive_minima_2d, torus_distance,
)
from smalldoubling import suites

GOLDEN = (0,) + (1,) * 25


def bohr_oracle(alpha, sigma, N):
    return IntSet(n for n in range(-N, N + 1) if torus_distance(n * Fraction(alpha)) < sigma)


class TestContinuedFractions:
    def test_terms_round_trip(self):
        for x in [Fraction(3, 7), Fraction(355, 113), Fraction(1, 2), Fraction(987, 1597)]:
            assert cf_value(cf_terms(x)) == x

    def test_examples(self):
        assert convergents(Fraction(3, 7), 10) == [(0, 1), (1, 2), (3, 7)]
        assert [q for _, q in convergents(GOLDEN, 8)] == [1, 1, 2, 3, 5, 8, 13, 21]
        assert convergents(Fraction(1, 2), 5)[-1] == (1, 2)

    def test_best_approximation(self):
        alpha = Fraction(355, 113) - 3
        for p, q in convergents(alpha, 10)[1:]:
            for q2 in range(1, q):
                assert torus_distance(q2 * alpha) >= torus_distance(q * alpha)


class TestBohrSet:
    def test_half(self):
        assert bohr_set(BohrSpec(Fraction(1, 2), Fraction(9, 1000), 6)).elements == (-6, -4, -2, 0, 2, 4, 6)

    def test_fifth(self):
        assert bohr_set(BohrSpec(Fraction(1, 5), Fraction(9, 1000), 20)) == IntSet(range(-20, 21, 5))

    def test_matches_oracle(self):
        spec = BohrSpec(Fraction(3, 7), Fraction(1, 200), 100)
        assert bohr_set(spec) == bohr_oracle(Fraction(3, 7), Fraction(1, 200), 100)
        rng = np.random.default_rng(8)
        for _ in range(20):
            q = int(rng.integers(2, 5000))
            p = int(rng.integers(1, q))
            s = Fraction(1, int(rng.integers(101, 400)))
            N = int(rng.integers(1, 3000))
            assert bohr_set(BohrSpec(Fraction(p, q), s, N)) == bohr_oracle(Fraction(p, q), s, N)

    def test_spec_validation(self):
        with pytest.raises(PreconditionError):
            BohrSpec(Fraction(1, 2), Fraction(1, 50), 10)
        with pytest.raises(PreconditionError):
            BohrSpec(Fraction(3, 2), Fraction(1, 200), 10)

    def test_guard(self):
        with pytest.raises(ResourceError):
            bohr_set(BohrSpec(Fraction(1, 3), Fraction(1, 200), 10 ** 9))


class TestMinima:
    def test_unit_lattice(self):
        m = successive_minima_2d(Lattice2((1, 0), (0, 1)), 1, 1)
        assert (m.lambda1, m.lambda2) == (1, 1)
        assert (m.v1, m.v2) == ((1, 0), (0, 1))

    def test_skew_example(self):
        m = successive_minima_2d(Lattice2((1, 1), (0, 5)), 5, 1)
        assert (m.lambda1, m.lambda2) == (1, 1)
        assert m.v1 == (1, 1) and m.v2 == (4, -1)
        assert m.lambda1 * m.lambda2 <= m.minkowski_bound

    def test_degenerate(self):
        with pytest.raises(PreconditionError):
            Lattice2((1, 2), (2, 4))

    def test_against_brute_force(self):
        rng = np.random.default_rng(21)
        done = 0
        while done < 80:
            v = int(rng.integers(2, 80))
            u = int(rng.integers(1, v))
            N = int(rng.integers(1, 80))
            h = Fraction(int(rng.integers(1, 80)), int(rng.integers(1, 6)))
            # (v, 0) and (0, v) lie in the lattice, so lambda2 <= lam_max
            lam_max = max(Fraction(v, N), v / h)
            c1 = floor(lam_max * N)
            radius = c1 + floor(lam_max * h / v) + c1 * u // v + 1
            if radius > 40:
                continue
            lat = Lattice2((1, u), (0, v))
            m = successive_minima_2d(lat, N, h)
            assert (m.lambda1, m.lambda2) == brute_minima(lat, N, h, radius)
            assert m.lambda1 * m.lambda2 <= m.minkowski_bound
            done += 1


class TestExtraction:
    def test_half_small_scale(self):
        spec = BohrSpec(Fraction(1, 2), Fraction(9, 1000), 10 ** 4)
        with pytest.raises(PreconditionError):
            extract_gap(spec)
        ext = extract_gap(spec, enforce_scale=False)
        P = ext.progression
        assert isinstance(P, Progression1D) and P.v == 2
        assert P.size >= 90
        assert P.elements().issubset(bohr_set(spec))

    def test_golden(self):
        spec = BohrSpec(GOLDEN, Fraction(1, 128), 10 ** 5)
        ext = extract_gap(spec)
        cert = ext.certificate
        assert cert.ok
        assert cert.size * 400 >= spec.sigma * spec.N
        E = ext.progression.elements()
        assert all(torus_distance(x * spec.value) < spec.sigma and abs(x) <= spec.N for x in E)
        if isinstance(ext.progression, GAP2):
            assert is_proper(ext.progression)

    def test_rational_uses_lattice(self):
        spec = BohrSpec(Fraction(123, 1001), Fraction(1, 150), 10 ** 5)
        ext = extract_gap(spec)
        assert ext.certificate.method == "lattice"
        assert ext.certificate.minima is not None
        assert ext.progression.elements().issubset(bohr_set(spec))

    def test_seeded_suite(self):
        res = suites.bohr_suite(60, seed=5)
        assert res.ok, res.failures[:2]


class TestInhomogeneous:
    def test_third(self):
        window = Progression1D(0, 1, 3000)
        res = extract_gap_inhomogeneous(Fraction(1, 3), 0, Fraction(1, 5), window)
        assert res.found and res.members_ok
        E = res.progression.elements()
        assert all(x % 3 == 0 and 1 <= x <= 3000 for x in E)
        assert res.target_size == 1000
        assert res.size_ok

    def test_full_circle(self):
        with pytest.raises(PreconditionError):
            extract_gap_inhomogeneous(Fraction(1, 3), 0, Fraction(1, 2), Progression1D(0, 1, 100))

    def test_no_witness(self):
        res = extract_gap_inhomogeneous(Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Progression1D(0, 1, 500))
        assert not res.found and res.target_size == 0

    def test_random_members(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            q = int(rng.integers(2, 2000))
            theta = Fraction(int(rng.integers(1, q)), q)
            c = Fraction(int(rng.integers(0, 1000)), 1000)
            hw = Fraction(int(rng.integers(20, 240)), 1000)
            window = Progression1D(int(rng.integers(0, 100)), int(rng.integers(1, 4)), int(rng.integers(100, 4000)))
            res = extract_gap_inhomogeneous(theta, c, hw, window)
            if res.found:
                for x in res.progression.elements():
                    assert x in window and torus_distance(x * theta - c) < hw


class TestIrrationality:
    def test_half(self):
        res = certify_irrational([Fraction(1, 2)], 3, 12)
        assert not res.irrational and res.witness == (2,)

    def test_against_exhaustive(self):
        theta = Fraction(377, 1000)
        res = certify_irrational([theta], 5, 10 ** 5)
        expected = all(torus_distance(m * theta) >= Fraction(5, 10 ** 5) for m in range(1, 6))
        assert res.irrational == expected

    def test_forced_failure(self):
        assert not certify_irrational([Fraction(1, 3)], 7, 10).irrational

    def test_two_dimensional(self):
        theta = [Fraction(1, 7), Fraction(2, 7)]
        res = certify_irrational(theta, 3, 100)
        assert not res.irrational
        m = res.witness
        assert torus_distance(sum(a * t for a, t in zip(m, theta))) < Fraction(3, 100)
        assert sum(abs(a) for a in m) <= 3

    def test_budget(self):
        with pytest.raises(ResourceError):
            certify_irrational([Fraction(1, 3)] * 3, 10 ** 4, 10, budget=1000)
