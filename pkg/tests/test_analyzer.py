from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from smalldoubling import GAP2, IntSet, PreconditionError, Progression1D, ResourceError, is_proper
from smalldoubling.analyzer import (
    densest_ap, densest_ap_exhaustive, densest_gap2, dichotomy_check, popular_differences, verify_report,
)
from smalldoubling.constructions import a1_set, gap_subset, random_dense_subset, random_sparse
from smalldoubling.covering import cover_41_40
from smalldoubling.progressions import density_on


def slice_oracle(A, min_len, max_step):
    """Best density over APs inside [min A, max A], by direct slicing of an indicator list."""
    lo, hi = A.min, A.max
    ind = [1 if x in A.as_set() else 0 for x in range(lo, hi + 1)]
    best = None
    for v in range(1, max_step + 1):
        for s in range(len(ind)):
            row = ind[s::v]
            for L in range(min_len, len(row) + 1):
                d = Fraction(sum(row[:L]), L)
                if best is None or d > best:
                    best = d
    return best


class TestDensestAP:
    def test_interval(self):
        P, d = densest_ap(IntSet(range(1, 101)), 50, 4)
        assert P == Progression1D(0, 1, 100) and d == 1

    def test_evens(self):
        P, d = densest_ap(IntSet(range(2, 201, 2)), 50, 4)
        assert P.v == 2 and d == 1 and P.L == 100

    def test_dense_random(self):
        A = random_dense_subset(0, 200, 0.55)
        P, d = densest_ap(A, 50, 4)
        assert d >= Fraction(len(A), 200) - Fraction(1, 20)
        assert density_on(A, P) == d and P.L >= 50

    def test_no_candidate(self):
        assert densest_ap(IntSet([1, 2]), 5, 3) == (None, None)

    def test_against_exhaustive_small(self):
        rng = np.random.default_rng(19)
        for _ in range(60):
            A = IntSet(rng.choice(30, size=int(rng.integers(2, 12)), replace=False).tolist())
            min_len = int(rng.integers(2, 6))
            step = int(rng.integers(1, 6))
            fast = densest_ap(A, min_len, step)
            ref = densest_ap_exhaustive(A, min_len, step)
            assert fast == ref
            if ref[1] is not None:
                assert ref[1] == slice_oracle(A, min_len, step)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            densest_ap(IntSet([1, 2, 3]), 1, 2)
        with pytest.raises(ResourceError):
            densest_ap(IntSet(range(0, 10 ** 6, 7)), 2, 100, budget=1000)


class TestDensestGap:
    def test_full_gap(self):
        Q = GAP2(0, 1, 1000, 10, 10)
        res = densest_gap2(Q.elements(), 100)
        assert res.density == 1
        assert res.gap.elements() == Q.elements()

    def test_ninety_five_percent(self):
        A, Q = gap_subset(3, frac=0.95, L1=10, L2=10)
        res = densest_gap2(A, 80)
        assert res.density >= Fraction(95, 100)
        assert is_proper(res.gap)
        assert density_on(A, res.gap) == res.density

    def test_singleton(self):
        res = densest_gap2(IntSet([1]), 2)
        assert res.gap is None and res.density is None

    def test_popular_differences(self):
        Q = GAP2(0, 1, 1000, 10, 10)
        top = popular_differences(Q.elements(), 3)
        assert 1 in top and 1000 in top

    def test_range_limit(self):
        with pytest.raises(ResourceError):
            densest_gap2(IntSet([0, 10 ** 9]), 2)


class TestDichotomy:
    def test_a1_ap_dense(self):
        A = a1_set(100)
        rep = dichotomy_check(A, Fraction(1, 20), Fraction(1, 10), Fraction(1, 4))
        assert rep.branch == "ap_dense" and rep.density == 1 and rep.witness.L == 100
        assert verify_report(A, rep) == []

    def test_gap_dense(self):
        A, Q = gap_subset(0)
        rep = dichotomy_check(A, Fraction(1, 20), Fraction(1, 10), Fraction(1, 2))
        assert rep.branch == "gap_dense"
        assert rep.density >= Fraction(9, 10)
        assert verify_report(A, rep) == []

    def test_expansion(self):
        A = random_sparse(0)
        rep = dichotomy_check(A, Fraction(1, 20), Fraction(1, 10))
        assert rep.branch == "expansion" and rep.sigma > 4
        assert verify_report(A, rep) == []

    def test_dense_gap_covered_by_combination(self):
        A, Q = gap_subset(0)
        assert cover_41_40(A, Q).holds

    def test_affine_equivariance(self):
        fixtures = [a1_set(40), gap_subset(1, L1=8, L2=12, a2=300)[0], random_sparse(2, 60, 10 ** 6),
                    random_dense_subset(4, 120, 0.7)]
        rng = np.random.default_rng(23)
        for A in fixtures:
            base = dichotomy_check(A, Fraction(1, 20), Fraction(1, 10), Fraction(1, 4))
            for _ in range(3):
                u = int(rng.integers(-10 ** 6, 10 ** 6))
                v = int(rng.choice([-5, -2, -1, 3, 7]))
                B = A.dilate(v).shift(u)
                rep = dichotomy_check(B, Fraction(1, 20), Fraction(1, 10), Fraction(1, 4))
                assert rep.branch == base.branch
                assert rep.sigma == base.sigma
                assert verify_report(B, rep) == []
                if v > 0 and base.witness is not None:
                    assert rep.witness.elements() == base.witness.elements().dilate(v).shift(u)
                    assert rep.density == base.density

    def test_verify_catches_tampering(self):
        A = a1_set(30)
        rep = dichotomy_check(A, Fraction(1, 20), Fraction(1, 10), Fraction(1, 4))
        rep.density = Fraction(1, 3)
        assert verify_report(A, rep)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            dichotomy_check(IntSet(), Fraction(1, 2), Fraction(1, 2))
        with pytest.raises(PreconditionError):
            dichotomy_check(IntSet([1]), 2, Fraction(1, 2))

    def test_inconclusive_keeps_best_candidates(self):
        # three blocks of 12 cannot be covered densely by one AP or GAP of size |A|
        A = a1_set(12)
        rep = dichotomy_check(A, Fraction(1, 20), Fraction(1, 100), Fraction(1))
        assert rep.branch == "inconclusive" and rep.witness is None
        assert rep.sigma <= 4
        assert rep.best_ap is not None and rep.best_ap[1] < Fraction(49, 100)
        assert rep.best_gap is not None and rep.best_gap[1] < Fraction(99, 100)
        assert verify_report(A, rep) == []
