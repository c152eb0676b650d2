"""Monte Carlo diagnostics: tails, Poisson intensity, pair tails, ratios.

Statistical assertions use explicit independent oracles: the central
limit theorem with the erfc-based Gaussian tail for product sums, a
second independent simulation for the joint pair tail, and closed-form
arithmetic for the exact pieces.  Tolerances are 3 binomial standard
errors unless the quantity is deterministic.
"""

import math

import numpy as np
import pytest
import scipy.stats

from tensormax import (
    PairTailSpec,
    PopulationSpec,
    SeedSpec,
    TailEstimate,
    b1_bound,
    estimate_lambda,
    estimate_pair_tail,
    estimate_single_tail,
    lambda_limit,
    moderate_deviation_ratio,
    normal_upper_tail,
    stein_chen_report,
)
from tensormax.populations import RADEMACHER, STANDARD_NORMAL

NORMAL = PopulationSpec(STANDARD_NORMAL)
SEED = SeedSpec(2025, 0)


class TestTailEstimateArithmetic:
    def test_probability_and_se_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            reps = int(rng.integers(1, 10**6))
            hits = int(rng.integers(0, reps + 1))
            est = TailEstimate.from_counts(hits, reps)
            assert est.probability == hits / reps
            assert est.std_error == math.sqrt(est.probability * (1 - est.probability) / reps)

    def test_zero_hits_honest(self):
        est = TailEstimate.from_counts(0, 1000)
        assert est.probability == 0.0 and est.std_error == 0.0


class TestNormalUpperTail:
    def test_against_scipy(self):
        for x in np.linspace(0.0, 8.0, 33):
            assert normal_upper_tail(x) == pytest.approx(scipy.stats.norm.sf(x), rel=1e-13)


class TestSingleTail:
    def test_zero_threshold_forced_to_one(self):
        est = estimate_single_tail(NORMAL, 10, 2, 0.0, 500, SEED)
        assert est.probability == 1.0 and est.hits == est.reps == 500

    def test_clt_oracle_m2(self):
        # products of two standard normals have mean 0 variance 1, so at
        # n = 500 the scaled sum is near-Gaussian at a bulk threshold
        reps = 10**5
        est = estimate_single_tail(NORMAL, 500, 2, 1.96, reps, SEED)
        target = 2.0 * normal_upper_tail(1.96)
        assert abs(est.probability - target) <= 3.0 * est.std_error + 3e-4

    def test_unreachable_threshold_gives_zero(self):
        est = estimate_single_tail(NORMAL, 500, 2, 10.0, 10**4, SEED)
        assert est.hits == 0 and est.probability == 0.0

    def test_monotone_in_threshold_common_seed(self):
        probs = [
            estimate_single_tail(NORMAL, 100, 2, thr, 20_000, SEED).probability
            for thr in (0.5, 1.0, 1.5, 2.5)
        ]
        assert probs == sorted(probs, reverse=True)

    def test_deterministic_and_worker_invariant(self):
        a = estimate_single_tail(NORMAL, 50, 2, 1.0, 30_000, SeedSpec(1, 2))
        b = estimate_single_tail(NORMAL, 50, 2, 1.0, 30_000, SeedSpec(1, 2))
        c = estimate_single_tail(NORMAL, 50, 2, 1.0, 30_000, SeedSpec(1, 2), workers=2)
        assert a == b == c

    def test_validation(self):
        with pytest.raises(ValueError, match="m"):
            estimate_single_tail(NORMAL, 10, 1, 1.0, 10, SEED)
        with pytest.raises(ValueError, match="reps"):
            estimate_single_tail(NORMAL, 10, 2, 1.0, 0, SEED)


class TestLambda:
    def test_limit_field_closed_form(self):
        rep = estimate_lambda(2.0, 50, 20, 2, NORMAL, 1000, SEED)
        assert rep.lambda_limit == pytest.approx(0.3678794, abs=1e-7)
        assert rep.lambda_limit == lambda_limit(2.0)

    def test_lambda_hat_scales_single_tail(self):
        rep = estimate_lambda(0.0, 100, 10, 2, NORMAL, 5000, SEED)
        assert rep.lambda_hat == math.comb(10, 2) * rep.single_tail.probability
        assert rep.b1_bound == b1_bound(10, 2, rep.single_tail.probability)

    def test_monotone_in_z_common_random_numbers(self):
        lo = estimate_lambda(-2.0, 200, 10, 2, NORMAL, 50_000, SEED)
        hi = estimate_lambda(2.0, 200, 10, 2, NORMAL, 50_000, SEED)
        assert lo.lambda_hat > hi.lambda_hat
        assert lo.threshold < hi.threshold

    def test_advisory_on_small_reps(self):
        rep = estimate_lambda(0.0, 50, 40, 2, NORMAL, 100, SEED)
        assert rep.advisory and "hits" in rep.advisory[0]


class TestB1Bound:
    def test_worked_value(self):
        assert b1_bound(10, 2, 1e-3) == pytest.approx(1.8e-3, rel=1e-12)

    def test_zero_tail(self):
        assert b1_bound(10, 2, 0.0) == 0.0

    def test_asymptotic_tail_decay(self):
        # with the asymptotic single tail m!/p**m at z = 0 the bound is
        # C(p,m) * m^2 * p^(m-1) * (m!/p^m)^2, decaying like 1/p
        val = b1_bound(100, 2, 2.0 / 100**2)
        assert val == pytest.approx(4950 * 4 * 100 * (2e-4) ** 2, rel=1e-12)
        assert b1_bound(1000, 2, 2.0 / 1000**2) < val

    def test_quadratic_scaling(self):
        assert b1_bound(20, 3, 2e-4) == pytest.approx(4.0 * b1_bound(20, 3, 1e-4), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError, match="single_tail"):
            b1_bound(10, 2, 1.5)


class TestPairTail:
    def test_vanishing_threshold_gives_one(self):
        pspec = PairTailSpec(s=1, a_n=1e-9, n=50, p=10, m=2, spec=NORMAL)
        est = estimate_pair_tail(pspec, 2000, SEED)
        assert est.probability == 1.0

    def test_agrees_with_independent_resimulation(self):
        # oracle: a from-scratch simulation of the same joint event with
        # a different seed; agreement within 3 combined standard errors
        pspec = PairTailSpec(s=1, a_n=1.0, n=200, p=20, m=2, spec=NORMAL)
        reps = 10**5
        est = estimate_pair_tail(pspec, reps, SEED)

        rng = np.random.default_rng(987654321)
        thr = 1.0 * math.sqrt(200 * math.log(20))
        hits = 0
        oracle_reps = 10**5
        for _ in range(10):
            block = oracle_reps // 10
            xi = rng.standard_normal((block, 200))
            eta = rng.standard_normal((block, 200))
            zeta = rng.standard_normal((block, 200))
            s1 = np.abs((xi * eta).sum(axis=1))
            s2 = np.abs((xi * zeta).sum(axis=1))
            hits += int(np.count_nonzero((s1 >= thr) & (s2 >= thr)))
        oracle = hits / oracle_reps
        se = math.sqrt(est.probability * (1 - est.probability) / reps)
        se_o = math.sqrt(oracle * (1 - oracle) / oracle_reps)
        assert abs(est.probability - oracle) <= 3.0 * (se + se_o)

    def test_monotone_in_threshold_common_seed(self):
        # common random numbers nest the exceedance events exactly
        probs = [
            estimate_pair_tail(
                PairTailSpec(s=1, a_n=a, n=100, p=10, m=2, spec=NORMAL), 20_000, SEED
            ).probability
            for a in (0.3, 0.6, 0.9, 1.2)
        ]
        assert probs == sorted(probs, reverse=True)
        assert probs[0] > probs[-1]

    def test_validation(self):
        with pytest.raises(ValueError, match="s"):
            PairTailSpec(s=2, a_n=1.0, n=10, p=10, m=2, spec=NORMAL)
        with pytest.raises(ValueError, match="a_n"):
            PairTailSpec(s=1, a_n=0.0, n=10, p=10, m=2, spec=NORMAL)


class TestModerateDeviationRatio:
    def test_symmetric_point(self):
        # at x = 0 the one-sided tail of the symmetric product sum is 1/2
        rep = moderate_deviation_ratio(NORMAL, 2, 100, 0.0, 10**6, SEED)
        assert rep.gaussian_tail == 0.5
        assert 0.99 <= rep.ratio <= 1.01

    def test_bulk_gaussian_equivalence(self):
        rep = moderate_deviation_ratio(NORMAL, 2, 2000, 2.0, 10**5, SEED)
        assert abs(rep.p_hat - rep.gaussian_tail) <= 3.0 * rep.std_error + 1e-3
        assert 0.8 <= rep.ratio <= 1.2

    def test_rademacher_products(self):
        spec = PopulationSpec(RADEMACHER)
        rep = moderate_deviation_ratio(spec, 2, 2000, 2.0, 10**5, SEED)
        assert 0.8 <= rep.ratio <= 1.2

    def test_advisory_flag_for_rare_x(self):
        rep = moderate_deviation_ratio(NORMAL, 2, 100, 6.0, 1000, SEED)
        assert rep.advisory

    def test_validation(self):
        with pytest.raises(ValueError, match="x"):
            moderate_deviation_ratio(NORMAL, 2, 10, -1.0, 10, SEED)


class TestSteinChenReport:
    def test_full_report_contains_all_overlaps(self):
        rep = stein_chen_report(0.0, 30, 8, 3, NORMAL, 2000, SEED, a_n=0.5, pair_reps=2000)
        assert set(rep.psi_estimates) == {1, 2}
        assert rep.lambda_hat >= 0.0
        assert rep.b1_bound >= 0.0
        obj = rep.to_json()
        assert obj["psi_estimates"].keys() == {"1", "2"}
