import math

import numpy as np
import pytest

from concentra import rounding
from concentra.errors import DomainError
from concentra.trigpoly import CoeffPoly, Grid, Spectrum, eval_grid, eval_point, \
    fold_power, to_coeffs


def folded_kernel_power(n, L, q):
    return fold_power(to_coeffs(Spectrum(tuple(range(n)), q)), L, q)


class TestHypotheses:
    def test_constant_poly_fails_first(self):
        P = CoeffPoly(np.array([1.0 + 0j]), nonneg=True)
        cond_c, _ = rounding.check_hypotheses(P, 10, 0.5, 2.0)
        assert cond_c is False

    def test_full_kernel_fails_second(self):
        q = 8
        P = to_coeffs(Spectrum(tuple(range(q)), q))   # vanishes off 0
        _, concentr = rounding.check_hypotheses(P, q, 0.1, 2.0)
        assert concentr is False

    def test_folded_power_passes_at_small_c(self):
        q, n, L = 499, 125, 3
        P = rounding.normalize_peak(folded_kernel_power(n, L, q))
        consts = rounding.hypothesis_constants(P, q, 3.0)
        c = 0.9 * min(consts["c_cond_c"], consts["c_concentr"])
        cond_c, concentr = rounding.check_hypotheses(P, q, c, 3.0)
        assert cond_c and concentr

    def test_degree_guard(self):
        P = to_coeffs(Spectrum(tuple(range(6)), 6))
        with pytest.raises(DomainError):
            rounding.check_hypotheses(P, 4, 0.1, 2.0)


class TestBernoulliRound:
    def test_equal_coefficients_keep_everything(self):
        P = to_coeffs(Spectrum((0, 2, 5), 7))
        for seed in (0, 1, 99):
            assert rounding.bernoulli_round(P, seed).freqs == (0, 2, 5)

    def test_zero_or_max_is_deterministic(self):
        c = np.zeros(9)
        c[[1, 4, 6]] = 3.5
        for seed in (0, 7):
            out = rounding.bernoulli_round(CoeffPoly(c.astype(complex), nonneg=True), seed)
            assert out.freqs == (1, 4, 6)

    def test_unbiased_coefficientwise(self, rng):
        q = 50
        alpha = rng.uniform(0, 1, size=q)
        alpha[rng.integers(0, q)] = 1.0
        P = CoeffPoly(alpha.astype(complex), nonneg=True)
        counts = np.zeros(q)
        trials = 10_000
        for seed in range(trials):
            for h in rounding.bernoulli_round(P, seed).freqs:
                counts[h] += 1
        freq = counts / trials
        tol = 3 * np.sqrt(alpha * (1 - alpha) / trials) + 0.01
        assert np.all(np.abs(freq - alpha) <= tol)

    def test_pure_function_of_seed(self):
        P = rounding.normalize_peak(folded_kernel_power(20, 2, 97))
        assert rounding.bernoulli_round(P, 5).freqs == rounding.bernoulli_round(P, 5).freqs

    def test_requires_nonneg(self):
        with pytest.raises(DomainError):
            rounding.bernoulli_round(CoeffPoly(np.array([1j, 1.0])), 0)
        with pytest.raises(DomainError):
            rounding.bernoulli_round(CoeffPoly(np.zeros(3, complex), nonneg=True), 0)

    def test_complex_variant_unimodular(self):
        c = np.array([2.0, 1.0 + 1.0j, 0.0, -3.0])
        out = rounding.bernoulli_round_complex(CoeffPoly(c), 3)
        nz = out.coeffs[np.abs(out.coeffs) > 0]
        assert np.allclose(np.abs(nz), 1.0)
        assert abs(out.coeffs[2]) == 0


class TestVerifyTrial:
    def test_roundtrip_on_idempotent(self):
        P = to_coeffs(Spectrum((0, 3, 4), 9))
        tr = rounding.verify_trial(P, Spectrum((0, 3, 4), 9), 9, 2.0, 0.1)
        assert tr.mean_dev == 0
        assert tr.at_point_margin == pytest.approx(0.1, abs=1e-12)
        assert tr.success

    def test_mean_dev_matches_direct_sum(self, rng):
        q = 61
        P = rounding.normalize_peak(folded_kernel_power(15, 2, q))
        Q = rounding.bernoulli_round(P, 12)
        tr = rounding.verify_trial(P, Q, q, 3.0, 0.2)
        xs = np.arange(q) / q
        dev = sum(abs(eval_point(to_coeffs(Q), x) - eval_point(P, x)) ** 3
                  for x in xs) ** (1 / 3)
        P1 = abs(eval_point(P, 1 / q))
        assert abs(tr.mean_dev - dev / P1) <= 1e-9

    def test_normalization_required(self):
        P = folded_kernel_power(10, 2, 51)     # peak is 10, not 1
        with pytest.raises(DomainError):
            rounding.verify_trial(P, Spectrum((0,), 51), 51, 2.0, 0.1)


class TestMonteCarlo:
    def test_zero_trials_rejected(self):
        P = to_coeffs(Spectrum((0, 1), 5))
        with pytest.raises(DomainError):
            rounding.monte_carlo(P, 5, 2.0, 0.1, 0, 0)

    def test_idempotent_input_always_succeeds(self):
        P = to_coeffs(Spectrum((0, 1, 3), 8))
        rep = rounding.monte_carlo(P, 8, 2.0, 0.1, 25, 4)
        assert rep.frequency == 1.0

    def test_bit_identical_repeat(self):
        P = folded_kernel_power(30, 3, 127)
        a = rounding.monte_carlo(P, 127, 3.0, 0.3, 40, 9)
        b = rounding.monte_carlo(P, 127, 3.0, 0.3, 40, 9)
        assert a == b

    def test_variance_of_peak_value(self):
        # empirical variance of the rounded value at 1/q tracks sum a(1-a)
        q = 499
        P = rounding.normalize_peak(folded_kernel_power(125, 3, q))
        alpha = P.coeffs.real
        var_true = float(np.sum(alpha * (1 - alpha)))
        Pv = eval_grid(P, Grid(q)).values
        vals = []
        for i in range(800):
            u = np.random.Generator(np.random.Philox(key=[3, i])).random(q)
            keep = (u < alpha).astype(complex)
            vals.append(np.fft.ifft(keep)[1] * q)
        vals = np.array(vals)
        emp = float(np.mean(np.abs(vals - Pv[1]) ** 2))
        assert emp <= var_true * 1.25 + 1.0
        assert emp >= var_true * 0.75 - 1.0


class TestMomentCheck:
    def test_degenerate_probabilities(self):
        rep = rounding.moment_check(np.ones(8), np.array([0, 1, 0, 1, 1, 0, 0, 1.0]),
                                    3.0, 500, 2)
        assert rep.ratio == 0.0

    def test_against_independent_generator(self):
        n, trials = 100, 100_000
        rep = rounding.moment_check(np.ones(n), np.full(n, 0.5), 3.0, trials, 13)
        g = np.random.default_rng(99)   # different generator family
        X = (g.random((trials, n)) < 0.5).astype(float)
        S = (X - 0.5).sum(axis=1)
        oracle = np.mean(np.abs(S) ** 3) / (1 + n / 2) ** 1.5
        assert abs(rep.ratio - oracle) <= 0.1 * oracle

    @pytest.mark.parametrize("p", [3.0, 5.0])
    def test_no_growth_when_doubling_n(self, p):
        r1 = rounding.moment_check(np.ones(200), np.full(200, 0.5), p, 40_000, 21)
        r2 = rounding.moment_check(np.ones(400), np.full(400, 0.5), p, 40_000, 22)
        assert abs(r2.ratio - r1.ratio) <= 0.5 * r1.ratio

    def test_frozen_ceiling(self):
        # calibration grid ceiling: 10x the max ratio observed at freeze time
        for p in (2.5, 3.0, 5.0):
            for n in (20, 200, 2000):
                rep = rounding.moment_check(np.ones(n), np.full(n, 0.5), p, 20_000, 31)
                assert rep.ratio < 12.0

    def test_input_validation(self):
        with pytest.raises(DomainError):
            rounding.moment_check(np.ones(3), np.ones(4) / 2, 3.0, 10, 0)
        with pytest.raises(DomainError):
            rounding.moment_check(np.ones(3), np.array([0.5, 1.5, 0.5]), 3.0, 10, 0)
        with pytest.raises(DomainError):
            rounding.moment_check(np.ones(3), np.ones(3) / 2, 2.0, 10, 0)
