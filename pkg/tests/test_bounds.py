import math

import numpy as np
import pytest

from concentra import bounds
from concentra.errors import DomainError


def closed_B2(t):
    return math.pi ** 2 * t / math.sin(math.pi * t) ** 2


def closed_A2(t):
    return math.pi ** 2 * t / (4 * math.sin(math.pi * t) ** 2)


def closed_B4(t):
    # fourth-power case: the sum is the autocorrelation-square mass 2t^3/3
    return 2 * math.pi ** 4 * t ** 3 / (3 * math.sin(math.pi * t) ** 4)


GRID_50 = [i / 128 for i in range(13, 63)]     # dyadic grid in [0.1, 0.49]


class TestSeriesValues:
    def test_B2_closed_form_spot(self):
        for t in (0.1, 0.25, 0.4):
            ev = bounds.eval_B(2.0, t, tol=1e-9)
            assert abs(ev.value - closed_B2(t)) <= 2e-9
            assert ev.tail_bound <= 1e-9

    def test_B2_against_direct_partial_sum(self):
        # independent oracle: 10^7-term direct summation, bounded by envelope
        t = 0.3203125
        k = np.arange(1, 10 ** 7 + 1, dtype=np.float64)
        x = math.pi * t * k
        partial = (math.pi * t / math.sin(math.pi * t)) ** 2 \
            * (1 + 2 * float(np.sum((np.sin(x) / x) ** 2)))
        ev = bounds.eval_B(2.0, t, tol=1e-10)
        env = 2 / math.sin(math.pi * t) ** 2 / 10 ** 7
        assert partial <= ev.value + 1e-10
        assert ev.value - partial <= env + 1e-10

    def test_B4_closed_form(self):
        for t in (0.15, 0.25, 0.35):
            ev = bounds.eval_B(4.0, t, tol=1e-11)
            assert abs(ev.value - closed_B4(t)) <= 1e-9

    def test_B10_below_coarse_majorant(self):
        ev = bounds.eval_B(10.0, 0.25, tol=1e-10)
        assert ev.value <= (math.pi / 2) ** 10 + 2 * bounds.zeta_value(10.0) * 4.0 ** 10

    def test_A2_closed_form_grid(self):
        for t in GRID_50:
            ev = bounds.eval_A(2.0, t, tol=1e-11)
            assert abs(ev.value - closed_A2(t)) <= 2e-11

    def test_A2_quarter(self):
        ev = bounds.eval_A(2.0, 0.25, tol=1e-12)
        assert abs(ev.value - math.pi ** 2 / 8) <= 1e-11

    def test_A40_quarter_direct(self):
        ev = bounds.eval_A(40.0, 0.25, tol=1e-13)
        want = sum((2 * k + 1.0) ** -40 for k in range(40))
        assert abs(ev.value - want) <= 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bounds.eval_B(1.0, 0.2)
        with pytest.raises(DomainError):
            bounds.eval_B(2.0, 0.6)
        with pytest.raises(DomainError):
            bounds.eval_A(2.0, 0.0)

    def test_near_divergence_is_finite_and_honest(self):
        ev = bounds.eval_B(1.01, 0.25, tol=1e-6)
        assert math.isfinite(ev.value) and ev.value > 0
        assert ev.tail_bound > ev.tol      # honest: request not met
        assert not ev.converged


class TestTailRigor:
    @pytest.mark.parametrize("lam", [2.0, 2.5, 3.0, 4.0, 10.0])
    def test_quadrupling_terms_stays_within_bound(self, lam):
        for t in (0.11, 0.25, 0.371, 0.5):
            for f in (bounds.eval_B, bounds.eval_A):
                e1 = f(lam, t, tol=1e-14, max_terms=2 ** 16)
                e2 = f(lam, t, tol=1e-14, max_terms=2 ** 18)
                assert abs(e1.value - e2.value) < e1.tail_bound

    def test_A_monotone_in_lam(self):
        for t in (0.1, 0.2, 0.3, 0.45):
            vals = [bounds.eval_A(lam, t, tol=1e-10).value
                    for lam in (1.5, 2.0, 3.0, 5.0, 9.0)]
            assert all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))


class TestMinimization:
    def test_chain_consistency(self):
        m = bounds.minimize_over_t("B", 2.0)
        g2 = bounds.gamma2_sharp()
        assert abs(2.0 / m.value - g2.value) <= 1e-6
        ga = bounds.gamma_star_lower(2.0)
        assert abs(ga.value - 2 * g2.value) <= 1e-6

    def test_A2_minimizer_stationarity(self):
        # argmin localization is noise-limited at sqrt(series tol) on the
        # flat basin, hence the tolerance on the first-order condition
        m = bounds.minimize_over_t("A", 2.0, refine_tol=1e-10)
        x = math.pi * m.t_star
        assert abs(math.tan(x) - 2 * x) <= 1e-4
        assert abs(m.value - 1.0839) <= 1e-3

    def test_B2_min_value(self):
        m = bounds.minimize_over_t("B", 2.0)
        assert abs(m.value - 2 / 0.4613) <= 2e-3

    def test_result_below_random_probes(self, rng):
        for which, lam in (("B", 2.0), ("B", 3.0), ("A", 2.0)):
            m = bounds.minimize_over_t(which, lam)
            f = bounds.eval_A if which == "A" else bounds.eval_B
            ts = rng.uniform(1e-4, 0.5, size=64)
            assert all(m.value <= f(lam, float(t), tol=1e-8).value + 1e-9
                       for t in ts)

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.minimize_over_t("B", 1.0)
        with pytest.raises(DomainError):
            bounds.minimize_over_t("C", 2.0)


class TestConstants:
    def test_gamma2(self):
        g = bounds.gamma2_sharp()
        assert 0.4608 <= g.value <= 0.4618
        assert abs(math.tan(g.argmax) - 2 * g.argmax) <= 1e-6
        # any sample point sits below the supremum
        assert 2 * math.sin(math.pi / 2) ** 2 / (math.pi * math.pi / 2) < g.value

    def test_gamma4(self):
        g = bounds.gamma4_sharp_lower()
        assert 0.495 < g.value <= 0.5
        m = bounds.minimize_over_t("B", 4.0)
        assert abs(g.value - 2.0 / m.value) <= 1e-6

    def test_gamma_sharp_lower_p3(self):
        assert bounds.gamma_sharp_lower(3.0).value > 0.483

    def test_gamma_sharp_lower_near_two(self):
        assert bounds.gamma_sharp_lower(2.01).value >= 0.46

    def test_gamma_sharp_lower_at_most_two_uses_single_power(self):
        g = bounds.gamma_sharp_lower(1.5)
        assert len(g.certificate["L_sweep"]) == 1

    def test_asymptote_lam_100(self):
        a = bounds.asymptote_scan(100.0)
        assert abs(a.value - 4.13273) <= 0.1 * 4.13273

    def test_gamma_star_lower(self):
        assert abs(bounds.gamma_star_lower(2.0).value - 0.9226) <= 1e-3
        assert bounds.gamma_star_lower(40.0).value >= 0.999
        assert abs(bounds.gamma_star_lower(1.999).value - 0.9226) <= 1e-3

    def test_gamma1_chain(self):
        g = bounds.gamma1_certified_lower(1.999)
        assert g.value > 0.96
        assert abs(g.value - 0.96053) <= 1e-3
        assert bounds.gamma1_certified_lower(1.5).value < g.value
        with pytest.raises(DomainError):
            bounds.gamma1_certified_lower(2.0)
        with pytest.raises(DomainError):
            bounds.gamma1_certified_lower(1.0)


class TestMajorant:
    def test_hand_value(self):
        want = math.pi ** 2 / 4 + 4 * math.pi ** 2 / 3
        assert abs(bounds.K_upper(2.0, 0.5) - want) <= 1e-9

    def test_majorizes_B(self, rng):
        for _ in range(200):
            lam = float(rng.uniform(1.1, 20.0))
            t = float(rng.uniform(0.01, 0.5))
            ev = bounds.eval_B(lam, t, tol=1e-3)
            assert ev.value <= bounds.K_upper(lam, t) * (1 + 1e-12) + ev.tail_bound

    def test_large_lam_dominated_by_zeta_term(self):
        lam = 40.0
        t = 0.25
        assert bounds.K_upper(lam, t) >= 2 * bounds.zeta_value(lam) * t ** -lam

    def test_zeta(self):
        assert abs(bounds.zeta_value(2.0) - math.pi ** 2 / 6) <= 1e-12
