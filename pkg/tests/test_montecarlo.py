import dataclasses
import math

import numpy as np
import pytest

from friscov import (
    DomainError,
    GammaFit,
    MCConfig,
    PhaseMode,
    ScenarioConfig,
    SelectionMode,
    dbm_to_watt,
    default_fixed_preset,
    empirical_cdf,
    estimate_cop,
    estimate_op,
    estimate_success,
    gamma_moment_match,
    ks_distance,
    optimal_threshold,
    outage_probability,
    reduce,
    reg_lower_incomplete_gamma,
    simulate_gains,
)
from friscov.montecarlo import mix64, wilson_interval


def fixed_static(trials=20_000, seed=1, m_o=36, workers=1) -> MCConfig:
    return MCConfig(trials=trials, master_seed=seed, phase_mode=PhaseMode.STATIC,
                    selection_mode=SelectionMode.FIXED, m_o=m_o, workers=workers)


class TestSubstreams:
    def test_mix64_is_deterministic_and_spreads(self):
        assert mix64(1, 0) == mix64(1, 0)
        seeds = {mix64(12345, k) for k in range(1000)}
        assert len(seeds) == 1000
        assert all(0 <= s < 2**64 for s in seeds)

    def test_gains_independent_of_worker_count(self, ref_geom):
        one = simulate_gains(fixed_static(trials=30_000, seed=7, workers=1), ref_geom)
        four = simulate_gains(fixed_static(trials=30_000, seed=7, workers=4), ref_geom)
        assert np.array_equal(one.g_b, four.g_b)
        assert np.array_equal(one.g_w, four.g_w)

    def test_gains_change_with_seed(self, ref_geom):
        a = simulate_gains(fixed_static(trials=5_000, seed=1), ref_geom)
        b = simulate_gains(fixed_static(trials=5_000, seed=2), ref_geom)
        assert not np.array_equal(a.g_b, b.g_b)

    def test_results_are_read_only(self, ref_geom):
        gains = simulate_gains(fixed_static(trials=5_000), ref_geom)
        with pytest.raises(ValueError):
            gains.g_b[0] = 0.0


class TestMCConfigValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(trials=0), dict(master_seed=-1), dict(master_seed=2**64),
        dict(workers=0), dict(m_o=0),
    ])
    def test_rejects(self, kwargs):
        base = dict(trials=10, master_seed=1, phase_mode=PhaseMode.STATIC,
                    selection_mode=SelectionMode.FIXED)
        base.update(kwargs)
        with pytest.raises(DomainError):
            MCConfig(**base)

    def test_m_o_exceeding_ports(self, ref_geom):
        with pytest.raises(DomainError):
            simulate_gains(fixed_static(trials=10, m_o=145), ref_geom)


class TestWilson:
    def test_contains_point_estimate(self):
        for k, n in [(0, 50), (1, 50), (25, 50), (50, 50), (999, 1000)]:
            lo, hi = wilson_interval(k, n)
            assert 0.0 <= lo <= k / n <= hi <= 1.0

    def test_degenerate_counts(self):
        lo, hi = wilson_interval(0, 200)
        assert lo == 0.0 and hi > 0.0
        lo, hi = wilson_interval(200, 200)
        assert hi == 1.0 and lo < 1.0

    def test_invalid(self):
        with pytest.raises(DomainError):
            wilson_interval(5, 4)


class TestEstimators:
    def test_op_zero_rate_is_exactly_zero(self, ref_geom):
        cfg = dataclasses.replace(ScenarioConfig(), r_b=0.0)
        est = estimate_op(fixed_static(trials=5_000), cfg, ref_geom)
        assert est.value == 0.0

    def test_op_saturates_at_high_power(self, ref_geom):
        cfg = dataclasses.replace(ScenarioConfig(), p_a=1e3)
        est = estimate_op(fixed_static(trials=5_000), cfg, ref_geom)
        assert est.value == 0.0

    def test_op_matches_analytic_at_reference_point(self, ref_geom, ref_corr):
        # both sides effectively saturate at 0 dBm transmit power
        cfg = ScenarioConfig()
        fit = gamma_moment_match(reduce(ref_corr, default_fixed_preset(ref_geom, 36)))
        est = estimate_op(fixed_static(trials=200_000), cfg, ref_geom)
        assert abs(est.value - outage_probability(fit, cfg)) <= 0.02

    def test_cop_below_noise_floor_is_exactly_p1(self, ref_geom):
        cfg = ScenarioConfig()
        est = estimate_cop(fixed_static(trials=5_000), cfg, ref_geom, cfg.sigma2_w)
        assert est.value == cfg.p1

    def test_cop_at_huge_threshold_is_exactly_p0(self, ref_geom):
        cfg = ScenarioConfig()
        est = estimate_cop(fixed_static(trials=5_000), cfg, ref_geom, 1.0)
        assert est.value == cfg.p0

    def test_cop_matches_analytic_at_reference_point(self, ref_geom, ref_corr):
        from friscov import cop, fa_probability, md_probability

        cfg = dataclasses.replace(ScenarioConfig(), mu_offset=ScenarioConfig().sigma2_w)
        zeta = optimal_threshold(cfg)
        fit = gamma_moment_match(reduce(ref_corr, default_fixed_preset(ref_geom, 36)))
        analytic = cop(cfg, fa_probability(cfg, zeta), md_probability(fit, cfg, zeta), zeta)
        est = estimate_cop(fixed_static(trials=200_000), cfg, ref_geom, zeta)
        assert abs(est.value - analytic) <= 0.02

    def test_success_degenerate_corner(self, ref_geom):
        # zero rate and a threshold at the noise floor: the only error
        # the warden can make is the certain false alarm
        cfg = dataclasses.replace(ScenarioConfig(), r_b=0.0)
        est = estimate_success(fixed_static(trials=5_000), cfg, ref_geom, cfg.sigma2_w)
        assert est.value == cfg.p0

    def test_success_vanishes_at_power_extremes(self, ref_geom):
        low = dataclasses.replace(ScenarioConfig(), p_a=1e-15)
        high = dataclasses.replace(ScenarioConfig(), p_a=1e3)
        mc = fixed_static(trials=5_000)
        for cfg in (low, high):
            zeta = optimal_threshold(cfg)
            assert estimate_success(mc, cfg, ref_geom, zeta).value <= 1e-3

    def test_ci_brackets_and_range(self, ref_geom):
        mc = fixed_static(trials=2_000)
        for dbm in (-50.0, -40.0, -30.0):
            cfg = dataclasses.replace(ScenarioConfig(), p_a=dbm_to_watt(dbm))
            zeta = optimal_threshold(cfg)
            for est in (estimate_op(mc, cfg, ref_geom),
                        estimate_cop(mc, cfg, ref_geom, zeta),
                        estimate_success(mc, cfg, ref_geom, zeta)):
                assert 0.0 <= est.ci_low <= est.value <= est.ci_high <= 1.0
                assert est.trials == 2_000

    def test_estimates_reproducible_across_worker_counts(self, ref_geom):
        cfg = dataclasses.replace(ScenarioConfig(), p_a=dbm_to_watt(-45.0))
        zeta = optimal_threshold(cfg)
        values = []
        for workers in (1, 3):
            mc = fixed_static(trials=30_000, seed=99, workers=workers)
            values.append((estimate_op(mc, cfg, ref_geom).value,
                           estimate_cop(mc, cfg, ref_geom, zeta).value,
                           estimate_success(mc, cfg, ref_geom, zeta).value))
        assert values[0] == values[1]


class TestEmpiricalCDF:
    def test_step_values(self):
        cdf = empirical_cdf([1.0, 2.0, 3.0])
        assert cdf(2.0) == pytest.approx(2.0 / 3.0)
        assert cdf(0.5) == 0.0
        assert cdf(3.0) == 1.0
        assert cdf(10.0) == 1.0

    def test_right_continuity(self):
        cdf = empirical_cdf([1.0, 2.0])
        assert cdf(1.0) == 0.5
        assert cdf(np.nextafter(1.0, 0.0)) == 0.0

    def test_vector_evaluation(self):
        cdf = empirical_cdf([1.0, 2.0, 3.0, 4.0])
        assert np.allclose(cdf(np.array([0.0, 2.5, 9.0])), [0.0, 0.5, 1.0])

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            empirical_cdf([])


class TestKsDistance:
    def test_single_sample_at_median(self):
        fit = GammaFit(kappa=2.0, theta=1.0)
        lo, hi = 0.0, 20.0
        for _ in range(80):  # bisect the median of the fit
            mid = 0.5 * (lo + hi)
            if reg_lower_incomplete_gamma(2.0, mid / 1.0) < 0.5:
                lo = mid
            else:
                hi = mid
        assert ks_distance([0.5 * (lo + hi)], fit) == pytest.approx(0.5, abs=1e-9)

    def test_all_zero_samples(self):
        assert ks_distance(np.zeros(100), GammaFit(3.0, 2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_true_gamma_sample_is_close(self):
        rng = np.random.default_rng(123)
        kappa, theta = 3.7, 2.1
        sample = rng.gamma(shape=kappa, scale=theta, size=100_000)
        # KS critical value at the 1% level is ~1.63/sqrt(n) ~ 0.0052
        assert ks_distance(sample, GammaFit(kappa, theta)) <= 0.01

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            ks_distance([], GammaFit(1.0, 1.0))
