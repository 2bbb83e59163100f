import dataclasses
import math

import numpy as np
import pytest

from friscov import (
    DomainError,
    MCConfig,
    PhaseMode,
    PortSelection,
    SelectionMode,
    SurfaceGeometry,
    cascaded_gain,
    correlation_matrix,
    default_fixed_preset,
    draw_channel,
    psd_sqrt,
    reduce,
    ris_baseline_draw,
    sample_correlated_fading,
    select_ports,
    simulate_gains,
    willie_gain,
)
from friscov.channel import bob_phases, ris_grid_geometry


class TestSampleCorrelatedFading:
    def test_identity_covariance(self):
        rng = np.random.default_rng(42)
        n, dim = 50_000, 8
        draws = np.array([sample_correlated_fading(np.eye(dim), rng) for _ in range(n)])
        cov = draws.T.conj() @ draws / n
        assert np.max(np.abs(cov - np.eye(dim))) <= 0.05

    def test_general_covariance(self):
        geom = SurfaceGeometry(6, 6, 1.0, 1.0, 0.125)
        corr = correlation_matrix(geom)
        root = psd_sqrt(corr)
        rng = np.random.default_rng(43)
        n = 50_000
        draws = np.array([sample_correlated_fading(root, rng) for _ in range(n)])
        cov = draws.T.conj() @ draws / n
        assert np.linalg.norm(cov - corr) <= 0.05 * corr.shape[0]

    def test_zero_mean(self):
        rng = np.random.default_rng(44)
        draws = np.array([sample_correlated_fading(np.eye(4), rng) for _ in range(100_000)])
        assert np.max(np.abs(draws.mean(axis=0))) <= 0.02

    def test_dimension_validation(self):
        with pytest.raises(DomainError):
            sample_correlated_fading(np.ones((3, 2)), np.random.default_rng(0))


class TestSelectPorts:
    def test_all_ports_when_m_o_equals_size(self):
        a = np.ones(5, dtype=complex)
        sel = select_ports(a, a, 5, SelectionMode.BEST_PRODUCT)
        assert sel.indices == (0, 1, 2, 3, 4)

    def test_single_port_argmax(self):
        a = np.array([1.0, 3.0, 2.0], dtype=complex)
        b = np.array([1.0, 1.0, 2.0], dtype=complex)
        assert select_ports(a, b, 1, SelectionMode.BEST_PRODUCT).indices == (2,)

    def test_top_two_by_product(self):
        # |a| = (1, 3, 2), |b| = (1, 1, 2): products (1, 3, 4)
        a = np.array([1.0, 3.0j, -2.0], dtype=complex)
        b = np.array([-1.0, 1.0, 2.0j], dtype=complex)
        assert select_ports(a, b, 2, SelectionMode.BEST_PRODUCT).indices == (1, 2)

    def test_ties_break_toward_lower_index(self):
        a = np.ones(4, dtype=complex)
        assert select_ports(a, a, 2, SelectionMode.BEST_PRODUCT).indices == (0, 1)

    def test_fixed_passthrough_and_validation(self):
        a = np.ones(6, dtype=complex)
        preset = PortSelection((1, 4))
        assert select_ports(a, a, 2, SelectionMode.FIXED, preset) is preset
        with pytest.raises(DomainError):
            select_ports(a, a, 3, SelectionMode.FIXED, preset)
        with pytest.raises(DomainError):
            select_ports(a, a, 2, SelectionMode.FIXED, None)

    def test_m_o_out_of_range(self):
        a = np.ones(3, dtype=complex)
        with pytest.raises(DomainError):
            select_ports(a, a, 4, SelectionMode.BEST_PRODUCT)

    def test_ris_full_requires_all(self):
        a = np.ones(3, dtype=complex)
        assert select_ports(a, a, 3, SelectionMode.RIS_FULL).indices == (0, 1, 2)
        with pytest.raises(DomainError):
            select_ports(a, a, 2, SelectionMode.RIS_FULL)


class TestCascadedGain:
    def test_single_port(self):
        a = np.array([2.0 + 1.0j, 0.5], dtype=complex)
        b = np.array([1.0 - 3.0j, 0.5], dtype=complex)
        sel = PortSelection((0,))
        expected = abs(a[0]) ** 2 * abs(b[0]) ** 2
        assert cascaded_gain(a, b, sel, PhaseMode.STATIC) == pytest.approx(expected, rel=1e-12)
        assert cascaded_gain(a, b, sel, PhaseMode.COHERENT) == pytest.approx(expected, rel=1e-12)

    def test_two_port_hand_case(self):
        a = np.array([1.0, 1.0j])
        b = np.array([1.0, 1.0])
        sel = PortSelection((0, 1))
        assert cascaded_gain(a, b, sel, PhaseMode.STATIC) == pytest.approx(2.0, rel=1e-12)
        assert cascaded_gain(a, b, sel, PhaseMode.COHERENT) == pytest.approx(4.0, rel=1e-12)

    def test_coherent_dominates_static(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            dim = int(rng.integers(1, 12))
            a = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            b = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            sel = PortSelection(tuple(range(dim)))
            coherent = cascaded_gain(a, b, sel, PhaseMode.COHERENT)
            static = cascaded_gain(a, b, sel, PhaseMode.STATIC)
            assert coherent >= static - 1e-12 * max(coherent, 1.0)

    def test_global_phase_rotation_invariance(self):
        rng = np.random.default_rng(10)
        a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        sel = PortSelection((0, 2, 5))
        for mode in PhaseMode:
            base = cascaded_gain(a, b, sel, mode)
            rotated = cascaded_gain(np.exp(0.73j) * a, b, sel, mode)
            assert rotated == pytest.approx(base, rel=1e-12)

    def test_selection_out_of_range(self):
        a = np.ones(3, dtype=complex)
        with pytest.raises(DomainError):
            cascaded_gain(a, a, PortSelection((0, 3)), PhaseMode.STATIC)


class TestWillieGain:
    def test_zero_phases_reduce_to_static(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        c = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        sel = PortSelection((1, 3, 4, 7))
        assert willie_gain(a, c, sel, np.zeros(4)) == pytest.approx(
            cascaded_gain(a, c, sel, PhaseMode.STATIC), rel=1e-12)

    def test_single_port_phase_invariant(self):
        a = np.array([1.5 - 0.5j, 1.0])
        c = np.array([0.2 + 2.0j, 1.0])
        sel = PortSelection((0,))
        expected = abs(a[0]) ** 2 * abs(c[0]) ** 2
        for phase in (0.0, 1.0, -2.5):
            assert willie_gain(a, c, sel, np.array([phase])) == pytest.approx(expected, rel=1e-12)

    def test_phase_length_mismatch(self):
        a = np.ones(4, dtype=complex)
        with pytest.raises(DomainError):
            willie_gain(a, a, PortSelection((0, 1)), np.zeros(3))

    def test_receiver_phases_leave_warden_mean_unchanged_when_uncorrelated(self):
        # spacing of five wavelengths: residual port correlation is tiny,
        # so re-phasing toward the receiver does not move the warden's
        # mean gain (the phases are independent of the warden's fading)
        geom = SurfaceGeometry(8, 1, 40.0, 1.0, 0.125)
        kwargs = dict(trials=200_000, master_seed=3, m_o=8,
                      selection_mode=SelectionMode.FIXED,
                      fixed_preset=PortSelection(tuple(range(8))))
        coherent = simulate_gains(MCConfig(phase_mode=PhaseMode.COHERENT, **kwargs), geom)
        static = simulate_gains(MCConfig(phase_mode=PhaseMode.STATIC, **kwargs), geom)
        ratio = coherent.g_w.mean() / static.g_w.mean()
        assert abs(ratio - 1.0) <= 0.05


class TestDrawChannel:
    def test_deterministic_given_stream_state(self, ref_corr):
        root = psd_sqrt(ref_corr)
        draws = [
            draw_channel(root, 36, PhaseMode.COHERENT, SelectionMode.BEST_PRODUCT,
                         np.random.default_rng(77))
            for _ in range(2)
        ]
        assert np.array_equal(draws[0].h_af, draws[1].h_af)
        assert np.array_equal(draws[0].h_fw, draws[1].h_fw)
        assert draws[0].selection == draws[1].selection
        assert draws[0].g_b == draws[1].g_b
        assert draws[0].g_w == draws[1].g_w

    def test_best_product_dominates_fixed_per_draw(self, ref_corr, ref_geom):
        root = psd_sqrt(ref_corr)
        preset = default_fixed_preset(ref_geom, 36)
        for seed in range(20):
            best = draw_channel(root, 36, PhaseMode.COHERENT, SelectionMode.BEST_PRODUCT,
                                np.random.default_rng(seed))
            fixed = draw_channel(root, 36, PhaseMode.COHERENT, SelectionMode.FIXED,
                                 np.random.default_rng(seed), preset=preset)
            assert best.g_b >= fixed.g_b >= 0.0

    def test_gains_are_nonnegative_and_shared_selection(self, ref_corr):
        root = psd_sqrt(ref_corr)
        draw = draw_channel(root, 16, PhaseMode.STATIC, SelectionMode.BEST_PRODUCT,
                            np.random.default_rng(5))
        assert draw.g_b >= 0.0 and draw.g_w >= 0.0
        assert draw.selection.size == 16

    def test_static_mean_matches_trace_bridge(self, ref_geom, ref_corr):
        # mean of the static fixed-selection gain approaches tr(C^2)
        active = reduce(ref_corr, default_fixed_preset(ref_geom, 36))
        expected = float(np.trace(active @ active))
        mc = MCConfig(trials=200_000, master_seed=8, phase_mode=PhaseMode.STATIC,
                      selection_mode=SelectionMode.FIXED, m_o=36)
        gains = simulate_gains(mc, ref_geom)
        assert abs(gains.g_b.mean() - expected) / expected <= 0.025


class TestRisBaseline:
    def test_grid_factorization(self, ref_geom):
        grid = ris_grid_geometry(ref_geom, 36)
        assert (grid.m_x, grid.m_z) == (6, 6)
        assert (grid.w_x, grid.w_z) == (ref_geom.w_x, ref_geom.w_z)

    def test_single_element(self, ref_geom):
        draw = ris_baseline_draw(ref_geom, 1, np.random.default_rng(1))
        expected = abs(draw.h_af[0]) ** 2 * abs(draw.h_fb[0]) ** 2
        assert draw.g_b == pytest.approx(expected, rel=1e-12)

    def test_grid_matches_fixed_sublattice_correlation(self, ref_geom, ref_corr):
        # the 36-element baseline grid occupies exactly the positions of
        # the 36-port uniform sublattice, so the correlation matrices
        # (hence the gain distributions) coincide
        baseline_corr = correlation_matrix(ris_grid_geometry(ref_geom, 36))
        sublattice = reduce(ref_corr, default_fixed_preset(ref_geom, 36))
        assert np.array_equal(baseline_corr, sublattice)

    def test_density_cap(self, ref_geom):
        with pytest.raises(DomainError):
            ris_baseline_draw(ref_geom, 145, np.random.default_rng(0))
        with pytest.raises(DomainError):
            ris_baseline_draw(ref_geom, 20, np.random.default_rng(0), density_cap=16)

    def test_fluid_selection_beats_baseline_mean(self, ref_geom):
        # paired draws: same fading, best-product selection vs the
        # 36-element sublattice (== baseline grid) with coherent phases
        common = dict(trials=20_000, master_seed=21, m_o=36, phase_mode=PhaseMode.COHERENT)
        best = simulate_gains(MCConfig(selection_mode=SelectionMode.BEST_PRODUCT, **common), ref_geom)
        lattice = simulate_gains(MCConfig(selection_mode=SelectionMode.FIXED, **common), ref_geom)
        assert np.all(best.g_b >= lattice.g_b)
        assert best.g_b.mean() >= lattice.g_b.mean()


class TestBobPhases:
    def test_coherent_phases_align_terms(self):
        rng = np.random.default_rng(31)
        a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        sel = PortSelection((0, 2, 3))
        phases = bob_phases(a, b, sel, PhaseMode.COHERENT)
        idx = np.array(sel.indices)
        aligned = np.exp(1j * phases) * np.conj(b[idx]) * a[idx]
        assert np.max(np.abs(np.angle(aligned))) <= 1e-12

    def test_static_phases_are_zero(self):
        a = np.ones(4, dtype=complex)
        assert np.array_equal(bob_phases(a, a, PortSelection((1, 2)), PhaseMode.STATIC), np.zeros(2))
