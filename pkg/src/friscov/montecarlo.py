"""Trial orchestration and statistical estimation.

Trials are generated in fixed-size blocks of ``BLOCK_TRIALS`` draws.
Block ``k`` uses an independent substream whose 64-bit seed is
``mix64(master_seed, k)`` (a splitmix64-style finalizer, documented at
:func:`mix64`); inside a block the fading vectors are drawn in a fixed
layout and order.  A trial's randomness therefore depends only on the
master seed and its trial index -- never on the worker pool -- and
results are reduced in block order, so identical ``(master_seed,
trials, configs)`` produce bit-identical estimates regardless of worker
count.  Blocks are dispatched to a thread pool; the heavy lifting is
BLAS matrix multiplication, which releases the GIL.

Estimates of outage, covertness outage, and success probability carry
Wilson 95% confidence intervals (valid near 0/1, where outage
probabilities live).
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytics import ScenarioConfig, GammaFit, gamma_cdf
from .channel import PhaseMode, SelectionMode
from .errors import DomainError
from .surface import (
    PortSelection,
    SurfaceGeometry,
    correlation_matrix,
    default_fixed_preset,
    psd_sqrt,
)

# Trials per substream block. Part of the reproducibility contract:
# changing it changes which substream a trial belongs to.
BLOCK_TRIALS = 4096

# Two-sided 95% normal quantile used by the Wilson interval.
_WILSON_Z = 1.959963984540054


def mix64(master_seed: int, index: int) -> int:
    """Derive the 64-bit substream seed for block ``index``.

    splitmix64 finalizer applied to ``master_seed + (index + 1) *
    0x9E3779B97F4A7C15`` (all arithmetic mod 2**64).
    """
    mask = (1 << 64) - 1
    x = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & mask
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & mask
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & mask
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class MCConfig:
    """Monte Carlo run configuration.

    ``m_o`` is the number of active ports per draw; ``fixed_preset``
    (used by FIXED selection) defaults to the surface's uniform
    sublattice preset when left as None.  ``ris_m_hat`` is the
    fixed-grid baseline's element count (0 follows ``m_o``).
    """

    trials: int
    master_seed: int
    phase_mode: PhaseMode
    selection_mode: SelectionMode
    workers: int = 1
    m_o: int = 36
    fixed_preset: PortSelection | None = None
    ris_m_hat: int = 0

    def __post_init__(self):
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if not (isinstance(self.master_seed, int) and 0 <= self.master_seed < 2**64):
            raise DomainError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            raise DomainError(f"workers must be a positive integer, got {self.workers!r}")
        if not (isinstance(self.m_o, int) and self.m_o >= 1):
            raise DomainError(f"m_o must be a positive integer, got {self.m_o!r}")
        if not (isinstance(self.ris_m_hat, int) and self.ris_m_hat >= 0):
            raise DomainError(f"ris_m_hat must be a non-negative integer, got {self.ris_m_hat!r}")


@dataclass(frozen=True)
class EstimateWithCI:
    """A probability estimate with its Wilson 95% confidence interval."""

    value: float
    ci_low: float
    ci_high: float
    trials: int

    def __post_init__(self):
        if not (0.0 <= self.ci_low <= self.value <= self.ci_high <= 1.0):
            raise DomainError(
                f"interval must satisfy 0 <= ci_low <= value <= ci_high <= 1, "
                f"got ({self.ci_low}, {self.value}, {self.ci_high})"
            )


@dataclass(frozen=True)
class GainSample:
    """Per-trial cascaded gains toward the receiver and the warden."""

    g_b: np.ndarray
    g_w: np.ndarray


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """Wilson score 95% interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError(f"invalid counts: {successes} successes out of {trials} trials")
    z2 = _WILSON_Z * _WILSON_Z
    phat = successes / trials
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = _WILSON_Z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    # At the degenerate counts the bound is exactly 0 or 1; the formula
    # leaves ~1e-18 of rounding residue there.
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def _block_gains(
    sqrt_corr: np.ndarray,
    mc: MCConfig,
    preset: PortSelection | None,
    block_index: int,
    block_trials: int,
) -> tuple[np.ndarray, np.ndarray]:
    size = sqrt_corr.shape[0]
    rng = np.random.default_rng(mix64(mc.master_seed, block_index))
    # Fixed draw layout: [link, re/im, port, trial] with links ordered
    # transmitter side, receiver side, warden side.
    z = rng.standard_normal((3, 2, size, block_trials))
    scale = 1.0 / math.sqrt(2.0)

    if mc.selection_mode is SelectionMode.BEST_PRODUCT:
        a = sqrt_corr @ ((z[0, 0] + 1j * z[0, 1]) * scale)
        b = sqrt_corr @ ((z[1, 0] + 1j * z[1, 1]) * scale)
        c = sqrt_corr @ ((z[2, 0] + 1j * z[2, 1]) * scale)
        products = np.abs(a) * np.abs(b)
        order = np.argsort(-products, axis=0, kind="stable")[: mc.m_o]
        a_sel = np.take_along_axis(a, order, axis=0)
        b_sel = np.take_along_axis(b, order, axis=0)
        c_sel = np.take_along_axis(c, order, axis=0)
    elif mc.selection_mode is SelectionMode.FIXED:
        # Only the selected rows of the correlated vectors are ever
        # used, so correlate with the row-sliced square root.
        rows = sqrt_corr[preset.as_array()]
        a_sel = rows @ ((z[0, 0] + 1j * z[0, 1]) * scale)
        b_sel = rows @ ((z[1, 0] + 1j * z[1, 1]) * scale)
        c_sel = rows @ ((z[2, 0] + 1j * z[2, 1]) * scale)
    elif mc.selection_mode is SelectionMode.RIS_FULL:
        a_sel = sqrt_corr @ ((z[0, 0] + 1j * z[0, 1]) * scale)
        b_sel = sqrt_corr @ ((z[1, 0] + 1j * z[1, 1]) * scale)
        c_sel = sqrt_corr @ ((z[2, 0] + 1j * z[2, 1]) * scale)
    else:
        raise DomainError(f"unknown selection mode {mc.selection_mode!r}")

    terms_b = np.conj(b_sel) * a_sel
    terms_w = np.conj(c_sel) * a_sel
    if mc.phase_mode is PhaseMode.COHERENT:
        g_b = np.abs(terms_b).sum(axis=0) ** 2
        g_w = np.abs(np.sum(np.exp(-1j * np.angle(terms_b)) * terms_w, axis=0)) ** 2
    elif mc.phase_mode is PhaseMode.STATIC:
        g_b = np.abs(terms_b.sum(axis=0)) ** 2
        g_w = np.abs(terms_w.sum(axis=0)) ** 2
    else:
        raise DomainError(f"unknown phase mode {mc.phase_mode!r}")
    return g_b, g_w


@functools.lru_cache(maxsize=8)
def _simulated_gains(mc: MCConfig, geom: SurfaceGeometry) -> GainSample:
    total = geom.num_elements
    if mc.m_o > total:
        raise DomainError(f"m_o={mc.m_o} exceeds the surface's {total} ports")
    preset = mc.fixed_preset
    if mc.selection_mode is SelectionMode.FIXED and preset is None:
        preset = default_fixed_preset(geom, mc.m_o)
    if preset is not None and preset.indices[-1] >= total:
        raise DomainError(f"preset index {preset.indices[-1]} out of range for {total} ports")
    sqrt_corr = psd_sqrt(correlation_matrix(geom))

    n_blocks = (mc.trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS

    def run(block_index: int) -> tuple[np.ndarray, np.ndarray]:
        start = block_index * BLOCK_TRIALS
        count = min(BLOCK_TRIALS, mc.trials - start)
        return _block_gains(sqrt_corr, mc, preset, block_index, count)

    if mc.workers == 1 or n_blocks == 1:
        pieces = [run(k) for k in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            pieces = list(pool.map(run, range(n_blocks)))

    g_b = np.concatenate([p[0] for p in pieces])
    g_w = np.concatenate([p[1] for p in pieces])
    g_b.flags.writeable = False
    g_w.flags.writeable = False
    return GainSample(g_b=g_b, g_w=g_w)


def simulate_gains(mc: MCConfig, geom: SurfaceGeometry) -> GainSample:
    """Per-trial cascaded gains for the given configuration.

    Deterministic in ``(mc.master_seed, mc.trials)`` and independent of
    ``mc.workers``; results are cached, so repeated estimator calls over
    a parameter sweep reuse one simulation.
    """
    return _simulated_gains(mc, geom)


def _affine_estimate(offset: float, scale: float, successes: int, trials: int) -> EstimateWithCI:
    lo, hi = wilson_interval(successes, trials)
    value = offset + scale * (successes / trials)
    return EstimateWithCI(
        value=value,
        ci_low=min(offset + scale * lo, value),
        ci_high=max(offset + scale * hi, value),
        trials=trials,
    )


def _outage_flags(gains: GainSample, cfg: ScenarioConfig) -> np.ndarray:
    snr = (cfg.p_a * cfg.loss_af * cfg.loss_fb / cfg.sigma2_b) * gains.g_b
    return np.log2(1.0 + snr) < cfg.r_b


def _detection_flags(gains: GainSample, cfg: ScenarioConfig, zeta: float) -> np.ndarray:
    observed = cfg.p_a * cfg.loss_af * cfg.loss_fw * gains.g_w + cfg.sigma2_w
    return observed >= zeta


def estimate_op(mc: MCConfig, cfg: ScenarioConfig, geom: SurfaceGeometry) -> EstimateWithCI:
    """Empirical outage probability: capacity below the target rate."""
    gains = simulate_gains(mc, geom)
    outage = int(np.count_nonzero(_outage_flags(gains, cfg)))
    return _affine_estimate(0.0, 1.0, outage, mc.trials)


def estimate_cop(mc: MCConfig, cfg: ScenarioConfig, geom: SurfaceGeometry, zeta: float) -> EstimateWithCI:
    """Empirical covertness outage probability at threshold ``zeta``.

    Scores correct warden decisions: under silence the observed power is
    exactly the noise floor, so that term is the deterministic indicator
    ``zeta > sigma2_w``; under transmission the per-draw detection
    events are averaged.
    """
    gains = simulate_gains(mc, geom)
    detected = int(np.count_nonzero(_detection_flags(gains, cfg, zeta)))
    h0_correct = 1.0 if zeta > cfg.sigma2_w else 0.0
    return _affine_estimate(cfg.p0 * h0_correct, cfg.p1, detected, mc.trials)


def estimate_success(mc: MCConfig, cfg: ScenarioConfig, geom: SurfaceGeometry, zeta: float) -> EstimateWithCI:
    """Empirical success probability at threshold ``zeta``.

    Per-draw joint score: (no outage) * (p0 * false-alarm + p1 *
    missed-detection), with both gains taken from the same draw -- no
    independence between the decode and detection events is assumed.
    """
    gains = simulate_gains(mc, geom)
    no_outage = ~_outage_flags(gains, cfg)
    false_alarm = cfg.sigma2_w >= zeta
    if false_alarm:
        # Detection is then certain under transmission (observed power
        # >= sigma2_w >= zeta), so only the false-alarm term survives.
        joint = int(np.count_nonzero(no_outage))
        return _affine_estimate(0.0, cfg.p0, joint, mc.trials)
    missed = ~_detection_flags(gains, cfg, zeta)
    joint = int(np.count_nonzero(no_outage & missed))
    return _affine_estimate(0.0, cfg.p1, joint, mc.trials)


class EmpiricalCDF:
    """Right-continuous empirical CDF of a sample."""

    def __init__(self, samples):
        data = np.asarray(samples, dtype=float).ravel()
        if data.size == 0:
            raise DomainError("empirical CDF requires a non-empty sample")
        self._sorted = np.sort(data)

    @property
    def size(self) -> int:
        return int(self._sorted.size)

    def __call__(self, x):
        ranks = np.searchsorted(self._sorted, x, side="right")
        return ranks / self._sorted.size


def empirical_cdf(samples) -> EmpiricalCDF:
    """Build the right-continuous empirical CDF of a non-empty sample."""
    return EmpiricalCDF(samples)


def ks_distance(samples, fit: GammaFit) -> float:
    """Kolmogorov-Smirnov distance between a sample and a Gamma fit.

    Supremum of |empirical CDF - fitted CDF| over the sample points,
    evaluated from both one-sided limits at each point.
    """
    data = np.asarray(samples, dtype=float).ravel()
    if data.size == 0:
        raise DomainError("KS distance requires a non-empty sample")
    data = np.sort(data)
    n = data.size
    fitted = np.array([gamma_cdf(fit, float(x)) for x in data])
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return float(max(np.max(upper - fitted), np.max(fitted - lower)))
