"""Monte Carlo verification path.

Generates correlated Nakagami fading with Clarke Doppler spectra by
sum-of-sinusoids synthesis, applies the per-sample desired-signal-power SC
selection, and measures empirical outage probability, level crossing rate
and fade duration of the output envelope-ratio process.  Integer-m Nakagami
envelopes are built from 2m independent Gaussian processes, which makes the
simulator inherit the Clarke derivative variances by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import SystemConfig, ValidationError
from .specfun import DomainError

__all__ = [
    "EmpiricalStats",
    "FadingTrace",
    "MAX_SAMPLES",
    "SimulationConfig",
    "g_thresholds_from_z",
    "gen_gaussian_process",
    "gen_nakagami_envelope",
    "measure",
    "select_and_compose",
    "simulate",
]

MAX_SAMPLES = 100_000_000
MIN_RATE_FACTOR = 32.0
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SimulationConfig:
    """Sampling and synthesis parameters for one simulation run."""

    sample_rate: float
    duration: float
    num_sinusoids: int = 64
    seed: int = 0
    warmup: float = 0.0

    def __post_init__(self):
        v = []
        if not (self.sample_rate > 0.0 and math.isfinite(self.sample_rate)):
            v.append(f"sample_rate must be positive, got {self.sample_rate!r}")
        if not (self.duration > 0.0 and math.isfinite(self.duration)):
            v.append(f"duration must be positive, got {self.duration!r}")
        if self.num_sinusoids < 32:
            v.append(f"num_sinusoids must be at least 32, got {self.num_sinusoids!r}")
        if not (0 <= int(self.seed) < 2 ** 64) or self.seed != int(self.seed):
            v.append(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.warmup < 0.0 or not math.isfinite(self.warmup):
            v.append(f"warmup must be nonnegative, got {self.warmup!r}")
        if v:
            raise ValidationError(v)


@dataclass(frozen=True)
class FadingTrace:
    """Sampled envelopes plus the SC-selected ratio process (post warmup).

    desired          : (2, N) branch envelopes x01, x02
    interferers      : (n, 2, N) per-interferer per-branch envelopes
    selected_ratio   : (N,) g(t) = x0(t) / y(t)
    selected_branch  : (N,) 0-based argmax branch indices (ties -> branch 0)
    """

    time_step: float
    desired: np.ndarray
    interferers: np.ndarray
    selected_ratio: np.ndarray
    selected_branch: np.ndarray

    @property
    def num_samples(self) -> int:
        return int(self.selected_ratio.size)

    @property
    def duration(self) -> float:
        return (self.num_samples - 1) * self.time_step


@dataclass(frozen=True)
class EmpiricalStats:
    """Crossing counts and occupancy at one g-domain threshold.

    afd_hat mirrors T = F / N: below_time / upcrossings.  Standard errors
    come from batch means over contiguous trace segments.
    """

    threshold: float
    upcrossings: int
    total_time: float
    below_time: float
    lcr_hat: float
    op_hat: float
    afd_hat: float
    stderr_lcr: float
    stderr_op: float


def gen_gaussian_process(f_m: float, length: int, rate: float,
                         num_sinusoids: int, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean unit-variance Gaussian-like process with Clarke spectrum.

    Sum of num_sinusoids cosines at frequencies f_m cos(theta_l), theta_l and
    the phases independent uniform on [0, 2 pi); the autocorrelation
    approximates J0(2 pi f_m tau).
    """
    theta = rng.uniform(0.0, _TWO_PI, num_sinusoids)
    phase = rng.uniform(0.0, _TWO_PI, num_sinusoids)
    omega = _TWO_PI * f_m * np.cos(theta)
    amplitude = math.sqrt(2.0 / num_sinusoids)
    return kernels.synthesize_sinusoid_sum(omega, phase, amplitude, 1.0 / rate, length)


def _total_samples(sim: SimulationConfig) -> tuple[int, int]:
    n_keep = int(round(sim.duration * sim.sample_rate))
    n_warm = int(round(sim.warmup * sim.sample_rate))
    return n_keep, n_warm


def gen_nakagami_envelope(m: int, omega: float, f_m: float, sim: SimulationConfig,
                          rng: np.random.Generator) -> np.ndarray:
    """Envelope series with Nakagami(m, omega) marginal and Clarke dynamics.

    sqrt(omega / (2m) * sum of 2m squared independent Gaussian processes);
    covers warmup + duration samples (callers discard the warmup).
    """
    if m != int(m) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    n_keep, n_warm = _total_samples(sim)
    total = n_keep + n_warm
    acc = np.zeros(total)
    for _ in range(2 * int(m)):
        gp = gen_gaussian_process(f_m, total, sim.sample_rate, sim.num_sinusoids, rng)
        acc += gp * gp
    return np.sqrt(omega / (2.0 * m) * acc)


def select_and_compose(desired: np.ndarray, interferers: np.ndarray,
                       sigma2: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample SC selection and SINR-ratio composition.

    Branch with the larger desired envelope wins (ties -> branch 0); the
    interference-plus-noise envelope follows the selected branch.
    """
    branch = np.where(desired[0] >= desired[1], 0, 1).astype(np.int8)
    x0 = np.where(branch == 0, desired[0], desired[1])
    wsq = np.where(branch == 0, interferers[:, 0, :], interferers[:, 1, :]) ** 2
    y = np.sqrt(wsq.sum(axis=0) + sigma2)
    return x0 / y, branch


def simulate(cfg: SystemConfig, sim: SimulationConfig) -> FadingTrace:
    """Run one deterministic fading simulation.

    All 2 + 2n envelope processes draw from fresh SeedSequence sub-streams
    (desired branch 1, desired branch 2, then interferer i branch k in i-major
    order), so identical inputs reproduce identical traces bit for bit.
    """
    if sim.sample_rate < MIN_RATE_FACTOR * max(cfg.f_m0, cfg.f_mi):
        raise ValidationError([
            f"sample_rate must be >= {MIN_RATE_FACTOR:g} * max(f_m0, f_mi) "
            f"= {MIN_RATE_FACTOR * max(cfg.f_m0, cfg.f_mi):g} Hz for reliable "
            f"crossing detection, got {sim.sample_rate!r}"])
    n_keep, n_warm = _total_samples(sim)
    total = n_keep + n_warm
    if total > MAX_SAMPLES:
        raise ValidationError([
            f"duration * sample_rate = {total} samples exceeds the "
            f"{MAX_SAMPLES} sample memory bound"])
    if n_keep < 2:
        raise ValidationError(["duration too short: fewer than two retained samples"])
    streams = [np.random.default_rng(s)
               for s in np.random.SeedSequence(sim.seed).spawn(2 + 2 * cfg.n)]
    desired = np.stack([
        gen_nakagami_envelope(cfg.m_S, cfg.omega_S, cfg.f_m0, sim, streams[k])
        for k in range(2)])
    interferers = np.empty((cfg.n, 2, total))
    idx = 2
    for i in range(cfg.n):
        for k in range(2):
            interferers[i, k] = gen_nakagami_envelope(
                cfg.m_I, cfg.omega_I, cfg.f_mi, sim, streams[idx])
            idx += 1
    ratio, branch = select_and_compose(desired, interferers, cfg.sigma2)
    keep = slice(n_warm, total)
    return FadingTrace(
        time_step=1.0 / sim.sample_rate,
        desired=np.ascontiguousarray(desired[:, keep]),
        interferers=np.ascontiguousarray(interferers[:, :, keep]),
        selected_ratio=np.ascontiguousarray(ratio[keep]),
        selected_branch=np.ascontiguousarray(branch[keep]),
    )


def g_thresholds_from_z(z_values) -> np.ndarray:
    """Map SINR thresholds to the g domain: g = sqrt(z)."""
    z = np.asarray(z_values, dtype=float)
    if np.any(z < 0.0):
        raise DomainError("z thresholds must be nonnegative")
    return np.sqrt(z)


def measure(trace: FadingTrace, thresholds, n_batches: int = 16) -> list[EmpiricalStats]:
    """Empirical OP / LCR / AFD of the selected-ratio process at g thresholds.

    Counts positive-going crossings (g_i < th <= g_{i+1}), accumulates time
    below with linear interpolation at crossing instants, and estimates
    standard errors by batch means over n_batches contiguous segments.
    """
    g = trace.selected_ratio
    if g.size < 2:
        raise DomainError("trace must contain at least two samples after warmup")
    th = np.ascontiguousarray(thresholds, dtype=np.float64)
    if th.size == 0:
        raise DomainError("threshold grid is empty")
    dt = trace.time_step
    n_int = g.size - 1
    ups, below = kernels.crossing_stats(g, th, dt)
    total_time = n_int * dt

    n_batches = max(2, min(n_batches, n_int))
    edges = np.linspace(0, n_int, n_batches + 1).astype(np.int64)
    lcr_b = np.empty((n_batches, th.size))
    op_b = np.empty((n_batches, th.size))
    for k in range(n_batches):
        seg = g[edges[k]:edges[k + 1] + 1]
        b_ups, b_below = kernels.crossing_stats(seg, th, dt)
        b_time = (seg.size - 1) * dt
        lcr_b[k] = b_ups / b_time
        op_b[k] = b_below / b_time
    stderr_lcr = lcr_b.std(axis=0, ddof=1) / math.sqrt(n_batches)
    stderr_op = op_b.std(axis=0, ddof=1) / math.sqrt(n_batches)

    out = []
    for k in range(th.size):
        nu = int(ups[k])
        bt = float(below[k])
        if nu > 0:
            afd_hat = bt / nu
        else:
            afd_hat = math.inf if bt > 0.0 else 0.0
        out.append(EmpiricalStats(
            threshold=float(th[k]),
            upcrossings=nu,
            total_time=total_time,
            below_time=bt,
            lcr_hat=nu / total_time,
            op_hat=bt / total_time,
            afd_hat=afd_hat,
            stderr_lcr=float(stderr_lcr[k]),
            stderr_op=float(stderr_op[k]),
        ))
    return out
