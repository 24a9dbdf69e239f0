"""Hot numeric kernels for the fading simulator.

Two interchangeable backends for the inner loops that dominate simulation
runtime: sum-of-sinusoids synthesis and threshold-crossing measurement.
The numba-jitted path is used whenever numba imports; set
DIVSTATS_BACKEND=numpy to force the pure-numpy fallback or
DIVSTATS_BACKEND=numba to fail loudly if the jit path is unavailable.
benchmarks/bench_kernels.py times the two against each other.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "HAS_NUMBA", "crossing_stats", "synthesize_sinusoid_sum"]

_CHUNK = 1 << 16


def _load_numba():
    try:
        import numba
    except ImportError:
        return None
    return numba


_choice = os.environ.get("DIVSTATS_BACKEND", "auto").strip().lower() or "auto"
if _choice == "numpy":
    _nb = None
elif _choice in ("auto", "numba"):
    _nb = _load_numba()
    if _choice == "numba" and _nb is None:
        raise ImportError("DIVSTATS_BACKEND=numba requested but numba is not importable")
else:
    raise ValueError(f"unknown DIVSTATS_BACKEND value {_choice!r} "
                     "(expected 'numba', 'numpy' or 'auto')")

HAS_NUMBA = _nb is not None
BACKEND = "numba" if HAS_NUMBA else "numpy"


# -- pure-numpy backend --------------------------------------------------------

def _sos_numpy(omega: np.ndarray, phase: np.ndarray, amplitude: float,
               dt: float, n: int) -> np.ndarray:
    # chunked so the (samples x sinusoids) workspace stays cache-friendly
    out = np.empty(n)
    for s in range(0, n, _CHUNK):
        e = min(s + _CHUNK, n)
        t = np.arange(s, e, dtype=np.float64)[:, None] * dt
        out[s:e] = np.cos(t * omega[None, :] + phase[None, :]).sum(axis=1)
    out *= amplitude
    return out


def _crossings_numpy(x: np.ndarray, thresholds: np.ndarray, dt: float,
                     jump_mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = x[:-1]
    b = x[1:]
    smooth = ~jump_mask
    ups = np.empty(thresholds.size, dtype=np.int64)
    jumps = np.empty(thresholds.size, dtype=np.int64)
    below = np.empty(thresholds.size)
    for k, th in enumerate(thresholds):
        lo_a = a < th
        lo_b = b < th
        up = lo_a & ~lo_b
        down = ~lo_a & lo_b
        ups[k] = int(np.count_nonzero(up & smooth))
        jumps[k] = int(np.count_nonzero(up & jump_mask))
        frac = float(np.count_nonzero(lo_a & lo_b))
        if np.any(up):
            frac += float(((th - a[up]) / (b[up] - a[up])).sum())
        if np.any(down):
            frac += float(((b[down] - th) / (b[down] - a[down])).sum())
        below[k] = dt * frac
    return ups, jumps, below


# -- numba backend ---------------------------------------------------------------

if HAS_NUMBA:
    _njit = _nb.njit
    _prange = _nb.prange

    @_njit(cache=True, parallel=True)
    def _sos_numba(omega, phase, amplitude, dt, n):
        out = np.empty(n)
        nfreq = omega.shape[0]
        for i in _prange(n):
            ti = i * dt
            acc = 0.0
            for l in range(nfreq):
                acc += np.cos(omega[l] * ti + phase[l])
            out[i] = amplitude * acc
        return out

    @_njit(cache=True, parallel=True)
    def _crossings_numba(x, thresholds, dt, jump_mask):
        nth = thresholds.shape[0]
        ups = np.zeros(nth, dtype=np.int64)
        jumps = np.zeros(nth, dtype=np.int64)
        below = np.zeros(nth)
        for k in _prange(nth):
            th = thresholds[k]
            nup = 0
            njump = 0
            frac = 0.0
            for i in range(x.shape[0] - 1):
                a = x[i]
                b = x[i + 1]
                if a < th:
                    if b >= th:
                        if jump_mask[i]:
                            njump += 1
                        else:
                            nup += 1
                        frac += (th - a) / (b - a)
                    else:
                        frac += 1.0
                elif b < th:
                    frac += (b - th) / (b - a)
            ups[k] = nup
            jumps[k] = njump
            below[k] = dt * frac
        return ups, jumps, below


# -- dispatch --------------------------------------------------------------------

def synthesize_sinusoid_sum(omega: np.ndarray, phase: np.ndarray, amplitude: float,
                            dt: float, n: int) -> np.ndarray:
    """Sum of cosines amplitude * sum_l cos(omega[l] * i * dt + phase[l]), i < n."""
    omega = np.ascontiguousarray(omega, dtype=np.float64)
    phase = np.ascontiguousarray(phase, dtype=np.float64)
    if omega.shape != phase.shape or omega.ndim != 1:
        raise ValueError("omega and phase must be equal-length 1-D arrays")
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    if HAS_NUMBA:
        return _sos_numba(omega, phase, float(amplitude), float(dt), int(n))
    return _sos_numpy(omega, phase, float(amplitude), float(dt), int(n))


def crossing_stats(x: np.ndarray, thresholds: np.ndarray, dt: float,
                   jump_mask: np.ndarray | None = None
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-threshold (upcrossings, jump upcrossings, time below).

    An upcrossing is x[i] < th <= x[i+1]; intervals flagged in jump_mask
    count toward the jump tally instead (discontinuities of the sampled
    process, not of its differentiable flow).  Straddling intervals
    contribute their linearly interpolated fraction to the below time.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    thresholds = np.ascontiguousarray(thresholds, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("series must be 1-D with at least two samples")
    if jump_mask is None:
        jump_mask = np.zeros(x.size - 1, dtype=np.bool_)
    else:
        jump_mask = np.ascontiguousarray(jump_mask, dtype=np.bool_)
        if jump_mask.shape != (x.size - 1,):
            raise ValueError("jump_mask must have one entry per sample interval")
    if HAS_NUMBA:
        return _crossings_numba(x, thresholds, float(dt), jump_mask)
    return _crossings_numpy(x, thresholds, float(dt), jump_mask)
