"""Closed-form statistics of the dual-SC output envelope ratio and SINR.

Covers the branch and combiner envelope densities, the envelope-ratio /
SINR density and CDF (outage probability), the general quadrature form of
the average level crossing rate, its closed forms for the general,
interference-limited and noise-limited regimes, the average fade duration,
and threshold sweeps.

Conventions: z is the SINR threshold, g = sqrt(z) the envelope-ratio
threshold, t = z / mu the normalized threshold.  Alternating finite sums
are accumulated as (sign, log magnitude) pairs and compensated-summed, so
large noise-to-interference scales c neither overflow nor lose the shared
exp(c) factor.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import specfun
from .model import Regime, SystemConfig, derive
from .specfun import ConvergenceError, DEFAULT_QUAD, DomainError, QuadratureSpec

__all__ = [
    "Normalization",
    "RegimeError",
    "StatCurve",
    "Statistic",
    "afd",
    "default_threshold_grid",
    "envelope_ratio_pdf",
    "interference_envelope_pdf",
    "interference_plus_noise_pdf",
    "lcr_awgn_only",
    "lcr_general",
    "lcr_sinr",
    "lcr_sir",
    "lcr_sir_equal_doppler",
    "lcr_sir_series",
    "level_crossing_rate",
    "nakagami_cdf",
    "nakagami_pdf",
    "outage_probability",
    "selected_envelope_pdf",
    "series_integral_identity",
    "sinr_pdf",
    "sir_cdf",
    "sir_envelope_ratio_pdf",
    "sir_envelope_ratio_pdf_series",
    "sweep",
    "z_scale",
]

_LOG_8PI = math.log(8.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class RegimeError(RuntimeError):
    """Statistic requested outside its validity regime; the message names the route."""


def _require_nonneg(name: str, x: float) -> None:
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"{name} must be finite and nonnegative, got {x!r}")


# -- branch and combiner densities -------------------------------------------

def nakagami_pdf(x: float, m: int, omega: float) -> float:
    """Nakagami envelope density (m/omega)^m 2 x^{2m-1} e^{-m x^2/omega} / Gamma(m)."""
    _require_nonneg("x", x)
    if x == 0.0:
        return 0.0
    lp = (m * math.log(m / omega) + math.log(2.0) + (2 * m - 1) * math.log(x)
          - math.lgamma(m) - m * x * x / omega)
    return math.exp(lp)


def nakagami_cdf(x: float, m: int, omega: float) -> float:
    """Nakagami envelope CDF 1 - Gamma(m, m x^2/omega) / Gamma(m)."""
    _require_nonneg("x", x)
    if x == 0.0:
        return 0.0
    lq = specfun.log_upper_incomplete_gamma(m, m * x * x / omega) - math.lgamma(m)
    return -math.expm1(lq)


def selected_envelope_pdf(x: float, cfg: SystemConfig) -> float:
    """Density of the selected desired envelope x0 = max(x01, x02), IID branches."""
    return 2.0 * nakagami_cdf(x, cfg.m_S, cfg.omega_S) * nakagami_pdf(x, cfg.m_S, cfg.omega_S)


def interference_envelope_pdf(w: float, cfg: SystemConfig) -> float:
    """Density of the aggregate interference envelope: Nakagami with severity m_I n."""
    if cfg.omega_I == 0.0:
        raise DomainError("interference envelope undefined for omega_I = 0")
    _require_nonneg("w", w)
    if w == 0.0:
        return 0.0
    mn = cfg.m_I * cfg.n
    lp = (mn * math.log(cfg.m_I / cfg.omega_I) + math.log(2.0)
          + (2 * mn - 1) * math.log(w) - math.lgamma(mn)
          - cfg.m_I * w * w / cfg.omega_I)
    return math.exp(lp)


def interference_plus_noise_pdf(y: float, cfg: SystemConfig) -> float:
    """Density of y = sqrt(w^2 + sigma2); zero below the noise floor sqrt(sigma2)."""
    if cfg.omega_I == 0.0:
        raise DomainError("density degenerates to a point mass at sigma for omega_I = 0; "
                          "use the noise-limited statistics")
    if not math.isfinite(y):
        raise DomainError(f"y must be finite, got {y!r}")
    ssq = y * y - cfg.sigma2
    if ssq < 0.0 or y <= 0.0:
        return 0.0
    mn = cfg.m_I * cfg.n
    if ssq == 0.0:
        if mn > 1:
            return 0.0
        return math.exp(math.log(cfg.m_I / cfg.omega_I) + math.log(2.0 * y))
    lp = (mn * math.log(cfg.m_I / cfg.omega_I) + math.log(2.0 * y)
          + (mn - 1) * math.log(ssq) - math.lgamma(mn)
          - cfg.m_I * ssq / cfg.omega_I)
    return math.exp(lp)


# -- signed-log accumulation of the alternating closed-form sums --------------

def _signed_logsum(signs: Sequence[float], logs: Sequence[float]) -> tuple[float, float]:
    top = max(logs)
    if top == -math.inf:
        return 0.0, -math.inf
    acc = math.fsum(s * math.exp(l - top) for s, l in zip(signs, logs))
    if acc == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, acc), top + math.log(abs(acc))


def _safe_exp(sign: float, lval: float) -> float:
    if sign == 0.0 or lval == -math.inf:
        return 0.0
    if lval < -745.0:
        return 0.0
    return math.copysign(math.exp(lval), sign)


# cancellation (max term magnitude over result) above which the alternating
# sum is re-evaluated in arbitrary precision
_CANCEL_LIMIT_LOG = 4.0 * math.log(10.0)


def _crossing_sum_mp(m_s: int, mn: int, c: float, t: float, half: bool,
                     cancel_log: float) -> tuple[float, float]:
    # Arbitrary-precision re-evaluation of the same finite sum.  In the far
    # tail the alternating binomial weights cancel the leading asymptotic
    # orders of the incomplete gammas, leaving a result exponentially smaller
    # than every term; the working precision tracks the measured cancellation.
    import mpmath

    digits = 30 + int(cancel_log / math.log(10.0))
    for _ in range(6):
        with mpmath.workdps(min(digits, 600)):
            delta = mpmath.mpf(1) / 2 if half else mpmath.mpf(0)
            cm = mpmath.mpf(c)
            tm = mpmath.mpf(t)
            x1 = cm * (1 + tm)
            x2 = cm * (1 + 2 * tm)
            ratio = tm / (1 + 2 * tm)
            ec = mpmath.exp(cm)
            total = mpmath.mpf(0)
            top = mpmath.mpf(0)
            for i in range(1, mn + 1):
                base = ec * mpmath.binomial(mn - 1, i - 1) * (-cm) ** (mn - i)
                a1 = m_s + i - delta
                term = base * (1 + tm) ** (-a1) * mpmath.gammainc(a1, x1)
                total += term
                top = max(top, abs(term))
                for j in range(m_s):
                    term = (-base * (1 + 2 * tm) ** (-a1) * ratio ** j
                            / mpmath.factorial(j) * mpmath.gammainc(a1 + j, x2))
                    total += term
                    top = max(top, abs(term))
            if total == 0:
                return 0.0, -math.inf
            measured = float(mpmath.log(top / abs(total)))
            if digits >= 600 or digits - measured / math.log(10.0) >= 20:
                return float(mpmath.sign(total)), float(mpmath.log(abs(total)))
        digits = 30 + int(measured / math.log(10.0))
    raise ConvergenceError("alternating sum cancellation exceeded precision budget")


def _crossing_sum(m_s: int, mn: int, c: float, t: float, half: bool) -> tuple[float, float]:
    # Shared alternating sum of the ratio PDF (integer gamma orders) and the
    # SINR crossing rate (half-integer orders), the exp(c) factor included:
    #   e^c sum_{i=1}^{mn} C(mn-1, i-1) (-c)^{mn-i}
    #       [ (1+t)^{-(m_s+i-d)} Gamma(m_s+i-d, c(1+t))
    #         - (1+2t)^{-(m_s+i-d)} sum_{j<m_s} (t/(1+2t))^j / j!
    #           Gamma(m_s+i+j-d, c(1+2t)) ],  d = 1/2 for the crossing rate.
    delta = 0.5 if half else 0.0
    x1 = c * (1.0 + t)
    x2 = c * (1.0 + 2.0 * t)
    l1p = math.log1p(t)
    l2p = math.log1p(2.0 * t)
    lc = math.log(c)
    lratio = math.log(t) - l2p
    signs: list[float] = []
    logs: list[float] = []
    for i in range(1, mn + 1):
        lbase = math.log(math.comb(mn - 1, i - 1)) + (mn - i) * lc + c
        si = -1.0 if (mn - i) % 2 else 1.0
        a1 = m_s + i - delta
        signs.append(si)
        logs.append(lbase - a1 * l1p + specfun.log_upper_incomplete_gamma(a1, x1))
        lj = lbase - a1 * l2p
        for j in range(m_s):
            signs.append(-si)
            logs.append(lj + j * lratio - math.lgamma(j + 1.0)
                        + specfun.log_upper_incomplete_gamma(a1 + j, x2))
    sign, lsum = _signed_logsum(signs, logs)
    top = max(logs)
    if sign == 0.0 or top - lsum > _CANCEL_LIMIT_LOG:
        cancel = top - lsum
        if not math.isfinite(cancel):
            cancel = 120.0 * math.log(10.0)
        return _crossing_sum_mp(m_s, mn, c, t, half, min(max(cancel, 0.0),
                                                         500.0 * math.log(10.0)))
    return sign, lsum


def _general_params(cfg: SystemConfig, op_name: str):
    d = derive(cfg)
    if d.regime is Regime.INTERFERENCE_LIMITED:
        raise RegimeError(f"{op_name} needs the general regime; sigma2 is negligible "
                          "here, use the interference-limited form (sir_* / lcr_sir)")
    if d.regime is Regime.NOISE_LIMITED:
        raise RegimeError(f"{op_name} needs the general regime; omega_I = 0 here, "
                          "use the noise-limited form (lcr_awgn_only / Nakagami CDF)")
    return d


# -- envelope ratio and SINR -------------------------------------------------

def envelope_ratio_pdf(g: float, cfg: SystemConfig) -> float:
    """Closed-form density of the envelope ratio g = x0 / y (general regime).

    Matches adaptive quadrature of int_sigma^inf y f_x0(g y) f_y(y) dy.
    """
    d = _general_params(cfg, "envelope_ratio_pdf")
    _require_nonneg("g", g)
    if g == 0.0:
        return 0.0
    t = g * g / d.mu
    mn = cfg.m_I * cfg.n
    sign, lsum = _crossing_sum(cfg.m_S, mn, d.c, t, half=False)
    lpref = (math.log(4.0) - 0.5 * math.log(d.mu) + (cfg.m_S - 0.5) * math.log(t)
             - math.lgamma(cfg.m_S) - math.lgamma(mn))
    return _safe_exp(sign, lpref + lsum)


def sinr_pdf(z: float, cfg: SystemConfig) -> float:
    """Density of the SINR, f_z(z) = f_g(sqrt z) / (2 sqrt z); 0 at z = 0."""
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    rz = math.sqrt(z)
    return envelope_ratio_pdf(rz, cfg) / (2.0 * rz)


def lcr_sinr(z: float, cfg: SystemConfig) -> float:
    """Closed-form average LCR of the SINR at threshold z (general regime)."""
    d = _general_params(cfg, "lcr_sinr")
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    t = z / d.mu
    mn = cfg.m_I * cfg.n
    sign, lsum = _crossing_sum(cfg.m_S, mn, d.c, t, half=True)
    lpref = (0.5 * _LOG_8PI + 0.5 * math.log(cfg.f_m0 ** 2 + cfg.f_mi ** 2 * t)
             + (cfg.m_S - 0.5) * math.log(t) - math.lgamma(cfg.m_S) - math.lgamma(mn))
    return _safe_exp(sign, lpref + lsum)


# -- interference-limited forms ------------------------------------------------

def _require_il(cfg: SystemConfig, op_name: str):
    d = derive(cfg)
    if d.regime is not Regime.INTERFERENCE_LIMITED:
        raise RegimeError(f"{op_name} is the interference-limited form; regime is "
                          f"{d.regime.value} (use envelope_ratio_pdf / lcr_sinr or "
                          "the noise-limited path)")
    return d


def sir_envelope_ratio_pdf(g: float, cfg: SystemConfig) -> float:
    """Density of the signal-to-interference envelope ratio (sigma2 -> 0 limit)."""
    d = _require_il(cfg, "sir_envelope_ratio_pdf")
    _require_nonneg("g", g)
    if g == 0.0:
        return 0.0
    t = g * g / d.mu
    mn = cfg.m_I * cfg.n
    big_m = cfg.m_S + mn
    reg = specfun.regularized_beta(t / (2.0 * t + 1.0), cfg.m_S, big_m)
    if reg <= 0.0:
        return 0.0
    lval = (math.log(4.0) - 0.5 * math.log(d.mu) - specfun.log_beta(cfg.m_S, mn)
            + (cfg.m_S - 0.5) * math.log(t) - big_m * math.log1p(t) + math.log(reg))
    return 0.0 if lval < -745.0 else math.exp(lval)


def _gamma_sum_bracket(order: float, m_s: int, t: float) -> float:
    # Gamma(order) (1+t)^-order - (1+2t)^-order sum_{j<m_s} Gamma(order+j)/j! (t/(1+2t))^j,
    # summed as the exactly equal all-positive tail
    #   Gamma(order) (1+2t)^-order sum_{j>=m_s} (order)_j r^j / j!,  r = t/(1+2t),
    # because (1+t)^-order = (1+2t)^-order (1-r)^-order; this removes the
    # small-t cancellation between the two printed pieces.
    r = t / (1.0 + 2.0 * t)
    lterm = (math.lgamma(order + m_s) - math.lgamma(m_s + 1.0)
             + m_s * math.log(r) - order * math.log1p(2.0 * t))
    term = math.exp(lterm)
    acc = term
    j = m_s
    while j < m_s + 20000:
        term *= (order + j) * r / (j + 1.0)
        acc += term
        j += 1
        if term <= 1e-17 * acc and (order + j) * r < (j + 1.0):
            break
    return acc


def sir_envelope_ratio_pdf_series(g: float, cfg: SystemConfig) -> float:
    """Alternative gamma-series evaluation of the same density.

    Algebraically identical to :func:`sir_envelope_ratio_pdf`; kept as an
    independent arithmetic route for cross-validation.
    """
    d = _require_il(cfg, "sir_envelope_ratio_pdf_series")
    _require_nonneg("g", g)
    if g == 0.0:
        return 0.0
    t = g * g / d.mu
    mn = cfg.m_I * cfg.n
    big_m = cfg.m_S + mn
    bracket = _gamma_sum_bracket(float(big_m), cfg.m_S, t)
    lpref = (math.log(4.0) - 0.5 * math.log(d.mu) + (cfg.m_S - 0.5) * math.log(t)
             - math.lgamma(cfg.m_S) - math.lgamma(mn))
    return bracket * math.exp(lpref)


def sir_cdf(z: float, cfg: SystemConfig) -> float:
    """CDF of the SIR at threshold z (outage probability, interference-limited).

    Closed form in incomplete beta functions of negative argument; if their
    series stall the evaluation falls back to quadrature of the SIR density
    and warns.
    """
    d = _require_il(cfg, "sir_cdf")
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    x = z / d.mu
    mn = cfg.m_I * cfg.n
    b0 = specfun.beta(cfg.m_S, mn)
    try:
        total = (2.0 * (-1.0) ** cfg.m_S / b0
                 * specfun.incomplete_beta_neg(-x, cfg.m_S, 1.0 - cfg.m_S - mn))
        ssum = 0.0
        for j in range(cfg.m_S):
            ssum += (math.comb(cfg.m_S + mn + j - 1, j) * (-0.5) ** j
                     * specfun.incomplete_beta_neg(-2.0 * x, cfg.m_S + j,
                                                   1.0 - cfg.m_S - mn - j))
        total += (-0.5) ** (cfg.m_S - 1) / b0 * ssum
    except ConvergenceError:
        warnings.warn("sir_cdf closed form did not converge; quadrature fallback",
                      RuntimeWarning, stacklevel=2)
        total = specfun.integrate_adaptive(lambda gg: sir_envelope_ratio_pdf(gg, cfg),
                                           0.0, math.sqrt(z), DEFAULT_QUAD)
    return min(1.0, max(0.0, total))


def lcr_sir(z: float, cfg: SystemConfig) -> float:
    """Closed-form average LCR of the SIR at threshold z (interference-limited)."""
    d = _require_il(cfg, "lcr_sir")
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    t = z / d.mu
    mn = cfg.m_I * cfg.n
    bm = cfg.m_S + mn - 0.5
    reg = specfun.regularized_beta(t / (2.0 * t + 1.0), cfg.m_S, bm)
    if reg <= 0.0:
        return 0.0
    lval = (0.5 * _LOG_8PI + 0.5 * math.log(cfg.f_m0 ** 2 + cfg.f_mi ** 2 * t)
            + math.lgamma(bm) - math.lgamma(cfg.m_S) - math.lgamma(mn)
            + (cfg.m_S - 0.5) * math.log(t) - bm * math.log1p(t) + math.log(reg))
    return 0.0 if lval < -745.0 else math.exp(lval)


def lcr_sir_series(z: float, cfg: SystemConfig) -> float:
    """Alternative gamma-series evaluation of the SIR crossing rate.

    Independent arithmetic route for cross-validation of :func:`lcr_sir`.
    """
    d = _require_il(cfg, "lcr_sir_series")
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    t = z / d.mu
    mn = cfg.m_I * cfg.n
    bm = cfg.m_S + mn - 0.5
    bracket = _gamma_sum_bracket(bm, cfg.m_S, t)
    lpref = (0.5 * _LOG_8PI + 0.5 * math.log(cfg.f_m0 ** 2 + cfg.f_mi ** 2 * t)
             + (cfg.m_S - 0.5) * math.log(t) - math.lgamma(cfg.m_S) - math.lgamma(mn))
    return bracket * math.exp(lpref)


def lcr_sir_equal_doppler(z: float, cfg: SystemConfig) -> float:
    """Equal-Doppler reduction of the SIR crossing rate (f_mi = f_m0).

    The Doppler root folds into the threshold power, leaving a single
    (1 + t)^{m_S + m_I n - 1} denominator.
    """
    d = _require_il(cfg, "lcr_sir_equal_doppler")
    if cfg.f_mi != cfg.f_m0:
        raise DomainError("equal-Doppler form requires f_mi == f_m0")
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    t = z / d.mu
    mn = cfg.m_I * cfg.n
    bm = cfg.m_S + mn - 0.5
    reg = specfun.regularized_beta(t / (2.0 * t + 1.0), cfg.m_S, bm)
    if reg <= 0.0:
        return 0.0
    lval = (0.5 * _LOG_8PI + math.log(cfg.f_m0)
            + math.lgamma(bm) - math.lgamma(cfg.m_S) - math.lgamma(mn)
            + (cfg.m_S - 0.5) * math.log(t)
            - (cfg.m_S + mn - 1.0) * math.log1p(t) + math.log(reg))
    return 0.0 if lval < -745.0 else math.exp(lval)


# -- noise-limited forms -------------------------------------------------------

def lcr_awgn_only(g: float, cfg: SystemConfig) -> float:
    """Average LCR of the signal-to-noise envelope ratio g = x0 / sigma.

    Point-mass reduction of the general crossing-rate integral:
    sigma_dx0 / sqrt(2 pi) * f_x0(sigma g).
    """
    d = derive(cfg)
    if d.regime is not Regime.NOISE_LIMITED:
        raise RegimeError("lcr_awgn_only is the noise-limited form; regime is "
                          f"{d.regime.value}")
    _require_nonneg("g", g)
    sigma = math.sqrt(cfg.sigma2)
    return math.sqrt(d.var_dx0) / _SQRT_2PI * selected_envelope_pdf(sigma * g, cfg)


# -- general quadrature LCR (the oracle for the closed forms) ------------------

def lcr_general(g: float, fx0: Callable[[float], float], fy: Callable[[float], float],
                var_dx0: float, var_dwi: float,
                spec: QuadratureSpec = DEFAULT_QUAD,
                support: tuple[float, float] = (0.0, math.inf)) -> float:
    """Average LCR of the envelope ratio from densities alone.

    sqrt((var_dx0 + g^2 var_dwi) / (2 pi)) * int fx0(g y) fy(y) dy over the
    support of fy.  Every closed-form crossing rate is validated against
    this quadrature.
    """
    _require_nonneg("g", g)
    pref = math.sqrt((var_dx0 + g * g * var_dwi) / (2.0 * math.pi))
    integral = specfun.integrate_adaptive(lambda y: fx0(g * y) * fy(y),
                                          support[0], support[1], spec)
    return pref * integral


# -- outage probability, AFD, dispatch ----------------------------------------

def outage_probability(z: float, cfg: SystemConfig,
                       spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Outage probability F_z(z) = P(SINR <= z).

    General regime: adaptive quadrature of the envelope-ratio density over
    [0, sqrt z] (complemented through the tail when sqrt z is far out so the
    mass is never missed).  Interference-limited: closed-form SIR CDF.
    Noise-limited: squared Nakagami branch CDF at sigma sqrt z.
    """
    _require_nonneg("z", z)
    d = derive(cfg)
    if z == 0.0:
        return 0.0
    if d.regime is Regime.NOISE_LIMITED:
        return nakagami_cdf(math.sqrt(cfg.sigma2 * z), cfg.m_S, cfg.omega_S) ** 2
    if d.regime is Regime.INTERFERENCE_LIMITED:
        return sir_cdf(z, cfg)
    root = math.sqrt(z)
    pivot = 3.0 * math.sqrt(d.mu)
    f = lambda gg: envelope_ratio_pdf(gg, cfg)
    if root <= pivot:
        val = specfun.integrate_adaptive(f, 0.0, root, spec)
    else:
        val = 1.0 - specfun.integrate_adaptive(f, root, math.inf, spec)
    return min(1.0, max(0.0, val))


def level_crossing_rate(z: float, cfg: SystemConfig) -> float:
    """Average LCR of the SINR at threshold z, routed by regime."""
    d = derive(cfg)
    if d.regime is Regime.NOISE_LIMITED:
        return lcr_awgn_only(math.sqrt(z), cfg)
    if d.regime is Regime.INTERFERENCE_LIMITED:
        return lcr_sir(z, cfg)
    return lcr_sinr(z, cfg)


def afd(z: float, cfg: SystemConfig, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Average fade duration T_z(z) = F_z(z) / N_z(z).

    Returns 0.0 at z = 0 (the 0/0 boundary resolves to sqrt z scaling) and
    +inf when the crossing rate underflows to zero while the outage
    probability is positive.
    """
    _require_nonneg("z", z)
    if z == 0.0:
        return 0.0
    f = outage_probability(z, cfg, spec)
    n = level_crossing_rate(z, cfg)
    if n == 0.0:
        return math.inf if f > 0.0 else 0.0
    return f / n


def series_integral_identity(a: int, b: int, c: float, zmu: float) -> float:
    """Closed form of int_0^{zmu} t^{a-1} (1+t)^{-b} e^{-c t} dt.

    (-1)^a e^c c^{b-1} sum_{k<a} C(a-1, k) (-c)^{-k}
        [Gamma(k+1-b, c(1+zmu)) - Gamma(k+1-b, c)]
    for positive integers a, b and c > 0; the building block behind the
    (deliberately unexpanded) five-fold closed-form SINR CDF.  Orders
    k+1-b <= 0 go through the extended integer incomplete gamma.
    """
    if a != int(a) or a < 1:
        raise DomainError(f"a must be a positive integer, got {a!r}")
    if b != int(b) or b < 1:
        raise DomainError(f"b must be a positive integer, got {b!r}")
    if not (math.isfinite(c) and c > 0.0):
        raise DomainError(f"c must be positive, got {c!r}")
    if not (math.isfinite(zmu) and zmu > 0.0):
        raise DomainError(f"zmu must be positive, got {zmu!r}")
    a = int(a)
    b = int(b)
    parts = []
    for k in range(a):
        order = k + 1 - b
        diff = (specfun.upper_incomplete_gamma_int_ext(order, c * (1.0 + zmu))
                - specfun.upper_incomplete_gamma_int_ext(order, c))
        parts.append(math.comb(a - 1, k) * (-c) ** (-k) * diff)
    return (-1.0) ** a * math.exp(c) * c ** (b - 1) * math.fsum(parts)


# -- sweeps --------------------------------------------------------------------

class Statistic(enum.Enum):
    OUTAGE_PROB = "op"
    LCR = "lcr"
    AFD = "afd"
    PDF = "pdf"


class Normalization(enum.Enum):
    RAW = "raw"
    DOPPLER_NORMALIZED = "doppler"


@dataclass(frozen=True)
class StatCurve:
    """A statistic sampled over a strictly increasing threshold grid.

    values may hold NaN only where diagnostics records the failure; under
    DOPPLER_NORMALIZED the LCR is divided by f_m0 and the AFD multiplied by
    it (matching normalized-axis plots), other statistics are unaffected.
    """

    thresholds: np.ndarray
    values: np.ndarray
    statistic: Statistic
    normalization: Normalization = Normalization.RAW
    domain: str = "z"
    diagnostics: tuple = ()

    def __post_init__(self):
        th = np.asarray(self.thresholds, dtype=float)
        va = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "thresholds", th)
        object.__setattr__(self, "values", va)
        if th.ndim != 1 or th.shape != va.shape:
            raise DomainError("thresholds and values must be equal-length 1-D arrays")
        if th.size == 0:
            raise DomainError("empty threshold grid")
        if np.any(th < 0.0) or np.any(np.diff(th) <= 0.0):
            raise DomainError("thresholds must be nonnegative and strictly increasing")
        if self.domain not in ("z", "g"):
            raise DomainError(f"domain must be 'z' or 'g', got {self.domain!r}")
        if np.any(np.isinf(va)):
            raise DomainError("curve values must not be infinite")
        if np.any(np.isnan(va)) and not self.diagnostics:
            raise DomainError("NaN gaps require diagnostics entries")

    def th0(self) -> float:
        """Threshold of the curve maximum (first grid index attaining it)."""
        return float(self.thresholds[int(np.nanargmax(self.values))])


def z_scale(cfg: SystemConfig) -> float:
    """Natural threshold scale: mu when interference exists, else the
    per-component scattered SNR omega_S / (m_S sigma2)."""
    d = derive(cfg)
    if d.regime is Regime.NOISE_LIMITED:
        return cfg.omega_S / (cfg.m_S * cfg.sigma2)
    return d.mu


def default_threshold_grid(cfg: SystemConfig, points: int = 121,
                           lo: float = 1e-3, hi: float = 1e3) -> np.ndarray:
    """Log-spaced z grid over [lo, hi] in units of the natural scale."""
    return z_scale(cfg) * np.logspace(math.log10(lo), math.log10(hi), points)


_EVALUATORS = {
    Statistic.OUTAGE_PROB: lambda z, cfg, spec: outage_probability(z, cfg, spec),
    Statistic.LCR: lambda z, cfg, spec: level_crossing_rate(z, cfg),
    Statistic.AFD: lambda z, cfg, spec: afd(z, cfg, spec),
    Statistic.PDF: lambda z, cfg, spec: sinr_pdf(z, cfg),
}


def sweep(cfg: SystemConfig, thresholds, statistic: Statistic,
          normalization: Normalization = Normalization.RAW,
          spec: QuadratureSpec = DEFAULT_QUAD, jobs: int = 1) -> StatCurve:
    """Evaluate one statistic over a z-threshold grid.

    Per-point failures become NaN gaps with a diagnostics entry instead of
    aborting the sweep.  Points are independent, so jobs > 1 evaluates them
    concurrently; assembly is by grid index, making the result independent
    of completion order.
    """
    zs = np.asarray(thresholds, dtype=float)
    ev = _EVALUATORS[statistic]

    def one(idx_z):
        idx, z = idx_z
        try:
            v = ev(float(z), cfg, spec)
        except (DomainError, ConvergenceError, RegimeError, OverflowError) as exc:
            return idx, math.nan, f"z={z!r}: {exc}"
        if math.isinf(v):
            return idx, math.nan, f"z={z!r}: value overflow (crossing rate underflow)"
        return idx, v, None

    items = list(enumerate(zs))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(one, items))
    else:
        results = [one(it) for it in items]
    results.sort(key=lambda r: r[0])
    values = np.array([r[1] for r in results])
    diags = tuple(r[2] for r in results if r[2] is not None)
    if normalization is Normalization.DOPPLER_NORMALIZED:
        if statistic is Statistic.LCR:
            values = values / cfg.f_m0
        elif statistic is Statistic.AFD:
            values = values * cfg.f_m0
    return StatCurve(zs, values, statistic, normalization, "z", diags)
