"""Special-function and quadrature layer for the diversity statistics.

Everything here is scalar, pure and thread-safe.  The incomplete-gamma
family supports exactly the orders the closed forms produce: positive
integers (distribution path), positive half-integers (crossing-rate path),
and integers <= 0 for the checked series identity, reached through the
exponential integral.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

__all__ = [
    "ConvergenceError",
    "DEFAULT_QUAD",
    "DomainError",
    "QuadratureSpec",
    "beta",
    "gamma",
    "incomplete_beta_neg",
    "incomplete_gamma_series",
    "integrate_adaptive",
    "log_beta",
    "log_upper_incomplete_gamma",
    "pochhammer",
    "regularized_beta",
    "regularized_beta_series",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_int_ext",
]

_EULER_GAMMA = 0.5772156649015328606
_SQRT_PI = 1.7724538509055160273
_INT_TOL = 1e-9
_TINY = 1e-300


class DomainError(ValueError):
    """Argument outside the supported domain."""


class ConvergenceError(RuntimeError):
    """Iteration failed to reach the requested tolerance.

    Carries the best available estimate and, when known, an error bound.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 error_bound: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_QUAD = QuadratureSpec()


def _require_finite_positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"{name} must be finite and positive, got {x!r}")


def _near_int(a: float) -> int | None:
    r = round(a)
    return int(r) if abs(a - r) <= _INT_TOL else None


# -- gamma family ------------------------------------------------------------

def gamma(a: float) -> float:
    """Gamma function for a > 0."""
    _require_finite_positive("a", a)
    return math.gamma(a)


def pochhammer(a: float, j: int) -> float:
    """Rising factorial (a)_j = a (a+1) ... (a+j-1), with (a)_0 = 1."""
    if j < 0 or j != int(j):
        raise DomainError(f"pochhammer order must be a nonnegative integer, got {j!r}")
    out = 1.0
    for k in range(int(j)):
        out *= a + k
    return out


def _log_erfc(u: float) -> float:
    """ln erfc(u) for u >= 0, stable far into the underflow range of erfc."""
    if u < 20.0:
        return math.log(math.erfc(u))
    # asymptotic series: erfc(u) = e^{-u^2}/(u sqrt(pi)) sum_k (-1)^k (2k-1)!!/(2u^2)^k
    inv = 1.0 / (2.0 * u * u)
    term = 1.0
    s = 1.0
    for k in range(1, 12):
        term *= -(2 * k - 1) * inv
        s += term
    return -u * u - math.log(u) - 0.5 * math.log(math.pi) + math.log(s)


def _logaddexp(la: float, lb: float) -> float:
    if la < lb:
        la, lb = lb, la
    if lb == -math.inf:
        return la
    return la + math.log1p(math.exp(lb - la))


def _log_upper_gamma_int(m: int, x: float) -> float:
    # ln Gamma(m, x) for integer m >= 1 through the finite-series expansion
    # Gamma(m, x) = (m-1)! e^{-x} sum_{j<m} x^j / j!
    if x == 0.0:
        return math.lgamma(m)
    lx = math.log(x)
    logs = [j * lx - math.lgamma(j + 1.0) for j in range(m)]
    top = max(logs)
    s = math.fsum(math.exp(l - top) for l in logs)
    return math.lgamma(m) - x + top + math.log(s)


def _log_upper_gamma_half(a: float, x: float) -> float:
    # ln Gamma(k + 1/2, x), built upward from Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
    if x == 0.0:
        return math.lgamma(a)
    lg = math.log(_SQRT_PI) + _log_erfc(math.sqrt(x))
    lx = math.log(x)
    aa = 0.5
    while aa < a - 0.25:
        # Gamma(aa+1, x) = aa Gamma(aa, x) + x^aa e^{-x}; both addends positive
        lg = _logaddexp(math.log(aa) + lg, aa * lx - x)
        aa += 1.0
    return lg


def log_upper_incomplete_gamma(a: float, x: float) -> float:
    """ln Gamma(a, x) for positive integer or half-integer a and x >= 0."""
    _require_finite_positive("a", a)
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be finite and nonnegative, got {x!r}")
    m = _near_int(a)
    if m is not None and m >= 1:
        return _log_upper_gamma_int(m, x)
    k = _near_int(a - 0.5)
    if k is not None and k >= 0:
        return _log_upper_gamma_half(a, x)
    raise DomainError(
        f"upper incomplete gamma supports integer and half-integer orders, got a={a!r}")


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Upper incomplete gamma Gamma(a, x) for integer or half-integer a > 0."""
    return math.exp(log_upper_incomplete_gamma(a, x))


def incomplete_gamma_series(m: int, u: float) -> float:
    """Finite-series form of Gamma(m, u) for integer m >= 1.

    Evaluates Gamma(m) e^{-u} sum_{j=0}^{m-1} u^j / j! directly; this is the
    independent counterpart of :func:`upper_incomplete_gamma` for integer
    orders.
    """
    mi = _near_int(m)
    if mi is None or mi < 1:
        raise DomainError(f"series order must be a positive integer, got {m!r}")
    if not (math.isfinite(u) and u >= 0.0):
        raise DomainError(f"u must be finite and nonnegative, got {u!r}")
    term = 1.0
    s = 1.0
    for j in range(1, mi):
        term *= u / j
        s += term
    return math.gamma(mi) * math.exp(-u) * s


def _exp1(x: float) -> float:
    # exponential integral E1(x) = Gamma(0, x), x > 0
    if x <= 1.0:
        s = -_EULER_GAMMA - math.log(x)
        term = 1.0
        for k in range(1, 80):
            term *= -x / k
            contrib = -term / k
            s += contrib
            if abs(contrib) < 1e-18 * max(abs(s), _TINY):
                break
        return s
    # continued fraction, modified Lentz
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for k in range(1, 400):
        an = -(k * k)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-x)
    raise ConvergenceError("E1 continued fraction did not converge", estimate=h * math.exp(-x))


def upper_incomplete_gamma_int_ext(a: int, x: float) -> float:
    """Gamma(a, x) for any integer a (including a <= 0), x > 0.

    Orders a <= 0 are reached by the downward recurrence
    Gamma(a-1, x) = (Gamma(a, x) - x^{a-1} e^{-x}) / (a - 1) seeded at
    Gamma(0, x) = E1(x); the defining integral converges for every real
    order once x > 0.
    """
    ai = _near_int(a)
    if ai is None:
        raise DomainError(f"order must be an integer, got {a!r}")
    if ai >= 1:
        if not (math.isfinite(x) and x >= 0.0):
            raise DomainError(f"x must be finite and nonnegative, got {x!r}")
        return math.exp(_log_upper_gamma_int(ai, x))
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be positive for nonpositive orders, got {x!r}")
    g = _exp1(x)
    aa = 0
    while aa > ai:
        g = (g - x ** (aa - 1) * math.exp(-x)) / (aa - 1)
        aa -= 1
    return g


# -- beta family -------------------------------------------------------------

def log_beta(a: float, b: float) -> float:
    """ln B(a, b)."""
    _require_finite_positive("a", a)
    _require_finite_positive("b", b)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    _require_finite_positive("a", a)
    _require_finite_positive("b", b)
    if a + b < 170.0:
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(log_beta(a, b))


def _beta_cf(a: float, b: float, x: float) -> float:
    # continued fraction for the regularized incomplete beta, modified Lentz
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ConvergenceError("incomplete beta continued fraction did not converge", estimate=h)


def regularized_beta(z: float, a: float, b: float) -> float:
    """Regularized incomplete beta I(z; a, b) for z in [0, 1]."""
    _require_finite_positive("a", a)
    _require_finite_positive("b", b)
    if not (0.0 <= z <= 1.0):
        raise DomainError(f"z must lie in [0, 1], got {z!r}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return 1.0
    lfront = a * math.log(z) + b * math.log1p(-z) - log_beta(a, b)
    if z < (a + 1.0) / (a + b + 2.0):
        return math.exp(lfront) * _beta_cf(a, b, z) / a
    return 1.0 - math.exp(lfront) * _beta_cf(b, a, 1.0 - z) / b


def regularized_beta_series(z: float, a: float, b: int) -> float:
    """Finite-series form of I(z; a, b), valid for positive integer b.

    I(z; a, b) = z^a sum_{j=0}^{b-1} (a)_j (1 - z)^j / j!
    """
    bi = _near_int(b)
    if bi is None or bi < 1:
        raise DomainError(f"series requires positive integer b, got {b!r}")
    if not (0.0 <= z <= 1.0):
        raise DomainError(f"z must lie in [0, 1], got {z!r}")
    if z == 0.0:
        return 0.0
    one_minus = 1.0 - z
    term = 1.0
    s = 1.0
    for j in range(1, bi):
        term *= (a + j - 1.0) * one_minus / j
        s += term
    return z ** a * s


def _hyp2f1_series(alpha: float, beta_: float, gamma_: float, x: float) -> float:
    # Gauss series with two-consecutive-term stopping; terminates exactly when
    # alpha or beta_ is a nonpositive integer.
    term = 1.0
    s = 1.0
    small_streak = 0
    for k in range(10000):
        term *= (alpha + k) * (beta_ + k) / ((gamma_ + k) * (k + 1.0)) * x
        if term == 0.0:
            return s
        s += term
        if abs(term) <= 1e-16 * max(abs(s), _TINY):
            small_streak += 1
            if small_streak >= 2:
                return s
        else:
            small_streak = 0
    raise ConvergenceError("2F1 series did not converge in 10000 terms", estimate=s)


def incomplete_beta_neg(z: float, a: int, b: float) -> float:
    """Incomplete beta B(z; a, b) = int_0^z t^{a-1} (1-t)^{b-1} dt for z <= 0.

    The integrand is real and finite on the segment (1 - t >= 1 there), and
    the second parameter may be zero or negative.  Evaluated through the
    hypergeometric representation B(z; a, b) = (z^a / a) 2F1(a, 1-b; a+1; z),
    using the z -> z/(z-1) transformation once |z| >= 0.5 so the series keeps
    converging (it terminates outright when a + b is a nonpositive integer);
    falls back to adaptive quadrature if the series stalls.
    """
    ai = _near_int(a)
    if ai is None or ai < 1:
        raise DomainError(f"first parameter must be a positive integer, got {a!r}")
    if not math.isfinite(z) or z > 0.0:
        raise DomainError(f"z must be <= 0 (use regularized_beta otherwise), got {z!r}")
    if z == 0.0:
        return 0.0
    try:
        if -z < 0.5:
            hf = _hyp2f1_series(ai, 1.0 - b, ai + 1.0, z)
        else:
            w = z / (z - 1.0)
            hf = (1.0 - z) ** float(-ai) * _hyp2f1_series(ai, ai + b, ai + 1.0, w)
        return z ** ai / ai * hf
    except ConvergenceError:
        val = integrate_adaptive(lambda t: t ** (ai - 1) * (1.0 - t) ** (b - 1.0),
                                 z, 0.0, DEFAULT_QUAD)
        return -val


# -- quadrature --------------------------------------------------------------

def integrate_adaptive(f: Callable[[float], float], lo: float, hi: float,
                       spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Adaptive quadrature of f over (lo, hi); hi may be +inf.

    Backed by QUADPACK behind the QuadratureSpec contract.  Raises
    ConvergenceError, carrying the best estimate and its error bound, when
    the requested tolerance cannot be certified within the subdivision
    budget.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=spec.max_subdivisions, full_output=1)
    result = out[0]
    abserr = out[1]
    if len(out) >= 4 and not (abserr <= max(spec.abs_tol, spec.rel_tol * abs(result))):
        raise ConvergenceError(f"quadrature failed to converge: {out[3]}",
                               estimate=result, error_bound=abserr)
    return result
