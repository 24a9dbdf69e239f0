"""Physical parameters of the dual-SC link and the quantities derived from them.

Power fields share one arbitrary linear unit (never dB); the CLI converts
dB inputs at the boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .specfun import DomainError

__all__ = [
    "DerivedParams",
    "IL_SIGMA2_FACTOR",
    "MAX_INTERFERENCE_ORDER",
    "Regime",
    "SystemConfig",
    "ValidationError",
    "derive",
    "normalize_to_unit_noise",
]

# sigma2 below this fraction of omega_I is treated as interference-limited:
# the general forms pit exp(sigma2 m_I/Omega_I) against alternating powers of
# the same quantity and cancel catastrophically as sigma2 -> 0, while the
# limit has its own exact closed forms.
IL_SIGMA2_FACTOR = 1e-12

# cap on n * m_I so every finite series stays short
MAX_INTERFERENCE_ORDER = 64


class ValidationError(ValueError):
    """Configuration violates one or more invariants; lists all of them."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))


class Regime(enum.Enum):
    GENERAL = "General"
    INTERFERENCE_LIMITED = "InterferenceLimited"
    NOISE_LIMITED = "NoiseLimited"


_FIELDS = ("m_S", "m_I", "omega_S", "omega_I", "sigma2", "n", "f_m0", "f_mi")


@dataclass(frozen=True)
class SystemConfig:
    """All physical parameters of the link.

    m_S, m_I   : Nakagami severity of the desired / interference signals
    omega_S    : average fading power per desired branch signal
    omega_I    : average fading power per interferer per branch
    sigma2     : AWGN power (deterministic constant across branches)
    n          : number of cochannel interferers
    f_m0, f_mi : maximum Doppler spreads of desired / interference signals (Hz)
    """

    m_S: int = 1
    m_I: int = 1
    omega_S: float = 1.0
    omega_I: float = 1.0
    sigma2: float = 1.0
    n: int = 1
    f_m0: float = 100.0
    f_mi: float = 100.0

    def __post_init__(self):
        v = []
        for name in ("m_S", "m_I", "n"):
            raw = getattr(self, name)
            try:
                as_int = int(raw)
                ok = as_int == raw
            except (TypeError, ValueError):
                ok = False
            if not ok or as_int < 1:
                v.append(f"{name} must be a positive integer, got {raw!r}")
            else:
                object.__setattr__(self, name, as_int)
        for name in ("omega_S", "omega_I", "sigma2", "f_m0", "f_mi"):
            raw = getattr(self, name)
            try:
                object.__setattr__(self, name, float(raw))
            except (TypeError, ValueError):
                v.append(f"{name} must be a real number, got {raw!r}")
        if not v:
            if not (math.isfinite(self.omega_S) and self.omega_S > 0.0):
                v.append(f"omega_S must be positive, got {self.omega_S!r}")
            if not (math.isfinite(self.omega_I) and self.omega_I >= 0.0):
                v.append(f"omega_I must be nonnegative, got {self.omega_I!r}")
            if not (math.isfinite(self.sigma2) and self.sigma2 >= 0.0):
                v.append(f"sigma2 must be nonnegative, got {self.sigma2!r}")
            if self.omega_I == 0.0 and self.sigma2 == 0.0:
                v.append("omega_I and sigma2 cannot both be zero (ratio ill-defined)")
            if not (math.isfinite(self.f_m0) and self.f_m0 > 0.0):
                v.append(f"f_m0 must be positive, got {self.f_m0!r}")
            if not (math.isfinite(self.f_mi) and self.f_mi > 0.0):
                v.append(f"f_mi must be positive, got {self.f_mi!r}")
            if isinstance(self.m_I, int) and isinstance(self.n, int) \
                    and self.m_I * self.n > MAX_INTERFERENCE_ORDER:
                v.append(f"m_I * n must not exceed {MAX_INTERFERENCE_ORDER}, "
                         f"got {self.m_I * self.n}")
        if v:
            raise ValidationError(v)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in _FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        unknown = set(d) - set(_FIELDS)
        if unknown:
            raise ValidationError([f"unknown field {k!r}" for k in sorted(unknown)])
        return cls(**d)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities computed once from a SystemConfig and consumed everywhere.

    mu       : ratio of average scattered powers, omega_S m_I / (omega_I m_S)
    c        : noise-to-interference scale, sigma2 m_I / omega_I
    var_dx0  : Clarke variance of the desired-envelope derivative, (pi f_m0)^2 omega_S / m_S
    var_dwi  : Clarke variance of an interferer-envelope derivative, (pi f_mi)^2 omega_I / m_I
    """

    mu: float
    c: float
    var_dx0: float
    var_dwi: float
    regime: Regime


def derive(cfg: SystemConfig) -> DerivedParams:
    """Compute mu, c and the Doppler derivative variances; classify the regime."""
    if not isinstance(cfg, SystemConfig):
        cfg = SystemConfig(**cfg) if isinstance(cfg, dict) else SystemConfig(*cfg)
    var_dx0 = (math.pi * cfg.f_m0) ** 2 * cfg.omega_S / cfg.m_S
    if cfg.omega_I == 0.0:
        return DerivedParams(mu=math.inf, c=math.inf, var_dx0=var_dx0,
                             var_dwi=0.0, regime=Regime.NOISE_LIMITED)
    mu = cfg.omega_S * cfg.m_I / (cfg.omega_I * cfg.m_S)
    c = cfg.sigma2 * cfg.m_I / cfg.omega_I
    var_dwi = (math.pi * cfg.f_mi) ** 2 * cfg.omega_I / cfg.m_I
    regime = (Regime.INTERFERENCE_LIMITED
              if cfg.sigma2 < IL_SIGMA2_FACTOR * cfg.omega_I
              else Regime.GENERAL)
    return DerivedParams(mu=mu, c=c, var_dx0=var_dx0, var_dwi=var_dwi, regime=regime)


def normalize_to_unit_noise(cfg: SystemConfig) -> SystemConfig:
    """Rescale powers so sigma2 = 1: omega_S -> SNR, omega_I -> INR per branch.

    Leaves mu and c (and therefore every statistic at a given threshold z)
    unchanged.
    """
    if cfg.sigma2 <= 0.0:
        raise DomainError("normalize_to_unit_noise requires sigma2 > 0")
    return replace(cfg, omega_S=cfg.omega_S / cfg.sigma2,
                   omega_I=cfg.omega_I / cfg.sigma2, sigma2=1.0)
