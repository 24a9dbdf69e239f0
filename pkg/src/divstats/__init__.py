"""Statistics of dual selection combining with cochannel interference in
Nakagami fading: closed-form outage probability, level crossing rate and
fade duration, plus an independent Monte Carlo fading simulator."""

from .analytic import (
    Normalization,
    RegimeError,
    StatCurve,
    Statistic,
    afd,
    default_threshold_grid,
    envelope_ratio_pdf,
    interference_envelope_pdf,
    interference_plus_noise_pdf,
    lcr_awgn_only,
    lcr_general,
    lcr_sinr,
    lcr_sir,
    lcr_sir_equal_doppler,
    lcr_sir_series,
    level_crossing_rate,
    nakagami_cdf,
    nakagami_pdf,
    outage_probability,
    selected_envelope_pdf,
    series_integral_identity,
    sinr_pdf,
    sir_cdf,
    sir_envelope_ratio_pdf,
    sir_envelope_ratio_pdf_series,
    sweep,
    z_scale,
)
from .model import (
    DerivedParams,
    Regime,
    SystemConfig,
    ValidationError,
    derive,
    normalize_to_unit_noise,
)
from .montecarlo import (
    EmpiricalStats,
    FadingTrace,
    SimulationConfig,
    g_thresholds_from_z,
    gen_gaussian_process,
    gen_nakagami_envelope,
    measure,
    select_and_compose,
    simulate,
)
from .specfun import (
    ConvergenceError,
    DEFAULT_QUAD,
    DomainError,
    QuadratureSpec,
    beta,
    gamma,
    incomplete_beta_neg,
    incomplete_gamma_series,
    integrate_adaptive,
    pochhammer,
    regularized_beta,
    upper_incomplete_gamma,
)

__version__ = "0.1.0"
