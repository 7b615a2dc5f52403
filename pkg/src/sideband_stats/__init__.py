"""Photon statistics of the innermost motional sidebands of a two-tone driven
optomechanical cavity, with an independent truncated-Fock regression oracle."""

from .coherence import (
    K0_THRESHOLD_G2,
    Classicality,
    CoherenceCurve,
    CoherenceSample,
    af_anomalous_correlator,
    af_normal_correlator,
    classicality_check,
    coherence_curve,
    coherence_sample,
    delta_zero_coherences,
    g2_closed,
    g2_envelope,
    g2_wick,
    g3_quarter_closed,
    g3_wick,
    g3_zero_closed,
    k_equal_time,
    k_functional,
    k_quarter_delay,
    nm_from_g2,
    oscillation_amplitude,
    quarter_delay_report,
)
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    DomainError,
    InstabilityError,
    NonUniqueSteadyState,
    SidebandError,
    ToleranceError,
    TruncationError,
    ZeroFluxError,
)
from .filters import (
    FilterParams,
    filter_susceptibility,
    filtered_noise_weight,
    output_coefficients,
    passband_distortion,
)
from .mechanics import (
    TwoTimeCorrelators,
    anomalous_correlator,
    antinormal_correlator,
    normal_correlator,
)
from .model import (
    CoolingLimit,
    DerivedQuantities,
    IdealParams,
    SystemParams,
    backaction,
    cavity_susceptibility,
    cooling_limit,
    cooperativities,
    nm_from_nm0,
    normalized_response,
    sideband_suppression,
    thermal_occupation,
    two_phonon_drive_ratio,
)
from .scan import GridSpec, RegionMap, region_scan

__version__ = "0.1.0"
