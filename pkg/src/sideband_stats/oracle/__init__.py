"""Independent numerical checks: truncated-Fock Lindblad dynamics with quantum
regression, and a two-mode master-equation integrator."""

from .coherences import DimPolicy, composite_sideband_operator, oracle_coherences
from .liouville import (
    Liouvillian,
    TruncatedState,
    destroy,
    lindblad_superoperator,
    regression_correlator,
    stationary_state,
    thermal_liouvillian,
)
from .two_mode import TwoModeResult, two_mode_simulate
