"""Exception types raised across the package."""


class SidebandError(Exception):
    """Base class for all package errors."""


class DomainError(SidebandError, ValueError):
    """Input lies outside the domain where a formula is defined."""


class InstabilityError(SidebandError):
    """The effective mechanical linewidth is not positive.

    The offending linewidth is kept on ``gamma_eff`` so callers can report it.
    """

    def __init__(self, gamma_eff, message=None):
        self.gamma_eff = gamma_eff
        if message is None:
            message = f"unstable: effective mechanical linewidth gamma_eff={gamma_eff:.6g} <= 0"
        super().__init__(message)


class ZeroFluxError(DomainError):
    """The detected photon flux vanishes, so normalized coherences are undefined."""


class TruncationError(SidebandError):
    """Fock-space truncation is inadequate or the dimension budget is exhausted."""


class NonUniqueSteadyState(SidebandError):
    """The Liouvillian spectral gap is too small to single out a stationary state."""


class ToleranceError(SidebandError):
    """A numerical check failed its configured tolerance."""


class ConfigError(SidebandError, ValueError):
    """A run configuration is malformed or inconsistent."""
