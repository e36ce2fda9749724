"""Exception types raised across the package."""


class GibbsFragError(Exception):
    """Base class for all package errors."""


class ZeroProbabilityError(GibbsFragError, ValueError):
    """Conditioning on an event of probability zero."""


class MonotonicityError(GibbsFragError):
    """A sequence that must be nondecreasing was found to decrease."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InfeasibleError(GibbsFragError):
    """No monotone coupling exists; carries the violation certificate."""

    def __init__(self, certificate, level=None):
        super().__init__(
            f"layers {level} -> {None if level is None else level + 1} are not "
            f"Strassen-feasible: {certificate.lhs} > {certificate.rhs}"
        )
        self.certificate = certificate
        self.level = level


class GuardExceeded(GibbsFragError):
    """A layer enumeration would exceed the configured state-count guard."""
