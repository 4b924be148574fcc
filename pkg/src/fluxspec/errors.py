"""Exception hierarchy.

Every exception carries a ``category`` used by the service layer and the
CLI to map failures onto HTTP statuses and exit codes:

    validation -> exit 1 / HTTP 400
    io         -> exit 2 (CLI only)
    numeric    -> exit 3 / HTTP 500
"""


class FluxspecError(Exception):
    category = "validation"


class ParameterError(FluxspecError):
    """Invalid physical parameters, configuration values or input data."""


class InvalidBasisError(ParameterError):
    """Basis definition violates its invariants (e.g. ncut < 1)."""


class TruncationLimitError(ParameterError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class CalibrationRangeError(ParameterError):
    """Calibration lookup outside the tabulated oxygen-flow range."""


class NoTransitionError(ParameterError):
    """R(T) curve does not span a superconducting transition."""


class AmbiguousTransitionError(ParameterError):
    """R(T) curve crosses a threshold level more than once."""

    def __init__(self, message, crossings=None):
        super().__init__(message)
        self.crossings = list(crossings or [])


class DegenerateNormalizationError(ParameterError):
    """Map normalization impossible (fewer than two flux columns)."""


class FitRankError(ParameterError):
    """Fit is under-determined by the supplied transition points."""


class HermiticityError(FluxspecError):
    category = "numeric"


class EigensolverError(FluxspecError):
    category = "numeric"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class RegimeError(FluxspecError):
    """Closed-form estimate outside its regime of validity (omega_A^2 <= 0)."""

    category = "numeric"


class EstimationError(FluxspecError):
    """Numerical estimation failed (e.g. flux window too narrow for a slope)."""

    category = "numeric"


class FitConvergenceError(FluxspecError):
    category = "numeric"

    def __init__(self, message, cost_trace=None):
        super().__init__(message)
        self.cost_trace = list(cost_trace or [])
