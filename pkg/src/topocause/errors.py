"""Exception types raised by the library."""


class TopocauseError(Exception):
    """Base class for all library errors."""


class InvalidInput(TopocauseError, ValueError):
    """Non-finite or otherwise malformed numeric input."""


class InsufficientData(TopocauseError, ValueError):
    """Too few samples for the requested operation."""


class DegenerateRegressor(TopocauseError, ValueError):
    """Regressor column is constant; no regression is possible."""


class InvalidWindow(TopocauseError, ValueError):
    """Window bounds violate 0 <= alpha < beta."""


class OracleSizeExceeded(TopocauseError, ValueError):
    """Brute-force oracle called beyond its supported size."""


class InvalidScenario(TopocauseError, ValueError):
    """Unknown or ill-parameterized synthetic scenario."""


class DegenerateInput(TopocauseError, ValueError):
    """Input collapses to zero variance where spread is required."""


class StabilityFailure(TopocauseError, RuntimeError):
    """A subsample inside the stability threshold could not be scored."""

    def __init__(self, replicate: int, cause: Exception):
        super().__init__(f"subsample replicate {replicate} failed: {cause!r}")
        self.replicate = replicate
        self.cause = cause


class BootstrapFailure(TopocauseError, RuntimeError):
    """A bootstrap replicate inside the calibration loop could not be scored."""

    def __init__(self, replicate: int, cause: Exception):
        super().__init__(f"bootstrap replicate {replicate} failed: {cause!r}")
        self.replicate = replicate
        self.cause = cause


class ParseError(TopocauseError, ValueError):
    """Malformed row in a pair data or metadata file."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class EmptyPair(TopocauseError, ValueError):
    """A pair file contains no usable observations."""
