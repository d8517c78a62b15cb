class LrsOmegaError(Exception):
    """Base class for library errors (CLI exit code 3)."""


class InvalidInput(LrsOmegaError, ValueError):
    pass


class DivisionByZero(LrsOmegaError, ZeroDivisionError):
    pass


class PrecisionExhausted(LrsOmegaError):
    """Ball arithmetic could not certify a decision within the precision cap."""


class NotSimple(InvalidInput):
    pass


class AlphabetMismatch(InvalidInput):
    pass


class MalformedOracle(LrsOmegaError):
    pass


class CertifiedUnsupported(LrsOmegaError):
    """Certified mode needs something this instance does not provide."""


class SolverProtocolError(LrsOmegaError):
    pass
