"""Sign-pattern model checking for rational linear recurrence sequences."""

from .errors import (
    AlphabetMismatch,
    CertifiedUnsupported,
    DivisionByZero,
    InvalidInput,
    LrsOmegaError,
    MalformedOracle,
    NotSimple,
    PrecisionExhausted,
    SolverProtocolError,
)

__version__ = "0.1.0"
