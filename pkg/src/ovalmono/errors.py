"""Exception types shared across the pipeline, mapped to CLI exit codes."""


class OvalmonoError(Exception):
    pass


class ParseError(OvalmonoError):
    """Malformed curve or gram matrix input (CLI exit 4)."""


class GenericityError(OvalmonoError):
    """Direction/curve pair violates the Morse-genericity requirements
    (CLI exit 2)."""


class TrackingError(OvalmonoError):
    """Numerical transport failed: step underflow, suspected path jump,
    degree drop or cycle collision (CLI exit 3)."""


class ConstructionError(OvalmonoError):
    """A loop or path construction could not be completed (CLI exit 3)."""


class CertificateError(OvalmonoError):
    """No sign vector matches the boundary class (orientation or genericity
    bug; CLI exit 3)."""


class InputError(OvalmonoError):
    """Invalid argument combination (bad nu, wrong loop type, ...)."""
