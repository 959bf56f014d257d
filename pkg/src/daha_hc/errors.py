"""Exception hierarchy.  CLI exit codes hang off the class."""


class DahaError(Exception):
    exit_code = 1


class RootSystemError(DahaError, ValueError):
    exit_code = 2


class ParameterError(DahaError, ValueError):
    exit_code = 2


class NonGenericError(DahaError, ArithmeticError):
    """A denominator or resonance vanished at the chosen parameters."""

    exit_code = 3


class PoleError(NonGenericError):
    pass


class DivisionError(DahaError, ArithmeticError):
    """Laurent polynomial division was not exact."""


class SpecializationError(DahaError, ValueError):
    """A non-integral exponent reached a spectral evaluation."""


class InsufficientCutoffError(DahaError):
    exit_code = 4


class ConventionError(DahaError, AssertionError):
    """An internal consistency check on operator conventions failed."""
