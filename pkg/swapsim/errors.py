"""
Exception hierarchy shared by every swapsim module.

Numerical and domain failures derive from SwapSimError so the command line
can tell them apart from usage mistakes (ConfigError).
"""


class SwapSimError(Exception):
    """Base class for all swapsim failures."""
    pass


class InvalidParameterError(SwapSimError, ValueError):
    """A physical parameter, angle, time or grid lies outside its domain."""
    pass


class InvalidStateError(SwapSimError, ValueError):
    """A state or density matrix violates normalization, hermiticity or positivity."""
    pass


class ZeroProbabilityOutcomeError(SwapSimError):
    """The requested Bell-measurement outcome has vanishing amplitude."""
    pass


class DegenerateModeError(SwapSimError):
    """No single slowest-decaying mode exists, so no closed-form long-time limit."""
    pass


class StepSizeError(SwapSimError):
    """The oracle integration step is too coarse for the rates involved."""
    pass


class ConfigError(SwapSimError):
    """Invalid sweep configuration; reported as a usage error."""
    pass
