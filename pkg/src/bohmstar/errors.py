"""Exception hierarchy.

Numerical precondition failures all derive from :class:`PreconditionError`
so that the command line front end can map them onto one exit code.
"""


class BohmstarError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(BohmstarError):
    """Invalid or incomplete run configuration."""


class PreconditionError(BohmstarError, ValueError):
    """A numerical precondition of an operation is violated."""


class BoundaryDecayViolated(PreconditionError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ZeroField(PreconditionError):
    pass


class NodeSplitsDomain(PreconditionError):
    pass


class MaskedRegion(PreconditionError):
    pass


class InsufficientSamples(PreconditionError):
    pass


class LeftDomain(PreconditionError):
    pass


class TrajectoriesCrossed(PreconditionError):
    pass


class KernelNotFinite(PreconditionError):
    pass


class DivisionByVanishingKernel(PreconditionError):
    pass


class DegenerateObservable(PreconditionError):
    pass


class UnsupportedKernel(PreconditionError):
    pass


class YRangeInsufficient(PreconditionError):
    pass


class KernelConstraintsViolated(PreconditionError):
    pass


class NotQuadratic(PreconditionError):
    pass


class SymbolParseError(BohmstarError, ValueError):
    pass


class VerificationFailed(BohmstarError):
    """A verification run finished but a deviation exceeded its threshold."""
