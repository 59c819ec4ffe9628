"""Exception hierarchy.

Every refusal that comes from the mathematics (a cone that is not pointed,
an element that is not a root, ...) derives from :class:`DomainError`.  The
command line maps these to exit code 1.
"""


class DomainError(ValueError):
    """Base class for mathematical refusals."""


class DimensionMismatch(DomainError):
    pass


class ZeroVectorError(DomainError):
    pass


class NonPointedError(DomainError):
    """A cone (or the free part of a monoid) contains a line."""


class NotFullDimensionalError(DomainError):
    pass


class RankUnsupportedError(DomainError):
    pass


class EmptyGeneratorsError(DomainError):
    pass


class ZeroGeneratorError(DomainError):
    pass


class AlphaInSaturationError(DomainError):
    pass


class NotARootError(DomainError):
    pass


class ExponentOutsideCarrierError(DomainError):
    pass


class IterationBudgetExceeded(DomainError):
    """Iterating a derivation did not reach zero within the budget."""


class ZeroDerivationError(DomainError):
    pass


class NotLocallyNilpotentError(DomainError):
    pass


class InconsistentImagesError(DomainError):
    """Generator images that no homogeneous decomposition can reproduce."""


class TotalNotNilpotentError(DomainError):
    pass


class ValidationFailedError(DomainError):
    pass


class VerdictMismatchError(DomainError):
    """Box evidence disagrees with the structural criterion.

    This indicates a bug, never a property of the input.
    """


class IllDefinedDerivationError(DomainError):
    """A degree/character pair that sends some element of ``S`` outside ``S``."""
