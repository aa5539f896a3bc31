"""Exception and warning types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class SingularInput(ToolkitError):
    """Matrix is singular, or too ill-conditioned for the requested operation."""


class EigensolveFailure(ToolkitError):
    """The underlying Schur/eigen solver failed or produced inconsistent output."""


class DimensionMismatch(ToolkitError):
    """Operand dimensions are incompatible."""


class ResourceLimit(ToolkitError):
    """A size guard (ball size, compound dimension) would be exceeded."""


class RankDeficient(ToolkitError):
    """Columns supposed to span a plane are linearly dependent."""


class DegreeMismatch(ToolkitError):
    """Exterior-algebra degrees or ambient dimensions do not match."""


class UnknownLetter(ToolkitError):
    """A word contains a symbol outside the presentation's alphabet."""


class PresentationMismatch(ToolkitError):
    """Representations built on different presentations were combined."""


class DeterminantNotOne(ToolkitError):
    """Input matrix is required to have determinant one."""


class InvalidParams(ToolkitError):
    """Construction parameters violate their documented constraints."""


class InvalidMagnitude(ToolkitError):
    """Perturbation magnitude outside the supported range."""


class ConstructionFailure(ToolkitError):
    """A builder produced a representation that fails its own verification."""


class InsufficientRadius(ToolkitError):
    """A certificate fit was requested on a profile of too small a radius."""


class NoProximalElements(ToolkitError):
    """No element of the scanned ball is proximal at the requested index."""


class NotBiproximal(ToolkitError):
    """Ping-pong requires a biproximal base element."""


class TransversalityFailure(ToolkitError):
    """Attracting/repelling data of ping-pong players is not pairwise transverse."""


class MarginalGapWarning(UserWarning):
    """A spectral gap is barely above the proximality threshold."""
