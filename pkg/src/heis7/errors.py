"""Exception types shared across the toolkit."""


class Heis7Error(Exception):
    """Base class for all toolkit errors."""


class InvalidScalar(Heis7Error):
    """Division by zero or malformed field element."""


class OrderGuardExceeded(Heis7Error):
    """Group closure exceeded the configured order guard."""


class NotInNormalizer(Heis7Error):
    """Element does not normalize the projective group <sigma, tau>."""


class NotAnInvolution(Heis7Error):
    """Element does not square to a scalar with an admissible square root."""


class WrongEigendimensions(Heis7Error):
    """Involution eigenspaces are not of dimensions 3 and 4."""


class DimensionMismatch(Heis7Error):
    """A computed space has unexpected dimension (implementation bug)."""


class UniquenessFailure(Heis7Error):
    """A subspace expected to be a single line has another dimension."""


class DivisionFailure(Heis7Error):
    """Exact polynomial division has a nonzero remainder."""


class RestrictionFailure(Heis7Error):
    """A matrix does not preserve the requested subspace."""


class BaseLocusPoint(Heis7Error):
    """Point lies on the base locus of the septimic system."""


class SingularCatalecticant(Heis7Error):
    """The 6x6 catalecticant is singular (Clebsch quartic)."""


class CommonComponent(Heis7Error):
    """Two plane conics share a component."""


class IllConditioned(Heis7Error):
    """Numeric computation too ill-conditioned to certify."""


class BranchExhausted(Heis7Error):
    """All branch choices in a greedy construction degenerated."""


class AmbiguousClustering(Heis7Error):
    """Point clustering gap falls inside the ambiguity band."""


class NonFiniteLocus(Heis7Error):
    """Common zero locus is not finite (degenerate stratum)."""


class OrbitSizeMismatch(Heis7Error):
    """A group orbit has unexpected cardinality."""


class EquivariantDimMismatch(Heis7Error):
    """Space of equivariant maps has unexpected dimension."""


class RankNot3(Heis7Error):
    """Projected span of a power-sum decomposition is not 3-dimensional."""


class DegenerateConfiguration(Heis7Error):
    """Input configuration degenerates a geometric construction."""


class CounterexamplePair(Heis7Error):
    """A combinatorial identity failed; carries the offending pair."""


class TruncationInsufficient(Heis7Error):
    """Theta series truncation does not meet the tail bound."""
