"""Exception hierarchy shared by all vrrw modules."""


class VrrwError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(VrrwError):
    """A model description failed validation."""


class SymmetryViolation(ValidationError):
    """rho_v^{ij} != rho_v^{ji} for some shared vertex."""


class DominanceViolation(ValidationError):
    """eta_v^i does not dominate the negative interaction mass at (i, v)."""

    def __init__(self, walk, vertex, eta, bound):
        self.walk = walk
        self.vertex = vertex
        self.eta = eta
        self.bound = bound
        super().__init__(
            f"eta[walk {walk + 1}, vertex {vertex}] = {eta} must exceed "
            f"the negative interaction mass {bound}"
        )


class EmptyVertexSet(ValidationError):
    """A walk was declared with no vertices."""


class DuplicateVertexInSet(ValidationError):
    """A walk's vertex list contains a repeated vertex id."""


class InvalidSize(ValidationError):
    """A preset was requested with an unsupported size parameter."""


class DomainError(VrrwError):
    """A kernel weight base was non-positive; the parameter set is invalid."""


class StepRejected(VrrwError):
    """Flow integration produced a coordinate below the negativity guard."""


class SizeGuard(VrrwError):
    """Exhaustive enumeration was requested beyond the configured cap."""


class IllConditioned(VrrwError):
    """A linear solve had condition estimate beyond the trust threshold."""


class MixedSigns(VrrwError):
    """Self-interaction coefficients on a support mix strict signs."""


class NotApplicable(VrrwError):
    """Preconditions of the accumulation-condition check do not hold."""


class NotInterior(VrrwError):
    """The interior instability test was applied to a boundary point."""


class RegimeBoundary(VrrwError):
    """Requested parameters sit exactly on a regime boundary; refused."""


class EpsilonTooLarge(VrrwError):
    """Positivity conditions fail for a support shape at this epsilon."""


class NoConvergence(VrrwError):
    """The eigenvalue iteration did not converge within its cap."""
