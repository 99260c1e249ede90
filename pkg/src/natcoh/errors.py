"""Exception types shared across the package."""


class NatcohError(Exception):
    """Base class for all domain errors raised by this package."""


class BidegreeMismatch(NatcohError):
    """Two bihomogeneous polynomials of unequal bidegree were added."""


class NegativeBidegree(NatcohError):
    """A random polynomial was requested in a bidegree with no sections."""


class ShapeMismatch(NatcohError):
    """Composition of sheaf maps whose middle terms do not line up."""


class MixedMonadCohomology(NatcohError):
    """The three monad terms carry cohomology in two or more degrees at one
    twist, where the single-degree spectral formulas do not apply."""

    def __init__(self, twist, degrees):
        self.twist = twist
        self.degrees = tuple(sorted(degrees))
        super().__init__(
            f"monad cohomology at twist {twist} lives in degrees "
            f"{self.degrees}; need at most one"
        )


class RetriesExhausted(NatcohError):
    """A randomized search ran out of attempts.  Carries the last report."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class SplitTypeMismatch(NatcohError):
    """A cohomology table row does not match the fitted split type."""

    def __init__(self, message, failing=()):
        self.failing = tuple(failing)
        super().__init__(message)


class NoValidShapeWithinShiftBound(NatcohError):
    """No integral shift within the scan bound yields a valid monad shape."""


class DenominatorDivisibleByP(NatcohError):
    """A rational entry cannot be reduced modulo the requested prime."""


class DocumentError(NatcohError):
    """A monad document failed to parse or violates the schema."""
