"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(EngineError):
    """A construction or search grew past its configured cap."""


class SearchTimeout(EngineError):
    """A search exceeded its time budget; carries the best bound seen so far."""

    def __init__(self, message: str, best_order_found: int = 0):
        super().__init__(message)
        self.best_order_found = best_order_found


class ModulusMismatch(EngineError):
    """Two elements with different moduli were combined."""


class OddModulus(EngineError):
    """An operation requiring an even modulus received an odd one."""


class NonIntegralInput(EngineError):
    """An integral element was required but a half-integral one was given."""


class DetNotOne(EngineError):
    """A matrix was required to have determinant one."""


class NotNormal(EngineError):
    """Quotient requested by a subgroup that is not normal."""


class NotCentral(EngineError):
    """A central subgroup was required."""


class QuotientNotAbelian(EngineError):
    """The quotient by the given subgroup is not abelian."""


class HypothesisViolation(EngineError):
    """Input data does not satisfy the hypotheses of the requested check."""


class IndexExceedsSix(EngineError):
    """The translation subgroup has index above six; the input action is invalid."""


class PrimeDoesNotDivide(EngineError):
    """The given prime does not divide the group order."""


class PrimeTooSmall(EngineError):
    """The admissibility criterion is only defined for primes above three."""


class LambdaTooSmall(EngineError):
    """The sharpness construction needs a shape invariant of at least eight."""


class ZeroArea(EngineError):
    """Both areas of a symplectic shape must be nonzero."""
