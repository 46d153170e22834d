"""Exception types raised by the library."""


class QLandauerError(Exception):
    """Base class for all library errors."""


class HermiticityError(QLandauerError, ValueError):
    """Operator is not Hermitian within tolerance."""


class ShapeError(QLandauerError, ValueError):
    """Operand dimensions are inconsistent."""


class DomainError(QLandauerError, ValueError):
    """Argument lies outside the domain of the operation."""


class UnitarityError(QLandauerError, ValueError):
    """Propagator is not unitary within tolerance."""


class PreconditionError(QLandauerError, ValueError):
    """A documented precondition of the operation does not hold."""


class CompletenessError(QLandauerError, ValueError):
    """Kraus operators do not resolve the identity."""
