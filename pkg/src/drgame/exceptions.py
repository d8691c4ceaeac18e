"""Exception hierarchy shared by every module."""


class DRGameError(Exception):
    """Base class for all errors raised by drgame."""


class ValidationError(DRGameError, ValueError):
    """An input violates a documented invariant."""


class WindowTooShort(ValidationError):
    pass


class PreferredOutsideAdmitted(ValidationError):
    pass


class PreferredWindowTooShort(ValidationError):
    pass


class NonPositivePower(ValidationError):
    pass


class InfeasibleStart(ValidationError):
    pass


class InfeasibleSchedule(ValidationError):
    pass


class MissingTask(ValidationError, KeyError):
    pass


class LengthMismatch(ValidationError):
    pass


class NegativeShift(ValidationError):
    pass


class InfeasiblePlayer(ValidationError):
    pass


class UnevaluatedChromosome(ValidationError):
    pass


class EmptyFront(ValidationError):
    pass


class EmptyCatalog(ValidationError):
    pass


class PreferredWindowInfeasible(ValidationError):
    pass


class MissingReference(ValidationError):
    pass


class CatalogFormatError(ValidationError):
    pass
