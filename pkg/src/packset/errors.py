"""Exception hierarchy shared by all packset modules."""


class PacksetError(Exception):
    """Base class for domain errors raised by packset."""


class NotPrime(PacksetError, ValueError):
    pass


class ZeroElement(PacksetError, ValueError):
    pass


class DivisionByZero(PacksetError, ZeroDivisionError):
    pass


class NoPrimeFound(PacksetError):
    pass


class StepBudgetExceeded(PacksetError):
    pass


class EnumerationTooLarge(PacksetError):
    def __init__(self, count, cap):
        super().__init__(f"enumeration of {count} vectors exceeds cap {cap}")
        self.count = count
        self.cap = cap


class TExceedsL(PacksetError, ValueError):
    pass


class WrongResidueClass(PacksetError, ValueError):
    pass


class CertificationContradiction(PacksetError):
    """A syndrome collision was found in a set certified as packing."""
