"""Exception hierarchy.

Every error raised on purpose by the library derives from ``BrandtLabError``.
Level validation failures share the ``InvalidLevel`` parent so callers (the
CLI in particular) can map them to a single exit code.
"""


class BrandtLabError(Exception):
    pass


# core arithmetic
class EmptyInput(BrandtLabError, ValueError):
    pass


class ZeroLattice(BrandtLabError, ValueError):
    pass


# quadratic fields
class NotSquarefree(BrandtLabError, ValueError):
    pass


class NotNegative(BrandtLabError, ValueError):
    pass


class InertPrime(BrandtLabError, ValueError):
    pass


# level types
class InvalidLevel(BrandtLabError, ValueError):
    pass


class NotCoprime(InvalidLevel):
    pass


class EvenExponentInN1(InvalidLevel):
    pass


class N2NotSquareOfSquarefree(InvalidLevel):
    pass


class MNotSquarefree(InvalidLevel):
    pass


class WrongParity(InvalidLevel):
    pass


class UnsupportedDyadic(InvalidLevel):
    pass


# orders and ideals
class ConstructionFailed(BrandtLabError, RuntimeError):
    pass


class MassMismatch(BrandtLabError, RuntimeError):
    pass


class PrimeNotDividingLevel(BrandtLabError, ValueError):
    pass


class NotAdmissible(BrandtLabError, ValueError):
    pass


class ClassificationFailed(BrandtLabError, RuntimeError):
    pass


# spectra
class PrecisionLoss(BrandtLabError, ArithmeticError):
    pass


class AmbiguousType(BrandtLabError, RuntimeError):
    pass


class MissingLocalType(BrandtLabError, ValueError):
    pass


# formulas
class HypothesisViolated(BrandtLabError, ValueError):
    pass


class HomVanishes(BrandtLabError, ValueError):
    pass


class NotInStableRange(BrandtLabError, ValueError):
    pass


class UnsupportedShape(BrandtLabError, ValueError):
    pass
