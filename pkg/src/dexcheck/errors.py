"""Exception types shared by every layer of the package."""


class DexCheckError(Exception):
    """Base class for all engine errors."""


class DimensionMismatch(DexCheckError):
    def __init__(self, message, left=None, right=None, span=None):
        super().__init__(message)
        self.left = left
        self.right = right
        self.span = span


class DivisionByZero(DexCheckError):
    pass


class Overflow(DexCheckError):
    pass


class NegativeRoot(DexCheckError):
    pass


class NonPositive(DexCheckError):
    """A strictly positive magnitude was required (dex gaps, logarithms)."""


class UnknownConstant(DexCheckError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown constant {self.name!r}"


class UnknownIdent(DexCheckError):
    def __init__(self, name, span=None):
        super().__init__(f"unknown identifier {name!r}")
        self.name = name
        self.span = span


class NonDimensionlessArg(DexCheckError):
    def __init__(self, message, span=None):
        super().__init__(message)
        self.span = span


class InvalidInput(DexCheckError, ValueError):
    """Precondition failure in a physics procedure (non-positive mass, bad grid, ...)."""


class NonPositiveMass(InvalidInput):
    pass


class NonPositiveLength(InvalidInput):
    pass


class NonPositiveTemperature(InvalidInput):
    pass


class InvalidDimensionCount(InvalidInput):
    pass


class InvalidN(InvalidInput):
    pass


class InvalidGrid(InvalidInput):
    pass


class DegenerateFit(InvalidInput):
    pass
