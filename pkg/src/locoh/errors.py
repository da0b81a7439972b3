"""Exception hierarchy shared by all locoh modules."""


class LocohError(Exception):
    """Base class for every error raised by this package."""


class CompositeModulus(LocohError, ValueError):
    pass


class ReduciblePolynomial(LocohError, ValueError):
    pass


class SpecMismatch(LocohError, ValueError):
    pass


class NotAUnit(LocohError, ArithmeticError):
    pass


class NoSolution(LocohError, ArithmeticError):
    pass


class NotInvertible(LocohError, ValueError):
    pass


class CapExceeded(LocohError, RuntimeError):
    """A configured size cap would be exceeded; the CLI maps this to exit code 3."""


class OrderCapExceeded(CapExceeded):
    pass


class OracleCapExceeded(CapExceeded):
    pass


class UnsupportedLevel(LocohError, ValueError):
    pass


class NonIntegralIndex(LocohError, ValueError):
    pass


class InvalidNorm(LocohError, ValueError):
    pass


class GroupFileError(LocohError, ValueError):
    pass
