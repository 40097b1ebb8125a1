"""Exception hierarchy shared by every module."""


class SemifieldError(Exception):
    pass


class NotPrime(SemifieldError, ValueError):
    pass


class DegreeOverflow(SemifieldError, ValueError):
    pass


class InvalidParams(SemifieldError, ValueError):
    pass


class DivisionByZero(SemifieldError, ZeroDivisionError):
    pass


class ZeroInput(SemifieldError, ValueError):
    pass


class NoSolution(SemifieldError, ArithmeticError):
    pass


class NotInvertible(SemifieldError, ArithmeticError):
    pass


class KMapSingular(NotInvertible):
    pass


class SizeGuard(SemifieldError, RuntimeError):
    pass


class InputNotInFq(SemifieldError, ValueError):
    pass


class SpecMismatch(SemifieldError, ValueError):
    pass


class WrongResidue(SemifieldError, ValueError):
    pass


class OddL(SemifieldError, ValueError):
    pass


class UnsupportedL(SemifieldError, ValueError):
    pass
