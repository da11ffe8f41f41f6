"""Exception types raised by nullitylab.

Every error carries enough context to be reported by the CLI; numerical
failures subclass :class:`NumericalError` so they map to exit code 3.
"""


class NullityLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(NullityLabError, ValueError):
    pass


class SingularMetric(NullityLabError, ValueError):
    pass


class DegeneratePlane(NullityLabError, ValueError):
    pass


class BadDimension(NullityLabError, ValueError):
    pass


class BadMode(NullityLabError, ValueError):
    pass


class TrivialNullity(NullityLabError, ValueError):
    """An operation needing non-trivial nullity got ``{0}`` or the full space."""


class NotInNullity(NullityLabError, ValueError):
    pass


class CertificateFailure(NullityLabError):
    def __init__(self, clause, certificate=None):
        super().__init__(f"certificate clause failed: {clause}")
        self.clause = clause
        self.certificate = certificate


class NumericalError(NullityLabError, ArithmeticError):
    """A verdict that depends on the chosen tolerance or on random seeds."""


class IllConditioned(NumericalError):
    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class SubalgebraClosureViolation(NumericalError):
    pass


class NonlinearNullJacobiSet(NumericalError):
    pass


class NoWitness(NumericalError):
    pass


class ClosureOverflow(NumericalError):
    pass


class Inconclusive(NumericalError):
    pass


class EigenDegeneracy(NumericalError):
    def __init__(self, message, gaps=None):
        super().__init__(message)
        self.gaps = gaps
