"""Exception hierarchy shared by every module."""


class SepCanonError(Exception):
    """Base class for all package errors."""


class InvalidInput(SepCanonError, ValueError):
    pass


class InvalidDensity(InvalidInput):
    """A matrix failed density-matrix validation.

    ``violations`` lists every failed invariant as ``(kind, detail)`` pairs,
    not only the one that selected the exception class.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotHermitian(InvalidDensity):
    pass


class TraceNotOne(InvalidDensity):
    pass


class NotPositive(InvalidDensity):
    pass


class UnsupportedDimension(SepCanonError):
    pass


class InconsistentState(SepCanonError):
    """Input is impossible for a valid state (e.g. two negative PT eigenvalues)."""


class NotAProductVector(SepCanonError):
    pass


class DependentInputs(SepCanonError):
    pass


class DegenerateParameter(SepCanonError):
    pass


class NoSolutionFound(SepCanonError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


SearchFailure = NoSolutionFound


class NotSeparableInput(SepCanonError):
    pass


class NotApplicable(SepCanonError):
    pass


class NumericalRankMismatch(SepCanonError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
