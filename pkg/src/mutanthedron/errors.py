"""Exception hierarchy shared across the package."""


class MutanthedronError(Exception):
    """Base class for all errors raised by this package."""


class PolyhedronParseError(MutanthedronError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class AngleOutOfRange(MutanthedronError):
    pass


class MismatchedQ(MutanthedronError):
    pass


class IneligibleCircuit(MutanthedronError):
    pass


class NoSideAssignment(MutanthedronError):
    pass


class NotRealizable(MutanthedronError):
    pass


class CombinatoricsMismatch(MutanthedronError):
    pass


class NoConvergence(MutanthedronError):
    pass


class NonCompact(MutanthedronError):
    pass


class NotPerpendicularizable(MutanthedronError):
    pass


class DegenerateBasis(MutanthedronError):
    pass


class StraddlingFace(MutanthedronError):
    pass


class NoRelation(MutanthedronError):
    pass


class JoinFailure(MutanthedronError):
    pass


class Unstabilized(MutanthedronError):
    pass


class Indeterminate(MutanthedronError):
    pass
