"""Exception hierarchy shared by the library and the command line."""


class CoxTwistError(Exception):
    """Base class for all errors raised by coxtwist."""

    exit_code = 1


class ParseError(CoxTwistError, ValueError):
    """A diagram document is malformed."""

    exit_code = 2


class DomainError(CoxTwistError, ValueError):
    """An operation was called outside its precondition."""

    exit_code = 1


class CapacityError(CoxTwistError):
    """An exhaustive search would exceed its configured guard.

    ``partial`` carries whatever was computed before the guard tripped.
    """

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantViolation(CoxTwistError, AssertionError):
    """A structural invariant that should always hold was found broken."""

    exit_code = 4
