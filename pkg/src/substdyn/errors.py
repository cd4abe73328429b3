"""Error taxonomy shared by the whole package.

Every failure mode maps to exactly one process exit code so that shell
callers can react without parsing messages:

    1  malformed input text (bad rule syntax, unknown letters, duplicates)
    2  violated precondition of an operation (non-primitive, wrong height, ...)
    3  a configured resource budget would be exceeded
    4  an internal invariant failed -- always a bug, never a user error
"""


class SubstError(Exception):
    """Base class for all errors raised on purpose by this package."""

    exit_code = 4


class SpecParseError(SubstError):
    """The substitution description text could not be parsed."""

    exit_code = 1


class PreconditionError(SubstError):
    """The input is well-formed but outside an operation's domain."""

    exit_code = 2


class EstimationError(PreconditionError):
    """Not enough usable data points for a statistical fit."""


class ResourceLimitError(SubstError):
    """Completing the request would exceed a configured budget."""

    exit_code = 3


class InternalError(SubstError):
    """A cross-check that must hold by theorem (or by construction) failed."""

    exit_code = 4
