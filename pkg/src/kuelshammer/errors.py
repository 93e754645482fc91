"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for validation problems, 3 for exhausted resource bounds and 4 for
internal invariant violations.
"""

from __future__ import annotations


class KuelshammerError(Exception):
    exit_code = 2


class ValidationError(KuelshammerError):
    """Input failed a structural check."""


class DegenerateInput(ValidationError):
    pass


class FieldMismatch(ValidationError):
    pass


class AmbientMismatch(ValidationError):
    pass


class NotASubspace(ValidationError):
    pass


class SingularGram(ValidationError):
    pass


class NoPresentation(ValidationError):
    pass


class NonAdmissible(ValidationError):
    pass


class SoclePathFailure(ValidationError):
    pass


class DegenerateForm(ValidationError):
    pass


class NotMultiplicative(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotIdeal(ValidationError):
    pass


class ParamOutOfRange(ValidationError):
    pass


class BoundTooSmall(KuelshammerError):
    exit_code = 3

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


class SearchBoundExceeded(KuelshammerError):
    exit_code = 3


class InternalInvariantError(KuelshammerError):
    exit_code = 4


class RadicalFailure(InternalInvariantError):
    pass


class RouteMismatch(InternalInvariantError):
    pass
