"""Exception hierarchy.

Errors fall into two families that the command line maps to distinct exit
codes: input errors (malformed expressions and documents) and domain errors
(a well-formed request that is mathematically invalid).
"""


class AspecError(Exception):
    """Base class for every error raised by aspeckit."""


class DomainError(AspecError):
    """A well-formed request that fails on mathematical grounds."""


class InputError(AspecError):
    """Malformed textual input."""


class FieldMismatch(DomainError, TypeError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class Singular(DomainError):
    """Raised when inverting a matrix that is not a unit."""


class SizeMismatch(DomainError, ValueError):
    pass


class CompositionMismatch(DomainError):
    pass


class PresentationMismatch(DomainError):
    pass


class RelationViolation(DomainError):
    def __init__(self, message, relations=()):
        super().__init__(message)
        self.relations = tuple(relations)


class SourceRelationViolation(RelationViolation):
    pass


class InvalidModule(RelationViolation):
    pass


class CharNotZero(DomainError):
    pass


class InnerNotContained(DomainError):
    pass


class NotSimpleSummand(DomainError):
    pass


class NonRationalRelations(DomainError):
    pass


class NonFunctorialDiagram(DomainError):
    pass


class ExprSyntaxError(InputError):
    """Syntax error in an expression; ``column`` is 1-based."""

    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column


class UnknownGenerator(InputError):
    pass


class DocumentError(InputError):
    pass


class ValidationError(DomainError):
    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = dict(failures or {})
