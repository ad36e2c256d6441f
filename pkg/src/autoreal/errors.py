"""Exception hierarchy shared by the library and the CLI.

The CLI maps each family onto an exit code: parse problems exit 2,
semantic/axiom violations exit 3, resource bounds exit 4.
"""


class AutorealError(Exception):
    exit_code = 1


class ParseError(AutorealError, ValueError):
    exit_code = 2


class SemanticError(AutorealError, ValueError):
    exit_code = 3


class InvariantError(SemanticError):
    """A value violates a structural invariant (e.g. sigma^(p^n) != I)."""


class DimensionError(SemanticError):
    pass


class PreconditionError(SemanticError):
    pass


class ShapeError(SemanticError):
    pass


class MinimalityError(SemanticError):
    pass


class DegenerateError(SemanticError):
    pass


class InternalContradiction(SemanticError):
    pass


class BoundError(AutorealError):
    exit_code = 4
