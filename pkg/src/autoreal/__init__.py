"""Exact computations with modules over F_p[C_(p^n)], the metacyclic groups
H_(j,e) built from them, and the realization step between them."""

from .errors import (
    AutorealError,
    BoundError,
    DegenerateError,
    InternalContradiction,
    InvariantError,
    MinimalityError,
    ParseError,
    PreconditionError,
    SemanticError,
    ShapeError,
)

__version__ = "0.1.0"

__all__ = [
    "AutorealError",
    "BoundError",
    "DegenerateError",
    "InternalContradiction",
    "InvariantError",
    "MinimalityError",
    "ParseError",
    "PreconditionError",
    "SemanticError",
    "ShapeError",
]
