"""Exact computer algebra for tridendriform algebras and discrete Magnus expansions.

Submodules: ``treekit`` (planar reduced trees), ``wqsurj`` (surjections and
WQSym), ``trialg`` (tridendriform series), ``seqalg`` (matrix sequences under
summation), ``magnus`` (Magnus elements and convention resolution),
``laws`` and ``verify`` (executable identities) and ``cli``.
"""

from . import laws, magnus, seqalg, treekit, trialg, verify, wqsurj
from .errors import (
    ArityError,
    DimensionError,
    DomainError,
    HorizonError,
    TreeParseError,
    TridendError,
    UndefinedOperationError,
    UnresolvedConventionError,
)

__version__ = "0.1.0"

__all__ = [
    "treekit", "wqsurj", "trialg", "seqalg", "magnus", "laws", "verify",
    "TridendError", "ArityError", "TreeParseError", "DomainError",
    "UndefinedOperationError", "HorizonError", "DimensionError",
    "UnresolvedConventionError",
]
