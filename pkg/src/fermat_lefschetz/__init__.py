"""Exact Tate-versus-Lefschetz verdicts for abelian factors of Fermat curves.

Given a prime ``p``, an odd prime ``l != p`` and a triple ``alpha`` in
``A_l^1``, decide whether every Tate class on every power of the abelian
variety whose Frobenius is the Jacobi sum ``j(alpha)`` is Lefschetz. Three
exact routes (matrix rank, character sums, slope-weighted sums) are
implemented and checked against each other.
"""

__version__ = "0.1.0"

from .errors import DegenerateCenterError, EngineError, InputError  # noqa: E402
from .residue import AlphaTriple, ModulusContext, build_context, gonzalez_stabilizer  # noqa: E402
from .criteria import ClassificationRecord, Rule, classify  # noqa: E402

__all__ = [
    "AlphaTriple",
    "ClassificationRecord",
    "DegenerateCenterError",
    "EngineError",
    "InputError",
    "ModulusContext",
    "Rule",
    "build_context",
    "classify",
    "gonzalez_stabilizer",
]
