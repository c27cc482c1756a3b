"""Dirichlet characters of (Z/l)^x with values in Q(zeta_{l-1}).

A character is pinned by an exponent ``k`` against the context generator
``g``: ``chi(g^j) = zeta_{l-1}^(k j)``. All values share the conductor
``l - 1`` so sums over characters of different orders never need embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CyclotomicElement, root_of_unity
from .errors import InputError
from .residue import ModulusContext, discrete_log_table, is_subgroup


@dataclass(frozen=True)
class DirichletCharacter:
    l: int
    g: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % (self.l - 1))

    @property
    def order(self) -> int:
        return (self.l - 1) // gcd(self.k, self.l - 1)

    @property
    def conductor(self) -> int:
        return self.l - 1

    def index(self, c: int) -> int:
        """Exponent of zeta_{l-1} in chi(c)."""
        r = c % self.l
        if r == 0:
            raise InputError(f"character evaluated at {c} = 0 mod {self.l}")
        return self.k * discrete_log_table(self.l, self.g)[r] % (self.l - 1)

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.l, self.g, -self.k)


def character(ctx: ModulusContext, k: int) -> DirichletCharacter:
    return DirichletCharacter(ctx.l, ctx.generator, k)


def all_characters(ctx: ModulusContext) -> list[DirichletCharacter]:
    return [character(ctx, k) for k in range(ctx.l - 1)]


def evaluate(chi: DirichletCharacter, c: int) -> CyclotomicElement:
    return root_of_unity(chi.conductor, chi.index(c))


def is_odd(chi: DirichletCharacter) -> bool:
    return chi.k % 2 == 1


def characters_trivial_on(h_alpha: Sequence[int], ctx: ModulusContext) -> list[DirichletCharacter]:
    """Odd characters whose kernel contains ``h_alpha``.

    ``h_alpha`` is cyclic of order ``d``, generated by ``g^((l-1)/d)``, so
    triviality on it is ``d | k``.
    """
    if not is_subgroup(h_alpha, ctx.l):
        raise InputError(f"{tuple(h_alpha)} is not a subgroup of (Z/{ctx.l})^x")
    d = len(h_alpha)
    return [character(ctx, k) for k in range(0, ctx.l - 1, d) if k % 2 == 1]


def _sum_of_values(chi: DirichletCharacter, weighted: Iterable[tuple[int, Fraction | int]]) -> CyclotomicElement:
    pairs = [(c, Fraction(w)) for c, w in weighted]
    den = reduce(lcm, (w.denominator for _, w in pairs), 1)
    n = chi.conductor
    acc = [0] * n
    for c, w in pairs:
        acc[chi.index(c)] += w.numerator * (den // w.denominator)
    return CyclotomicElement.from_exponent_counts(n, acc) * Fraction(1, den)


def alpha_character_sum(chi: DirichletCharacter, alpha: Sequence[int]) -> CyclotomicElement:
    """chi(a0) + chi(a1) + chi(a2)."""
    return _sum_of_values(chi, ((a, 1) for a in alpha))


def weighted_character_sum(chi: DirichletCharacter, w: Mapping[int, Fraction | int]) -> CyclotomicElement:
    """``sum_c w(c) chi(c)`` over every unit c mod l."""
    missing = [c for c in range(1, chi.l) if c not in w]
    if missing:
        raise InputError(f"weights missing for residues {missing[:5]}")
    return _sum_of_values(chi, ((c, w[c]) for c in range(1, chi.l)))


def l_sum(chi: DirichletCharacter) -> CyclotomicElement:
    """``sum_c <c> chi(c)^(-1)``; nonzero for every odd chi."""
    if not is_odd(chi):
        raise InputError(f"l_sum requires an odd character, got k={chi.k}")
    return _sum_of_values(chi.inverse(), ((c, c) for c in range(1, chi.l)))
