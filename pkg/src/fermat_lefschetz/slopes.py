"""Slope data of the Jacobi-sum Frobenius and the matrix T_A.

The slope of ``j(alpha)`` at the prime ``c q`` of Q(mu_l) over p is read off
the ideal factorization of the Jacobi sum:

    e(c) = s(c q) - 1/2 = 1/(f l) * sum_i sum_{h in H} (<h a_i c^-1> - l/2)

Rows of T_A are indexed by cosets of H (the primes of Q(mu_l) over p) and
columns by half of the cosets of H_alpha (one embedding of the center from
each complex-conjugate pair).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import lcm
from typing import Dict, Optional, Sequence, Tuple

from .errors import DegenerateCenterError, EngineError
from .residue import AlphaTriple, ModulusContext, coset_representatives


def _entries(alpha) -> Tuple[int, int, int]:
    return alpha.entries if isinstance(alpha, AlphaTriple) else tuple(int(a) for a in alpha)


def slope_deviation_numerator(alpha, ctx: ModulusContext, c: int) -> int:
    """``2 f l e(c)``, an integer in ``[-f l, f l]``."""
    l = ctx.l
    cinv = pow(c, -1, l)
    return sum(2 * ((h * a * cinv) % l) - l for a in _entries(alpha) for h in ctx.H)


@lru_cache(maxsize=4096)
def _deviation_table(a: Tuple[int, int, int], ctx: ModulusContext) -> Tuple[Fraction, ...]:
    den = 2 * ctx.f * ctx.l
    return (Fraction(0),) + tuple(
        Fraction(slope_deviation_numerator(a, ctx, c), den) for c in range(1, ctx.l)
    )


def slope_deviation(alpha, ctx: ModulusContext, c: int) -> Fraction:
    if c % ctx.l == 0:
        raise ValueError(f"c={c} is zero mod {ctx.l}")
    return _deviation_table(_entries(alpha), ctx)[c % ctx.l]


@dataclass(frozen=True)
class SlopeFunction:
    ctx: ModulusContext
    alpha: AlphaTriple
    values: Dict[int, Fraction]

    def __getitem__(self, c: int) -> Fraction:
        return self.values[c % self.ctx.l]

    def slopes(self) -> Dict[int, Fraction]:
        return {c: v + Fraction(1, 2) for c, v in self.values.items()}


def slope_function(alpha: AlphaTriple, ctx: ModulusContext) -> SlopeFunction:
    return SlopeFunction(
        ctx=ctx,
        alpha=alpha,
        values={c: slope_deviation(alpha, ctx, c) for c in range(1, ctx.l)},
    )


def column_representatives(alpha: AlphaTriple, ctx: ModulusContext) -> Tuple[int, ...]:
    """One representative per pair ``{t H_alpha, -t H_alpha}``.

    Walks the least-residue coset representatives of ``H_alpha`` in ascending
    order and keeps one unless its negated coset was already kept.
    """
    l = ctx.l
    hset = set(alpha.h_alpha)
    if (l - 1) in hset:
        raise DegenerateCenterError(
            f"-1 lies in H_alpha for alpha={alpha.entries}, l={l}: the center is not CM"
        )
    kept: list[int] = []
    covered: set[int] = set()
    for t in coset_representatives(alpha.h_alpha, l):
        if t in covered:
            continue
        kept.append(t)
        covered.update(t * h % l for h in hset)
        covered.update((-t * h) % l for h in hset)
    return tuple(kept)


@dataclass(frozen=True)
class TAMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]
    row_labels: Tuple[int, ...]
    col_labels: Tuple[int, ...]


def build_ta_matrix(alpha: AlphaTriple, ctx: ModulusContext,
                    col_labels: Optional[Sequence[int]] = None) -> TAMatrix:
    """The ``d_primes x r`` matrix of slope deviations.

    Entry ``(i, j)`` is ``s_{sigma_j pi}(p_i) - 1/2 = s_pi(sigma_j^-1 p_i) - 1/2``,
    i.e. ``e(t_j^-1 c_i)``. ``col_labels`` overrides the canonical column
    representatives (any member of the same ``H_alpha`` coset works).
    """
    if alpha.center_degree % 2:
        raise DegenerateCenterError(
            f"center degree {alpha.center_degree} is odd for alpha={alpha.entries}, l={ctx.l}"
        )
    l = ctx.l
    cols = tuple(col_labels) if col_labels is not None else column_representatives(alpha, ctx)
    rows = ctx.coset_reps_H
    entries = tuple(
        tuple(slope_deviation(alpha, ctx, pow(t, -1, l) * c % l) for t in cols)
        for c in rows
    )
    return TAMatrix(rows=len(rows), cols=len(cols), entries=entries,
                    row_labels=rows, col_labels=cols)


def _clear_denominators(M: Sequence[Sequence[Fraction]], scale: Optional[int]) -> Tuple[list[list[int]], int]:
    if scale is None:
        scale = 1
        for row in M:
            for x in row:
                scale = lcm(scale, Fraction(x).denominator)
    out = []
    for row in M:
        new = []
        for x in row:
            y = Fraction(x) * scale
            if y.denominator != 1:
                raise EngineError(f"scale {scale} does not clear denominator of {x}")
            new.append(y.numerator)
        out.append(new)
    return out, scale


def _bareiss_echelon(A: list[list[int]]) -> Tuple[int, int]:
    """Fraction-free row echelon in place; returns ``(rank, sign)`` of row swaps."""
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    rank, prev, sign = 0, 1, 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if A[i][col]), None)
        if piv is None:
            continue
        if piv != rank:
            A[rank], A[piv] = A[piv], A[rank]
            sign = -sign
        pv = A[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                q, rem = divmod(A[i][j] * pv - A[i][col] * A[rank][j], prev)
                if rem:
                    raise EngineError("Bareiss step produced an inexact division")
                A[i][j] = q
            A[i][col] = 0
        prev = pv
        rank += 1
    return rank, sign


def rational_rank(M: Sequence[Sequence[Fraction]], scale: Optional[int] = None) -> int:
    """Rank over Q via integer fraction-free elimination.

    ``scale`` multiplies every entry to an integer first; by default the lcm
    of all denominators is used.
    """
    if not M or not M[0]:
        return 0
    A, _ = _clear_denominators(M, scale)
    rank, _ = _bareiss_echelon(A)
    return rank


def rational_determinant(M: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    A, scale = _clear_denominators(M, None)
    rank, sign = _bareiss_echelon(A)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * A[n - 1][n - 1], scale ** n)


def ta_rank(alpha: AlphaTriple, ctx: ModulusContext) -> int:
    T = build_ta_matrix(alpha, ctx)
    return rational_rank(T.entries, scale=2 * ctx.f * ctx.l)


def brauer_order(alpha, ctx: ModulusContext) -> int:
    """Order of End^0(A) in Br(C(A)): lcm of the slope denominators.

    Local degrees are 1 because p splits completely in the center.
    """
    n = 1
    for c in range(1, ctx.l):
        n = lcm(n, (slope_deviation(alpha, ctx, c) + Fraction(1, 2)).denominator)
    return n


def simple_factor_dimension(alpha: AlphaTriple, ctx: ModulusContext) -> int:
    """``n [C(A):Q] / 2`` from Honda-Tate with split p."""
    if alpha.center_degree % 2:
        raise DegenerateCenterError(
            f"center degree {alpha.center_degree} is odd for alpha={alpha.entries}, l={ctx.l}"
        )
    return brauer_order(alpha, ctx) * alpha.center_degree // 2
