"""Verdicts on whether every Tate class on every power of A is Lefschetz.

Three independent routes are implemented and must agree:

* rank: ``rank T_A == r``;
* characters: ``chi(a0) + chi(a1) + chi(a2) != 0`` for every odd chi
  trivial on ``H_alpha``;
* E-sums: ``(1/|H_alpha|) sum_c e(c) chi(c) != 0`` for the same characters.

Fast paths short-circuit the cases covered by sufficiency results.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .characters import (
    DirichletCharacter,
    alpha_character_sum,
    characters_trivial_on,
    is_odd,
    l_sum,
    weighted_character_sum,
)
from .cyclotomic import CyclotomicElement, is_zero, product, root_of_unity
from .errors import EngineError, InputError
from .residue import AlphaTriple, ModulusContext, gonzalez_stabilizer
from .slopes import (
    brauer_order,
    column_representatives,
    rational_determinant,
    simple_factor_dimension,
    slope_deviation,
    ta_rank,
)


class Rule(str, enum.Enum):
    SUPERSINGULAR_F_EVEN = "SUPERSINGULAR_F_EVEN"
    DIM_ONE_ELLIPTIC = "DIM_ONE_ELLIPTIC"
    CASE_DEGREE_NOT_6 = "CASE_DEGREE_NOT_6"
    CASE_AAB = "CASE_AAB"
    CASE_2POW_TIMES_3 = "CASE_2POW_TIMES_3"
    GENERAL_CRITERION = "GENERAL_CRITERION"


MODES = ("fast", "full", "cross_validate")


def _require_f_odd(ctx: ModulusContext) -> None:
    if ctx.f % 2 == 0:
        raise InputError(f"f={ctx.f} is even for (p, l)=({ctx.p}, {ctx.l}); use the supersingular path")


def relevant_characters(alpha: AlphaTriple, ctx: ModulusContext) -> List[DirichletCharacter]:
    return characters_trivial_on(alpha.h_alpha, ctx)


def verdict_by_characters(alpha: AlphaTriple, ctx: ModulusContext) -> Tuple[bool, List[int]]:
    """Returns the verdict and the exponents k of every failing character."""
    _require_f_odd(ctx)
    failing = [
        chi.k for chi in relevant_characters(alpha, ctx)
        if is_zero(alpha_character_sum(chi, alpha.entries))
    ]
    return not failing, failing


def verdict_by_rank(alpha: AlphaTriple, ctx: ModulusContext) -> bool:
    _require_f_odd(ctx)
    return ta_rank(alpha, ctx) == alpha.r


def e_weights(alpha: AlphaTriple, ctx: ModulusContext) -> Dict[int, Fraction]:
    return {c: slope_deviation(alpha, ctx, c) for c in range(1, ctx.l)}


def e_value(alpha: AlphaTriple, ctx: ModulusContext, chi: DirichletCharacter,
            weights: Optional[Mapping[int, Fraction]] = None) -> CyclotomicElement:
    """``(1/|H_alpha|) sum_c e(c) chi(c)``, i.e. the sum over Gal(C(A)/Q)."""
    w = weights if weights is not None else e_weights(alpha, ctx)
    return weighted_character_sum(chi, w) * Fraction(1, alpha.h_alpha_size)


def verdict_by_E(alpha: AlphaTriple, ctx: ModulusContext) -> bool:
    _require_f_odd(ctx)
    w = e_weights(alpha, ctx)
    return all(not is_zero(e_value(alpha, ctx, chi, w)) for chi in relevant_characters(alpha, ctx))


def bridge_identity_check(alpha: AlphaTriple, ctx: ModulusContext, chi: DirichletCharacter) -> bool:
    """Exact check of the E-sum factorization

        (1/d) sum_c e(c) chi(c) = 1/(l d) * (sum_i chi(a_i)) * (sum_c <c> chi(c)^-1)

    with ``d = |H_alpha|``. Substituting ``u = h a_i c^-1`` in the e(c)
    formula gives ``chi(c) = chi(h) chi(a_i) chi(u)^-1`` with ``chi(h) = 1``.
    """
    _require_f_odd(ctx)
    if not is_odd(chi):
        raise InputError(f"bridge identity needs an odd character, got k={chi.k}")
    if chi.k % alpha.h_alpha_size:
        raise InputError(f"character k={chi.k} is not trivial on H_alpha")
    lhs = e_value(alpha, ctx, chi)
    rhs = alpha_character_sum(chi, alpha.entries) * l_sum(chi) * Fraction(1, ctx.l * alpha.h_alpha_size)
    return lhs == rhs


def group_determinant_sides(n: int, f: Mapping[int, Fraction]) -> Tuple[Fraction, CyclotomicElement]:
    """Both sides of ``det(f(s t^-1)) = prod_psi sum_s f(s) psi(s)`` on Z/n."""
    M = [[Fraction(f[(i - j) % n]) for j in range(n)] for i in range(n)]
    det = rational_determinant(M)
    factors = []
    for k in range(n):
        weights: dict = {}
        for i in range(n):
            weights[k * i % n] = weights.get(k * i % n, 0) + Fraction(f[i])
        factors.append(CyclotomicElement.from_exponent_weights(n, weights))
    return det, product(factors, n)


def group_determinant_check(n: int, f: Mapping[int, Fraction]) -> bool:
    det, prod = group_determinant_sides(n, f)
    return prod == det


def det_factorization_sides(alpha: AlphaTriple, ctx: ModulusContext) -> Optional[Tuple[Fraction, CyclotomicElement]]:
    _require_f_odd(ctx)
    if not alpha.r:
        return None
    l = ctx.l
    reps = column_representatives(alpha, ctx)
    w = e_weights(alpha, ctx)
    U = [[w[s * pow(t, -1, l) % l] for t in reps] for s in reps]
    det = rational_determinant(U)
    evals = [e_value(alpha, ctx, chi, w) for chi in relevant_characters(alpha, ctx)]
    # One factor 1/2 per character of Gal(C(A)/Q)/<iota>; the product has r factors.
    rhs = product(evals, l - 1) * Fraction(1, 2 ** alpha.r)
    return det, rhs


def det_factorization_check(alpha: AlphaTriple, ctx: ModulusContext) -> Optional[bool]:
    """``det(e(s_i s_j^-1)) == 2^-r prod_phi E(phi)``; None when r == 0."""
    sides = det_factorization_sides(alpha, ctx)
    if sides is None:
        return None
    det, rhs = sides
    return rhs == det


def _is_aab(a: Sequence[int]) -> bool:
    return a[0] == a[1] or a[1] == a[2] or a[0] == a[2]


def _is_two_power_times_three(n: int) -> bool:
    if n % 3:
        return False
    m = n // 3
    return m >= 2 and m & (m - 1) == 0


def fast_path(alpha: AlphaTriple, ctx: ModulusContext) -> Optional[Tuple[bool, Rule]]:
    """First sufficiency rule that applies, in the fixed order
    supersingular, dimension one, (a,a,b), degree not divisible by 6,
    degree 2^(s+1)*3."""
    if ctx.f % 2 == 0:
        return True, Rule.SUPERSINGULAR_F_EVEN
    if simple_factor_dimension(alpha, ctx) == 1:
        return True, Rule.DIM_ONE_ELLIPTIC
    if _is_aab(alpha.entries):
        return True, Rule.CASE_AAB
    if alpha.center_degree % 6:
        return True, Rule.CASE_DEGREE_NOT_6
    if _is_two_power_times_three(alpha.center_degree):
        return True, Rule.CASE_2POW_TIMES_3
    return None


@dataclass
class ClassificationRecord:
    p: int
    l: int
    f: int
    alpha: Tuple[int, int, int]
    h_alpha: Tuple[int, ...]
    h_alpha_size: int
    center_degree: int
    r: Optional[int]
    brauer_order: Optional[int]
    dimension: Optional[int]
    verdict: bool
    rule: Rule
    mode: str
    verdict_by_rank: Optional[bool] = None
    verdict_by_characters: Optional[bool] = None
    verdict_by_E: Optional[bool] = None
    agreement: bool = True
    witnesses: List[int] = field(default_factory=list)
    ta_rank: Optional[int] = None
    bridge_ok: Optional[bool] = None
    det_factorization_ok: Optional[bool] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alpha"] = list(self.alpha)
        d["h_alpha"] = list(self.h_alpha)
        d["rule"] = self.rule.value
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "ClassificationRecord":
        kw = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        kw["alpha"] = tuple(kw["alpha"])
        kw["h_alpha"] = tuple(kw["h_alpha"])
        kw["rule"] = Rule(kw["rule"])
        kw["witnesses"] = list(kw.get("witnesses") or [])
        return cls(**kw)


def classify(alpha, ctx: ModulusContext, mode: str = "fast") -> ClassificationRecord:
    """Classify one triple. Raises EngineError if computed verdicts disagree."""
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
    if not isinstance(alpha, AlphaTriple):
        alpha = gonzalez_stabilizer(alpha, ctx)

    rec = ClassificationRecord(
        p=ctx.p, l=ctx.l, f=ctx.f, alpha=alpha.entries, h_alpha=alpha.h_alpha,
        h_alpha_size=alpha.h_alpha_size, center_degree=alpha.center_degree, r=alpha.r,
        brauer_order=None, dimension=None, verdict=True,
        rule=Rule.GENERAL_CRITERION, mode=mode,
    )
    fp = fast_path(alpha, ctx)
    if fp is not None and fp[1] is Rule.SUPERSINGULAR_F_EVEN:
        rec.rule = fp[1]
        return rec

    rec.brauer_order = brauer_order(alpha, ctx)
    rec.dimension = simple_factor_dimension(alpha, ctx)
    if fp is not None:
        rec.rule = fp[1]
        if mode == "fast":
            return rec

    general = fp is None
    if mode == "cross_validate" or general or mode == "full":
        rec.verdict_by_characters, rec.witnesses = verdict_by_characters(alpha, ctx)
    if mode == "cross_validate" or general:
        rec.ta_rank = ta_rank(alpha, ctx)
        rec.verdict_by_rank = rec.ta_rank == alpha.r
        rec.verdict_by_E = verdict_by_E(alpha, ctx)
    if mode == "cross_validate":
        rec.bridge_ok = all(bridge_identity_check(alpha, ctx, chi) for chi in relevant_characters(alpha, ctx))
        rec.det_factorization_ok = det_factorization_check(alpha, ctx)

    computed = [v for v in (rec.verdict_by_rank, rec.verdict_by_characters, rec.verdict_by_E) if v is not None]
    if fp is not None:
        computed.append(fp[0])
    rec.verdict = rec.verdict_by_characters if general else fp[0]
    rec.agreement = len(set(computed)) <= 1
    failures = []
    if not rec.agreement:
        failures.append("verdicts disagree")
    if rec.bridge_ok is False:
        failures.append("bridge identity failed")
    if rec.det_factorization_ok is False:
        failures.append("determinant factorization failed")
    if failures:
        raise EngineError("; ".join(failures) + f" for p={ctx.p}, l={ctx.l}, alpha={alpha.entries}",
                          diagnostics=rec.to_dict())
    return rec
