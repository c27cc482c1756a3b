"""Identity and invariant suites run by ``fermat-lefschetz selftest``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Sequence, Tuple

from .characters import all_characters, is_odd, l_sum
from .criteria import (
    bridge_identity_check,
    classify,
    det_factorization_check,
    group_determinant_check,
    relevant_characters,
)
from .cyclotomic import is_zero
from .jacobi import build_field, build_slope_oracle, jacobi_sum, weight_check
from .residue import (
    ModulusContext,
    build_context,
    enumerate_alphas,
    gonzalez_stabilizer,
    is_prime,
    orbit_representatives,
)
from .slopes import brauer_order, slope_deviation

GRID_PRIMES = (2, 3, 5, 7, 11, 13)
WEIGHT_PAIRS = ((7, 3), (11, 5), (29, 7), (13, 3), (31, 5))
ORACLE_PAIRS = ((7, 3), (11, 5), (29, 7), (23, 11))


def odd_primes_upto(n: int) -> List[int]:
    return [x for x in range(3, n + 1) if is_prime(x)]


def odd_f_grid(l_max: int, p_list: Sequence[int] = GRID_PRIMES) -> Iterator[ModulusContext]:
    """Contexts (p, l) with l <= l_max, l != p and odd residual degree."""
    for l in odd_primes_upto(l_max):
        for p in p_list:
            if p != l:
                ctx = build_context(p, l)
                if ctx.f % 2 == 1:
                    yield ctx


def suite_agreement(l_max: int, rng) -> Tuple[bool, str]:
    n = 0
    for ctx in odd_f_grid(l_max):
        for a in orbit_representatives(ctx.l):
            classify(a, ctx, "cross_validate")
            n += 1
    return True, f"{n} deduped triples agree on all three routes"


def suite_bridge(l_max: int, rng) -> Tuple[bool, str]:
    n = bad = 0
    for ctx in odd_f_grid(l_max):
        for a in enumerate_alphas(ctx.l):
            al = gonzalez_stabilizer(a, ctx)
            for chi in relevant_characters(al, ctx):
                n += 1
                bad += not bridge_identity_check(al, ctx, chi)
    return bad == 0, f"{n - bad}/{n} (alpha, chi) pairs"


def suite_det_factorization(l_max: int, rng) -> Tuple[bool, str]:
    n = bad = 0
    for ctx in odd_f_grid(l_max):
        for a in enumerate_alphas(ctx.l):
            n += 1
            bad += det_factorization_check(gonzalez_stabilizer(a, ctx), ctx) is not True
    return bad == 0, f"{n - bad}/{n} triples"


def suite_group_determinant(trials: int, rng) -> Tuple[bool, str]:
    bad = 0
    for _ in range(trials):
        n = rng.randint(1, 10)
        f = {i: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for i in range(n)}
        bad += not group_determinant_check(n, f)
    return bad == 0, f"{trials - bad}/{trials} random functions"


def suite_lsum(l_max: int, rng) -> Tuple[bool, str]:
    n = bad = 0
    for l in odd_primes_upto(l_max):
        ctx = build_context(2, l)
        for chi in all_characters(ctx):
            if is_odd(chi):
                n += 1
                bad += is_zero(l_sum(chi))
    return bad == 0, f"{n - bad}/{n} odd characters nonvanishing"


def suite_slope_invariants(l_max: int, rng) -> Tuple[bool, str]:
    n = bad = 0
    half = Fraction(1, 2)
    for ctx in odd_f_grid(l_max):
        l, scale = ctx.l, 2 * ctx.f * ctx.l
        for a in enumerate_alphas(l):
            n += 1
            e = [None] + [slope_deviation(a, ctx, c) for c in range(1, l)]
            ok = all(e[c] + e[l - c] == 0 for c in range(1, l))
            ok &= all(e[c * h % l] == e[c] for c in range(1, l) for h in ctx.H)
            ok &= all(-half <= e[c] <= half and (e[c] * scale).denominator == 1 for c in range(1, l))
            ok &= sum(e[1:]) == 0
            ok &= set(ctx.H) <= set(gonzalez_stabilizer(a, ctx).h_alpha)
            ok &= brauer_order(a, ctx) % 2 == 1
            bad += not ok
    return bad == 0, f"{n - bad}/{n} triples"


def suite_jacobi_weight(pairs, rng) -> Tuple[bool, str]:
    n = bad = 0
    for p, l in pairs:
        ctx = build_context(p, l)
        fld = build_field(p, ctx.f)
        for a in enumerate_alphas(l):
            n += 1
            bad += not weight_check(jacobi_sum(a, fld, l), ctx.q)
    return bad == 0, f"{n - bad}/{n} Jacobi sums of weight 1"


def suite_f1_oracle(pairs, rng) -> Tuple[bool, str]:
    n = bad = 0
    for p, l in pairs:
        ctx = build_context(p, l)
        for a in enumerate_alphas(l):
            n += 1
            oracle = build_slope_oracle(a, p, l)
            expected = sorted(slope_deviation(a, ctx, c) + Fraction(1, 2) for c in range(1, l))
            bad += sorted(Fraction(v) for v in oracle.valuations().values()) != expected
    return bad == 0, f"{n - bad}/{n} valuation multisets match"


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def suites_for(level: str) -> List[Tuple[str, Callable, object]]:
    deep = level == "deep"
    return [
        ("criterion_agreement", suite_agreement, 31 if deep else 13),
        ("bridge_identity", suite_bridge, 19 if deep else 13),
        ("group_determinant", suite_group_determinant, 100 if deep else 20),
        ("det_factorization", suite_det_factorization, 19 if deep else 13),
        ("lsum_nonvanishing", suite_lsum, 31 if deep else 13),
        ("slope_invariants", suite_slope_invariants, 31 if deep else 13),
        ("jacobi_weight", suite_jacobi_weight, WEIGHT_PAIRS if deep else WEIGHT_PAIRS[:2]),
        ("f1_slope_oracle", suite_f1_oracle, ORACLE_PAIRS if deep else ORACLE_PAIRS[:2]),
    ]


def run_selftest(level: str = "quick", seed: int = 0) -> List[SuiteResult]:
    if level not in ("quick", "deep"):
        raise ValueError(f"unknown selftest level {level!r}")
    rng = random.Random(seed)
    results = []
    for name, fn, arg in suites_for(level):
        t = time.perf_counter()
        try:
            ok, detail = fn(arg, rng)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, ok, detail, time.perf_counter() - t))
    return results
