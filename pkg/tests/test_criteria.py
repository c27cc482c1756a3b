from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fermat_lefschetz import criteria
from fermat_lefschetz.characters import alpha_character_sum, character, evaluate, is_odd, l_sum
from fermat_lefschetz.criteria import (
    ClassificationRecord,
    Rule,
    bridge_identity_check,
    classify,
    det_factorization_check,
    det_factorization_sides,
    e_value,
    e_weights,
    fast_path,
    group_determinant_check,
    group_determinant_sides,
    relevant_characters,
    verdict_by_characters,
    verdict_by_E,
    verdict_by_rank,
)
from fermat_lefschetz.cyclotomic import is_zero, product
from fermat_lefschetz.errors import EngineError, InputError
from fermat_lefschetz.residue import (
    AlphaTriple,
    build_context,
    enumerate_alphas,
    gonzalez_stabilizer,
    orbit_representatives,
)


def test_classify_elliptic_example():
    rec = classify((1, 2, 4), build_context(2, 7), "cross_validate")
    assert rec.verdict and rec.rule is Rule.DIM_ONE_ELLIPTIC
    assert rec.verdict_by_rank and rec.verdict_by_characters and rec.verdict_by_E
    assert rec.agreement and rec.bridge_ok and rec.det_factorization_ok
    assert (rec.brauer_order, rec.dimension, rec.ta_rank) == (1, 1, 1)


def test_classify_supersingular_carries_no_matrix_data():
    rec = classify((1, 1, 3), build_context(3, 5), "cross_validate")
    assert rec.verdict and rec.rule is Rule.SUPERSINGULAR_F_EVEN
    assert rec.ta_rank is None and rec.verdict_by_rank is None and rec.brauer_order is None


def test_classify_l3():
    rec = classify((1, 1, 1), build_context(2, 3))
    assert rec.verdict and rec.h_alpha == (1, 2)
    rec = classify((1, 1, 1), build_context(7, 3), "cross_validate")
    assert rec.verdict and rec.rule is Rule.DIM_ONE_ELLIPTIC


def test_fast_path_examples():
    assert fast_path(gonzalez_stabilizer((1, 1, 3), build_context(3, 5)), build_context(3, 5)) == (
        True, Rule.SUPERSINGULAR_F_EVEN)
    for l in (7, 11, 13, 19, 31):
        ctx = build_context(2, l)
        assert fast_path(gonzalez_stabilizer((1, 1, l - 2), ctx), ctx)[0] is True
    ctx = build_context(23, 11)
    a = gonzalez_stabilizer((1, 2, 8), ctx)
    assert a.center_degree == 10
    assert fast_path(a, ctx) == (True, Rule.CASE_DEGREE_NOT_6)
    assert fast_path(gonzalez_stabilizer((1, 1, 9), ctx), ctx) == (True, Rule.CASE_AAB)


def test_general_criterion_runs_every_route():
    ctx = build_context(191, 19)
    rec = classify((1, 2, 16), ctx, "fast")
    assert rec.rule is Rule.GENERAL_CRITERION and rec.center_degree == 18
    assert None not in (rec.verdict_by_rank, rec.verdict_by_characters, rec.verdict_by_E)
    assert rec.verdict


def test_modes():
    ctx = build_context(2, 7)
    assert classify((1, 2, 4), ctx, "fast").verdict_by_characters is None
    full = classify((1, 2, 4), ctx, "full")
    assert full.verdict_by_characters is True and full.bridge_ok is None
    with pytest.raises(InputError):
        classify((1, 2, 4), ctx, "slow")


def test_vacuous_criterion():
    ctx = build_context(2, 7)
    full = AlphaTriple(1, 2, 4, h_alpha=tuple(range(1, 7)), h_alpha_size=6, center_degree=1, r=None)
    assert relevant_characters(full, ctx) == []
    assert verdict_by_characters(full, ctx) == (True, [])
    assert verdict_by_E(full, ctx) is True


def test_negative_witness_mechanism():
    # Artificial trivial stabilizer so that the k = 1 character qualifies.
    ctx = build_context(2, 7)
    a = AlphaTriple(1, 2, 4, h_alpha=(1,), h_alpha_size=1, center_degree=6, r=3)
    ok, witnesses = verdict_by_characters(a, ctx)
    assert not ok and 1 in witnesses
    for k in witnesses:
        chi = character(ctx, k)
        assert is_odd(chi) and all(evaluate(chi, h) == 1 for h in a.h_alpha)
        assert is_zero(alpha_character_sum(chi, a.entries))


def test_disagreement_is_engine_error(monkeypatch):
    monkeypatch.setattr(criteria, "ta_rank", lambda alpha, ctx: 0)
    with pytest.raises(EngineError) as exc:
        classify((1, 2, 4), build_context(2, 7), "cross_validate")
    assert exc.value.diagnostics["alpha"] == [1, 2, 4]


def test_record_round_trip():
    rec = classify((1, 2, 16), build_context(191, 19), "cross_validate")
    assert ClassificationRecord.from_dict(rec.to_dict()) == rec


def test_rank_route_on_example():
    ctx = build_context(2, 7)
    assert verdict_by_rank(gonzalez_stabilizer((1, 2, 4), ctx), ctx)
    with pytest.raises(InputError):
        verdict_by_rank(gonzalez_stabilizer((1, 1, 3), build_context(3, 5)), build_context(3, 5))


def test_bridge_single_pair():
    ctx = build_context(2, 7)
    a = gonzalez_stabilizer((1, 2, 4), ctx)
    assert bridge_identity_check(a, ctx, character(ctx, 3))
    with pytest.raises(InputError):
        bridge_identity_check(a, ctx, character(ctx, 1))
    with pytest.raises(InputError):
        bridge_identity_check(a, ctx, character(ctx, 2))


def test_bridge_needs_unconjugated_alpha_sum():
    # With chi(a_i)^-1 on the right the identity breaks on some pair.
    broken = 0
    for p, l in [(2, 7), (11, 5), (2, 13), (3, 11)]:
        ctx = build_context(p, l)
        for raw in enumerate_alphas(l):
            a = gonzalez_stabilizer(raw, ctx)
            for chi in relevant_characters(a, ctx):
                lhs = e_value(a, ctx, chi)
                wrong = alpha_character_sum(chi.inverse(), a.entries) * l_sum(chi) * Fraction(1, l * a.h_alpha_size)
                broken += lhs != wrong
                assert bridge_identity_check(a, ctx, chi)
    assert broken > 0


def test_zero_weights_kill_the_e_sum():
    ctx = build_context(2, 7)
    a = gonzalez_stabilizer((1, 2, 4), ctx)
    zero = {c: Fraction(0) for c in range(1, 7)}
    assert is_zero(e_value(a, ctx, character(ctx, 3), zero))


def test_group_determinant_small_cases():
    f1 = {0: Fraction(7, 3)}
    det, rhs = group_determinant_sides(1, f1)
    assert det == Fraction(7, 3) and rhs == det
    x, y = Fraction(5, 2), Fraction(-3)
    det, rhs = group_determinant_sides(2, {0: x, 1: y})
    assert det == x * x - y * y == (x + y) * (x - y) and rhs == det


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.lists(
    st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=n, max_size=n)))
def test_group_determinant_random(values):
    n = len(values)
    f = dict(enumerate(values))
    assert group_determinant_check(n, f)


def test_det_factorization_example():
    ctx = build_context(2, 7)
    a = gonzalez_stabilizer((1, 2, 4), ctx)
    det, rhs = det_factorization_sides(a, ctx)
    assert det == Fraction(-1, 2)
    assert rhs == e_value(a, ctx, character(ctx, 3)) * Fraction(1, 2)


def test_det_factorization_power_of_two():
    # 2^-r is the normalization that holds once r >= 2; a single 1/2 does not.
    seen_r2 = False
    for p, l in [(11, 5), (29, 7), (2, 13), (23, 11)]:
        ctx = build_context(p, l)
        for raw in enumerate_alphas(l):
            a = gonzalez_stabilizer(raw, ctx)
            if not a.r:
                continue
            assert det_factorization_check(a, ctx)
            if a.r >= 2:
                det, _ = det_factorization_sides(a, ctx)
                w = e_weights(a, ctx)
                half = product([e_value(a, ctx, chi, w) for chi in relevant_characters(a, ctx)], l - 1) * Fraction(1, 2)
                if det != 0:
                    seen_r2 = True
                    assert half != det
    assert seen_r2


def test_det_factorization_skips_r0():
    ctx = build_context(2, 7)
    full = AlphaTriple(1, 2, 4, h_alpha=tuple(range(1, 7)), h_alpha_size=6, center_degree=1, r=None)
    assert det_factorization_check(full, ctx) is None


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 7), (2, 13), (191, 19), (23, 11), (3, 7), (2, 31), (13, 3)]), st.data())
def test_verdict_invariant_under_scaling_and_permutation(pair, data):
    p, l = pair
    ctx = build_context(p, l)
    a = data.draw(st.sampled_from(enumerate_alphas(l)))
    c = data.draw(st.integers(1, l - 1))
    perm = data.draw(st.permutations([0, 1, 2]))
    b = tuple(c * a[i] % l for i in perm)
    ra, rb = classify(a, ctx, "cross_validate"), classify(b, ctx, "cross_validate")
    assert ra.verdict == rb.verdict
    assert (ra.center_degree, ra.brauer_order) == (rb.center_degree, rb.brauer_order)


@pytest.mark.parametrize("p,l", [(191, 19), (229, 19), (311, 31), (373, 31), (149, 37)])
def test_general_criterion_large_split_primes(p, l):
    ctx = build_context(p, l)
    for a in orbit_representatives(l):
        rec = classify(a, ctx, "cross_validate")
        if rec.rule is Rule.GENERAL_CRITERION:
            assert rec.verdict_by_rank == rec.verdict_by_characters == rec.verdict_by_E
