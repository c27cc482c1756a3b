import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from fermat_lefschetz.errors import DegenerateCenterError
from fermat_lefschetz.residue import build_context, enumerate_alphas, gonzalez_stabilizer
from fermat_lefschetz.slopes import (
    brauer_order,
    build_ta_matrix,
    column_representatives,
    rational_determinant,
    rational_rank,
    simple_factor_dimension,
    slope_deviation,
    slope_function,
    ta_rank,
)


def det_leibniz(M):
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= M[i][perm[i]]
        total += term
    return total


def rank_by_minors(M):
    rows, cols = len(M), len(M[0]) if M else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                if det_leibniz([[M[i][j] for j in cs] for i in rs]):
                    return k
    return 0


def e_oracle(alpha, p, l, c):
    # e(c) straight from least residues, sharing nothing with the engine.
    f = 1
    while pow(p, f, l) != 1:
        f += 1
    H = [pow(p, i, l) for i in range(f)]
    cinv = next(x for x in range(1, l) if x * c % l == 1)
    total = sum(Fraction((h * a * cinv) % l) - Fraction(l, 2) for a in alpha for h in H)
    return total / (f * l)


def test_slope_deviation_examples():
    ctx = build_context(2, 7)
    assert slope_deviation((1, 2, 4), ctx, 1) == Fraction(-1, 2)
    assert slope_deviation((1, 2, 4), ctx, 3) == Fraction(1, 2)


@pytest.mark.parametrize("p,l", [(2, 7), (3, 7), (2, 11), (5, 11), (3, 13), (7, 19), (2, 23)])
def test_slope_deviation_matches_oracle(p, l):
    ctx = build_context(p, l)
    for a in enumerate_alphas(l):
        for c in range(1, l):
            assert slope_deviation(a, ctx, c) == e_oracle(a, p, l, c)


def test_slope_function_values():
    ctx = build_context(2, 7)
    sf = slope_function(gonzalez_stabilizer((1, 2, 4), ctx), ctx)
    assert sf[3] == Fraction(1, 2) and sf[10] == Fraction(1, 2)
    assert set(sf.slopes().values()) == {0, 1}


def test_ta_matrix_example():
    ctx = build_context(2, 7)
    T = build_ta_matrix(gonzalez_stabilizer((1, 2, 4), ctx), ctx)
    assert (T.rows, T.cols) == (2, 1)
    assert T.entries == ((Fraction(-1, 2),), (Fraction(1, 2),))
    assert T.row_labels == (1, 3) and T.col_labels == (1,)
    assert rational_rank(T.entries) == 1


def test_degenerate_center_rejected():
    ctx = build_context(2, 3)
    a = gonzalez_stabilizer((1, 1, 1), ctx)
    with pytest.raises(DegenerateCenterError):
        build_ta_matrix(a, ctx)
    with pytest.raises(DegenerateCenterError):
        column_representatives(a, ctx)


def odd_f_contexts(p_list, l_max):
    for l in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]:
        if l > l_max:
            break
        for p in p_list:
            if p != l:
                ctx = build_context(p, l)
                if ctx.f % 2:
                    yield ctx


@pytest.mark.parametrize("ctx", list(odd_f_contexts([2, 3, 5, 7], 31)), ids=lambda c: f"p{c.p}-l{c.l}")
def test_column_reps_pair_up_cosets(ctx):
    l = ctx.l
    for a in enumerate_alphas(l):
        al = gonzalez_stabilizer(a, ctx)
        if al.center_degree % 2:
            continue
        reps = column_representatives(al, ctx)
        assert len(reps) == al.r
        cover = [frozenset(s * t * h % l for h in al.h_alpha) for t in reps for s in (1, l - 1)]
        assert len(cover) == 2 * al.r and frozenset().union(*cover) == frozenset(range(1, l))
    # iota acts freely on the primes over p when f is odd
    for c in ctx.coset_reps_H:
        assert {c * h % l for h in ctx.H} != {(-c * h) % l for h in ctx.H}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(odd_f_contexts([2, 3, 5, 7, 11, 13], 23))), st.data())
def test_ta_matrix_label_invariance(ctx, data):
    l = ctx.l
    a = gonzalez_stabilizer(data.draw(st.sampled_from(enumerate_alphas(l))), ctx)
    if a.center_degree % 2:
        return
    T = build_ta_matrix(a, ctx)
    seed = data.draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    alt = [t * rng.choice(a.h_alpha) % l for t in T.col_labels]
    assert build_ta_matrix(a, ctx, alt).entries == T.entries
    rank = rational_rank(T.entries, scale=2 * ctx.f * l)
    assert rank <= a.r
    rows = list(T.entries)
    rng.shuffle(rows)
    order = list(range(T.cols))
    rng.shuffle(order)
    shuffled = [[row[j] for j in order] for row in rows]
    assert rational_rank(shuffled) == rank
    # -t instead of t negates a column and keeps the rank
    flipped = build_ta_matrix(a, ctx, [(-t) % l for t in T.col_labels])
    assert flipped.entries == tuple(tuple(-x for x in row) for row in T.entries)


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=c, max_size=c),
            min_size=r, max_size=r)))


@settings(max_examples=300)
@given(matrices)
def test_rank_matches_minor_enumeration(M):
    assert rational_rank(M) == rank_by_minors(M)


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_low_rank_integer_matrices(M):
    # duplicating a row never raises the rank
    M = [list(map(Fraction, r)) for r in M]
    assert rational_rank(M + [M[0]]) == rational_rank(M) == rank_by_minors(M)


@settings(max_examples=200)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_determinant_matches_leibniz(M):
    assert rational_determinant(M) == det_leibniz(M)


def test_rank_examples():
    I3 = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert rational_rank(I3) == 3
    assert rational_rank([[Fraction(-1, 2)], [Fraction(1, 2)]]) == 1
    assert rational_rank([[Fraction(0)] * 3] * 2) == 0


def test_brauer_and_dimension_example():
    ctx = build_context(2, 7)
    a = gonzalez_stabilizer((1, 2, 4), ctx)
    assert brauer_order(a, ctx) == 1
    assert simple_factor_dimension(a, ctx) == 1


@pytest.mark.parametrize("ctx", list(odd_f_contexts([2, 3, 5, 7], 31)), ids=lambda c: f"p{c.p}-l{c.l}")
def test_brauer_order_odd_and_divides_f(ctx):
    for a in enumerate_alphas(ctx.l):
        al = gonzalez_stabilizer(a, ctx)
        n = brauer_order(al, ctx)
        assert n % 2 == 1 and ctx.f % n == 0
        if al.center_degree % 2 == 0:
            dim = simple_factor_dimension(al, ctx)
            if dim == 1:
                assert al.center_degree == 2 and n == 1
            if al.center_degree >= 4:
                assert dim >= 2
            assert ta_rank(al, ctx) <= al.r
