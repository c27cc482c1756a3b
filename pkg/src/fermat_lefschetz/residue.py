"""Arithmetic of the unit group (Z/l)^x.

Everything here is finite combinatorics on residues stored in ``[1, l-1]``:
multiplicative orders, the least primitive root, the subgroup ``H``
generated by ``p`` with canonical coset representatives, and the
stabilizer subgroup ``H_alpha`` of a triple ``alpha`` in ``A_l^1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

from .errors import InputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _check_pair(p: int, l: int) -> None:
    if not is_prime(p):
        raise InputError(f"p={p} is not prime")
    if not is_prime(l) or l == 2:
        raise InputError(f"l={l} is not an odd prime")
    if p == l:
        raise InputError(f"p and l must differ (both {p})")


def multiplicative_order(p: int, l: int) -> int:
    """Least ``f >= 1`` with ``p**f == 1 (mod l)``; the residual degree of p in Q(mu_l)."""
    _check_pair(p, l)
    f, x = 1, p % l
    while x != 1:
        x = x * p % l
        f += 1
    return f


def least_residue(c: int, l: int) -> int:
    """The representative of ``c`` mod ``l`` in ``[1, l-1]``."""
    r = c % l
    if r == 0:
        raise InputError(f"{c} is zero mod {l}")
    return r


@lru_cache(maxsize=None)
def primitive_root(l: int) -> int:
    """Least positive primitive root modulo the odd prime ``l``."""
    if not is_prime(l) or l == 2:
        raise InputError(f"l={l} is not an odd prime")
    qs = prime_factors(l - 1)
    for g in range(2, l):
        if all(pow(g, (l - 1) // q, l) != 1 for q in qs):
            return g
    raise AssertionError("unreachable for prime l")


@lru_cache(maxsize=None)
def discrete_log_table(l: int, g: int) -> Tuple[int, ...]:
    """``table[c]`` is the index of ``c`` base ``g``; ``table[0]`` is a -1 sentinel."""
    table = [-1] * l
    x = 1
    for j in range(l - 1):
        table[x] = j
        x = x * g % l
    return tuple(table)


def generated_subgroup(gens: Iterable[int], l: int) -> Tuple[int, ...]:
    """Sorted closure of ``gens`` under multiplication mod ``l``."""
    group = {1}
    frontier = [1]
    gens = [least_residue(x, l) for x in gens]
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = x * s % l
            if y not in group:
                group.add(y)
                frontier.append(y)
    return tuple(sorted(group))


def coset_representatives(subgroup: Sequence[int], l: int) -> Tuple[int, ...]:
    """Least element of each coset of ``subgroup`` in (Z/l)^x, ascending."""
    seen: set[int] = set()
    reps = []
    for c in range(1, l):
        if c in seen:
            continue
        reps.append(c)
        seen.update(c * h % l for h in subgroup)
    return tuple(reps)


def is_subgroup(elements: Iterable[int], l: int) -> bool:
    s = set(elements)
    if 1 not in s or any(x % l == 0 for x in s):
        return False
    return all(a * b % l in s for a in s for b in s)


@dataclass(frozen=True)
class ModulusContext:
    """The arithmetic frame for a pair ``(p, l)``."""

    p: int
    l: int
    f: int
    q_exponent: int
    generator: int
    H: Tuple[int, ...]
    coset_reps_H: Tuple[int, ...]
    d_primes: int
    dlog: Tuple[int, ...] = field(repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def supersingular(self) -> bool:
        return self.f % 2 == 0

    def inverse(self, c: int) -> int:
        return pow(c, -1, self.l)


@lru_cache(maxsize=None)
def build_context(p: int, l: int) -> ModulusContext:
    f = multiplicative_order(p, l)
    g = primitive_root(l)
    H = generated_subgroup([p], l)
    reps = coset_representatives(H, l)
    return ModulusContext(
        p=p,
        l=l,
        f=f,
        q_exponent=f,
        generator=g,
        H=H,
        coset_reps_H=reps,
        d_primes=(l - 1) // f,
        dlog=discrete_log_table(l, g),
    )


@dataclass(frozen=True)
class AlphaTriple:
    """An element of ``A_l^1`` together with its stabilizer ``H_alpha``."""

    a0: int
    a1: int
    a2: int
    h_alpha: Tuple[int, ...]
    h_alpha_size: int
    center_degree: int
    # None when center_degree is odd (no CM pairing of embeddings).
    r: Optional[int]

    @property
    def entries(self) -> Tuple[int, int, int]:
        return (self.a0, self.a1, self.a2)


def validate_triple(alpha: Sequence[int], l: int) -> Tuple[int, int, int]:
    if len(alpha) != 3:
        raise InputError(f"alpha must have three entries, got {len(alpha)}")
    a = tuple(int(x) % l for x in alpha)
    if any(x == 0 for x in a):
        raise InputError(f"alpha={tuple(alpha)} has an entry divisible by {l}")
    if sum(a) % l:
        raise InputError(f"alpha={tuple(alpha)} does not sum to 0 mod {l}")
    return a  # type: ignore[return-value]


def stabilizer_sum(alpha: Sequence[int], ctx: ModulusContext, c: int) -> int:
    """``sum_{h in H} sum_i <h c a_i>``."""
    l = ctx.l
    return sum((h * c * a) % l for h in ctx.H for a in alpha)


def gonzalez_stabilizer(alpha: Sequence[int], ctx: ModulusContext) -> AlphaTriple:
    """Attach ``H_alpha`` to a raw triple.

    ``H_alpha`` is the set of units ``c`` whose translation leaves the whole
    function ``x -> stabilizer_sum(alpha, x)`` unchanged. Agreement at the
    single point ``x = 1`` is necessary but not sufficient: for ``f = 1``
    that level set is about half the group and usually not a subgroup.
    """
    a = validate_triple(alpha, ctx.l)
    l = ctx.l
    sums = [0] + [stabilizer_sum(a, ctx, x) for x in range(1, l)]
    h_alpha = tuple(
        c for c in range(1, l)
        if sums[c] == sums[1] and all(sums[c * x % l] == sums[x] for x in range(1, l))
    )
    size = len(h_alpha)
    degree = (l - 1) // size
    return AlphaTriple(
        a0=a[0],
        a1=a[1],
        a2=a[2],
        h_alpha=h_alpha,
        h_alpha_size=size,
        center_degree=degree,
        r=degree // 2 if degree % 2 == 0 else None,
    )


def enumerate_alphas(l: int) -> list[Tuple[int, int, int]]:
    """All of ``A_l^1`` in lexicographic order."""
    out = []
    for a0 in range(1, l):
        for a1 in range(1, l):
            a2 = (-a0 - a1) % l
            if a2:
                out.append((a0, a1, a2))
    return out


def canonical_orbit_rep(alpha: Sequence[int], l: int) -> Tuple[int, int, int]:
    """Lexicographically least triple among permutations and unit multiples."""
    best = None
    for c in range(1, l):
        t = tuple(sorted(c * a % l for a in alpha))
        if best is None or t < best:
            best = t
    return best  # type: ignore[return-value]


def orbit_representatives(l: int) -> list[Tuple[int, int, int]]:
    return sorted({canonical_orbit_rep(a, l) for a in enumerate_alphas(l)})
