"""Ground truth from explicit Jacobi sums over small finite fields.

This module never looks at the combinatorial slope formula. It builds
F_{p^f}, sums characters directly, and (for f = 1) reads slopes off p-adic
valuations of the resulting cyclotomic integer, so agreement with
``slopes`` is a genuine cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CyclotomicElement, conjugate, galois_action, times_root_of_unity
from .errors import EngineError, InputError
from .residue import is_prime, multiplicative_order, prime_factors, primitive_root, validate_triple

MAX_FIELD_SIZE = 10**6


# --- polynomials over F_p as ascending coefficient lists, no trailing zeros ---

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: List[int], m: List[int], p: int) -> List[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, b in enumerate(m):
            a[shift + i] = (a[shift + i] - c * b) % p
        _trim(a)
    return a


def _polymulmod(a: List[int], b: List[int], m: List[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, m, p)


def _polypowmod(a: List[int], e: int, m: List[int], p: int) -> List[int]:
    result = [1]
    base = _polymod(a, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return result


def _polygcd(a: List[int], b: List[int], p: int) -> List[int]:
    a, b = _trim(a[:]), _trim(b[:])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _is_irreducible(m: List[int], p: int) -> bool:
    """Ben-Or: no factor of degree <= deg/2 shares a root with x^(p^i) - x."""
    deg = len(m) - 1
    xp = [0, 1]
    for _ in range(deg // 2):
        xp = _polypowmod(xp, p, m, p)
        diff = xp[:] + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _polygcd(m, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def least_irreducible(p: int, f: int) -> Tuple[int, ...]:
    """Monic irreducible of degree f over F_p with least lower-coefficient encoding."""
    for idx in range(p ** f):
        low = [(idx // p ** i) % p for i in range(f)]
        m = low + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("an irreducible polynomial always exists")


@dataclass(frozen=True)
class FiniteFieldTable:
    """F_{p^f} with elements encoded as ``sum c_i p^i`` of their coefficient vectors."""

    p: int
    f: int
    modulus: Tuple[int, ...]
    generator: int
    log: np.ndarray = field(repr=False, compare=False)
    digits: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.p ** self.f

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def decode(self, idx: int) -> List[int]:
        return [(idx // self.p ** i) % self.p for i in range(self.f)]


@lru_cache(maxsize=32)
def build_field(p: int, f: int) -> FiniteFieldTable:
    if not is_prime(p):
        raise InputError(f"p={p} is not prime")
    q = p ** f
    if q > MAX_FIELD_SIZE:
        raise InputError(f"field size {q} exceeds {MAX_FIELD_SIZE}")
    m = list(least_irreducible(p, f))
    qs = prime_factors(q - 1)
    decode = lambda idx: _trim([(idx // p ** i) % p for i in range(f)])
    gen = None
    for idx in range(1, q):
        cand = decode(idx)
        if all(_polypowmod(cand, (q - 1) // r, m, p) != [1] for r in qs):
            gen = idx
            break
    if gen is None:
        raise EngineError(f"no generator found for F_{q}")
    log = np.full(q, -1, dtype=np.int64)
    g = decode(gen)
    x = [1]
    for j in range(q - 1):
        enc = sum(c * p ** i for i, c in enumerate(x))
        if log[enc] != -1:
            raise EngineError(f"element {gen} is not a generator of F_{q}^x")
        log[enc] = j
        x = _polymulmod(x, g, m, p)
    digits = (np.arange(q, dtype=np.int64)[:, None] // (p ** np.arange(f, dtype=np.int64))[None, :]) % p
    return FiniteFieldTable(p=p, f=f, modulus=tuple(m), generator=gen, log=log, digits=digits)


def jacobi_sum(alpha: Sequence[int], field: FiniteFieldTable, l: int) -> CyclotomicElement:
    """``-sum_{1 + v1 + v2 = 0} psi(v1)^a1 psi(v2)^a2`` with ``psi(generator) = zeta_l``."""
    a = validate_triple(alpha, l)
    q = field.size
    if (q - 1) % l:
        raise InputError(f"{l} does not divide {q} - 1")
    p = field.p
    powers = p ** np.arange(field.f, dtype=np.int64)
    minus_one = np.zeros(field.f, dtype=np.int64)
    minus_one[0] = p - 1
    v1 = np.arange(1, q, dtype=np.int64)
    d2 = (minus_one[None, :] - field.digits[1:]) % p
    v2 = d2 @ powers
    keep = v2 != 0
    v1, v2 = v1[keep], v2[keep]
    exps = (a[1] * field.log[v1] + a[2] * field.log[v2]) % l
    counts = np.bincount(exps, minlength=l)
    return CyclotomicElement.from_exponent_counts(l, [-int(c) for c in counts])


def weight_check(j: CyclotomicElement, q: int) -> bool:
    """``j * conj(j) == q`` exactly."""
    return j * conjugate(j) == q


def galois_stabilizer(j: CyclotomicElement, l: int) -> Tuple[int, ...]:
    """Units t with ``sigma_t(j) = (root of unity) * j``, i.e. fixing the ideal (j)."""
    targets = set()
    for k in range(l):
        shifted = times_root_of_unity(j, k)
        targets.update((shifted, -shifted))
    return tuple(t for t in range(1, l) if galois_action(j, t) in targets)


# --- p-adic slope oracle for f = 1 ---

def hensel_lift_root(u: int, l: int, p: int, k: int = 3) -> int:
    """Lift a root of x^l - 1 mod p to one mod p^k by Newton iteration."""
    mod = p
    x = u % p
    if pow(x, l, p) != 1:
        raise InputError(f"{u} is not an l-th root of unity mod {p}")
    while mod < p ** k:
        mod = min(mod * mod, p ** k)
        fx = (pow(x, l, mod) - 1) % mod
        dfx = l * pow(x, l - 1, mod) % mod
        x = (x - fx * pow(dfx, -1, mod)) % mod
    return x


def padic_valuation_mod(n: int, p: int, k: int) -> int:
    n %= p ** k
    if n == 0:
        raise EngineError(f"value vanishes mod {p}^{k}; precision exhausted")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _evaluate_integral(j: CyclotomicElement, z: int, mod: int) -> int:
    acc = 0
    for c in reversed(j.coeffs):
        if c.denominator != 1:
            raise EngineError("Jacobi sum has non-integral coefficients")
        acc = (acc * z + c.numerator) % mod
    return acc


def base_root(p: int, l: int) -> int:
    """The l-th root of unity ``g^((p-1)/l)`` mod p for the least primitive root g."""
    return pow(primitive_root(p), (p - 1) // l, p)


@dataclass(frozen=True)
class SlopeOracle:
    """Valuations of ``j(alpha)`` at the degree-one primes over p (f = 1)."""

    p: int
    l: int
    alpha: Tuple[int, int, int]
    jacobi: CyclotomicElement
    lifted_root: int

    def valuation_at(self, c: int, twist: int = 1) -> int:
        """Slope at the prime ``(p, zeta - u^(twist c^-1))`` with u the lifted base root."""
        mod = self.p ** 3
        e = twist * pow(c, -1, self.l) % self.l
        return padic_valuation_mod(_evaluate_integral(self.jacobi, pow(self.lifted_root, e, mod), mod), self.p, 3)

    def valuations(self, twist: int = 1) -> Dict[int, int]:
        return {c: self.valuation_at(c, twist) for c in range(1, self.l)}


def build_slope_oracle(alpha: Sequence[int], p: int, l: int) -> SlopeOracle:
    if p % l != 1:
        raise InputError(f"the p-adic oracle needs p = 1 mod l, got p={p}, l={l}")
    if p > 10**4:
        raise InputError(f"p={p} exceeds the oracle limit 10^4")
    a = validate_triple(alpha, l)
    j = jacobi_sum(a, build_field(p, 1), l)
    return SlopeOracle(p=p, l=l, alpha=a, jacobi=j, lifted_root=hensel_lift_root(base_root(p, l), l, p))


def slope_oracle_f1(alpha: Sequence[int], p: int, l: int, c: int, twist: int = 1) -> Fraction:
    """p-adic slope of ``j(alpha)`` at the prime labelled ``c`` (valuation over ord(p) = 1)."""
    v = build_slope_oracle(alpha, p, l).valuation_at(c, twist)
    if v > 1:
        raise EngineError(f"valuation {v} exceeds weight 1")
    return Fraction(v)


def calibrate_twist(oracle: SlopeOracle, expected: Dict[int, Fraction]) -> Optional[int]:
    """Least twist t aligning oracle valuations with ``expected[c]`` for every c, or None."""
    for t in range(1, oracle.l):
        vals = oracle.valuations(t)
        if all(vals[c] == expected[c] for c in range(1, oracle.l)):
            return t
    return None


def q_for(p: int, l: int) -> int:
    return p ** multiplicative_order(p, l)
