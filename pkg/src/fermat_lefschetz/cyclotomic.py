"""Exact arithmetic in Q(zeta_n).

Elements live in the power basis ``1, zeta, ..., zeta^(phi(n)-1)`` and are
always reduced modulo the n-th cyclotomic polynomial. Internally an element
is an integer numerator vector over one positive common denominator, kept
in lowest terms, so equality and zero testing are plain tuple comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Tuple, Union

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> Tuple[int, ...]:
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    # x^n - 1 divided by Phi_d for each proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(_cyclotomic_coeffs(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials (ascending) by a monic divisor, asserting no remainder."""
    num = num[:]
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            quot[k - dn] = c
            for i, b in enumerate(den):
                num[k - dn + i] -= c * b
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return quot


class IntegerPolynomial(tuple):
    """Integer coefficients in ascending degree."""

    @property
    def degree(self) -> int:
        return len(self) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self):
            acc = acc * x + c
        return acc


def cyclotomic_polynomial(n: int) -> IntegerPolynomial:
    """Phi_n with integer coefficients, lowest degree first."""
    return IntegerPolynomial(_cyclotomic_coeffs(n))


def euler_phi(n: int) -> int:
    return len(_cyclotomic_coeffs(n)) - 1


def _reduce_int(work: list[int], n: int) -> list[int]:
    """Reduce an integer polynomial in zeta_n modulo the monic Phi_n, in place."""
    phi = _cyclotomic_coeffs(n)
    m = len(phi) - 1
    if len(work) < m:
        work.extend([0] * (m - len(work)))
    nz = [(i, b) for i, b in enumerate(phi[:m]) if b]
    for k in range(len(work) - 1, m - 1, -1):
        c = work[k]
        if c:
            base = k - m
            for i, b in nz:
                work[base + i] -= c * b
    del work[m:]
    return work


def _normalize(num: Sequence[int], den: int) -> Tuple[Tuple[int, ...], int]:
    g = reduce(gcd, num, den)
    if den < 0:
        g = -g
    if g not in (0, 1):
        return tuple(x // g for x in num), den // g
    return tuple(num), den


def reduce_mod_cyclotomic(coeffs: Sequence[Rational], n: int) -> Tuple[Fraction, ...]:
    """Reduce rational coefficients of any length to the power basis."""
    return CyclotomicElement(n, coeffs).coeffs


class CyclotomicElement:
    """An exact element of Q(zeta_n)."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, coeffs: Sequence[Rational] = ()):
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lcm, (c.denominator for c in fr), 1)
        work = [c.numerator * (den // c.denominator) for c in fr]
        self.n = n
        self.num, self.den = _normalize(_reduce_int(work, n), den)

    @classmethod
    def _make(cls, n: int, num: Sequence[int], den: int = 1, reduced: bool = False) -> "CyclotomicElement":
        obj = cls.__new__(cls)
        obj.n = n
        work = list(num)
        obj.num, obj.den = _normalize(work if reduced else _reduce_int(work, n), den)
        return obj

    @classmethod
    def rational(cls, n: int, value: Rational) -> "CyclotomicElement":
        return cls(n, [value])

    @classmethod
    def from_exponent_weights(cls, n: int, weights: Mapping[int, Rational]) -> "CyclotomicElement":
        """``sum_k weights[k] * zeta_n^k`` with exponents taken mod n."""
        acc = [Fraction(0)] * n
        for k, w in weights.items():
            acc[k % n] += w
        return cls(n, acc)

    @classmethod
    def from_exponent_counts(cls, n: int, counts: Sequence[int]) -> "CyclotomicElement":
        """``sum_k counts[k] * zeta_n^k`` for integer counts indexed by exponent mod n."""
        work = [0] * n
        for k, c in enumerate(counts):
            work[k % n] += int(c)
        return cls._make(n, work)

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def _check(self, other: "CyclotomicElement") -> None:
        if self.n != other.n:
            raise ValueError(f"conductor mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.rational(self.n, other)
        return NotImplemented

    def _combine(self, other: "CyclotomicElement", sign: int) -> "CyclotomicElement":
        den = lcm(self.den, other.den)
        s, o = den // self.den, sign * (den // other.den)
        return CyclotomicElement._make(
            self.n, [a * s + b * o for a, b in zip(self.num, other.num)], den, reduced=True
        )

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement._make(self.n, [-a for a in self.num], self.den, reduced=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scalar_mul(other, self)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        self._check(other)
        a, b = self.num, other.num
        prod = [0] * (len(a) + len(b) - 1)
        bnz = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in bnz:
                    prod[i + j] += x * y
        return CyclotomicElement._make(self.n, prod, self.den * other.den)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scalar_mul(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CyclotomicElement.rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.rational(self.n, other)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        return self.n == other.n and self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.n, self.num, self.den))

    def __bool__(self):
        return not is_zero(self)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*z^{i}")
        body = " + ".join(terms) or "0"
        return f"CyclotomicElement(n={self.n}, {body})"

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0] if self.num else 0, self.den)


def root_of_unity(n: int, k: int = 1) -> CyclotomicElement:
    """zeta_n^k, exponent taken mod n."""
    work = [0] * n
    work[k % n] = 1
    return CyclotomicElement._make(n, work)


def add(x: CyclotomicElement, y: CyclotomicElement) -> CyclotomicElement:
    return x + y


def sub(x: CyclotomicElement, y: CyclotomicElement) -> CyclotomicElement:
    return x - y


def mul(x: CyclotomicElement, y: CyclotomicElement) -> CyclotomicElement:
    return x * y


def neg(x: CyclotomicElement) -> CyclotomicElement:
    return -x


def scalar_mul(s: Rational, x: CyclotomicElement) -> CyclotomicElement:
    s = Fraction(s)
    return CyclotomicElement._make(x.n, [s.numerator * a for a in x.num], s.denominator * x.den, reduced=True)


def _permute_exponents(x: CyclotomicElement, t: int, k: int) -> CyclotomicElement:
    # image of sum c_i zeta^i under zeta^i -> zeta^(t i + k)
    n = x.n
    work = [0] * n
    for i, c in enumerate(x.num):
        if c:
            work[(t * i + k) % n] += c
    return CyclotomicElement._make(n, work, x.den)


def conjugate(x: CyclotomicElement) -> CyclotomicElement:
    """Image under zeta_n -> zeta_n^(-1) (complex conjugation)."""
    return _permute_exponents(x, -1, 0)


def galois_action(x: CyclotomicElement, t: int) -> CyclotomicElement:
    """Image under zeta_n -> zeta_n^t for t prime to n."""
    if gcd(t, x.n) != 1:
        raise ValueError(f"{t} is not a unit mod {x.n}")
    return _permute_exponents(x, t, 0)


def times_root_of_unity(x: CyclotomicElement, k: int) -> CyclotomicElement:
    """``x * zeta_n^k`` by exponent shift."""
    return _permute_exponents(x, 1, k)


def is_zero(x: CyclotomicElement) -> bool:
    return not any(x.num)


def product(xs: Iterable[CyclotomicElement], n: int) -> CyclotomicElement:
    acc = CyclotomicElement.rational(n, 1)
    for x in xs:
        acc = acc * x
    return acc
