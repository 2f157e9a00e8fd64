"""Polynomial arithmetic over GF(2) and kernels of linear recurrences.

A polynomial is an integer bitmask with the coefficient of t^i stored at
bit i.  Every nonzero polynomial over GF(2) is monic, so gcds need no
normalization.  The kernel of a polynomial a is the set of one-sided
binary sequences annihilated by a applied in the left shift, that is,
solutions of the linear recurrence with coefficient mask a; the kernel of
a degree-d polynomial has exactly 2^d elements, all eventually periodic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import PeriodicSeq, Word


class ZeroPolynomial(ValueError):
    """Raised where a nonzero polynomial is required."""


def _mul(a: int, b: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _divmod(a: int, b: int) -> tuple:
    if b == 0:
        raise ZeroPolynomial("division by the zero polynomial")
    db = b.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= db and a:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _divmod(a, b)[1]
    return a


@dataclass(frozen=True, order=True)
class Gf2Poly:
    """A polynomial over GF(2), held as a coefficient bitmask."""

    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("negative coefficient mask")

    @classmethod
    def zero(cls) -> "Gf2Poly":
        return cls(0)

    @classmethod
    def one(cls) -> "Gf2Poly":
        return cls(1)

    @classmethod
    def t(cls) -> "Gf2Poly":
        return cls(2)

    @classmethod
    def parse(cls, text: str) -> "Gf2Poly":
        """Parse forms like "0", "1", "t", "1+t+t^2"."""
        bits = 0
        for term in text.replace(" ", "").split("+"):
            if term == "0":
                continue
            elif term == "1":
                bits ^= 1
            elif term == "t":
                bits ^= 2
            elif term.startswith("t^"):
                e = int(term[2:])
                if e < 0:
                    raise ValueError("negative exponent in %r" % text)
                bits ^= 1 << e
            else:
                raise ValueError("cannot parse polynomial term %r" % term)
        return cls(bits)

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    @property
    def degree(self) -> int:
        if self.bits == 0:
            raise ZeroPolynomial("the zero polynomial has no degree")
        return self.bits.bit_length() - 1

    def coeff(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.bits ^ other.bits)

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mul(self.bits, other.bits))

    def __divmod__(self, other: "Gf2Poly") -> tuple:
        q, r = _divmod(self.bits, other.bits)
        return Gf2Poly(q), Gf2Poly(r)

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[0]

    def __pow__(self, e: int) -> "Gf2Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Gf2Poly.one()
        for _ in range(e):
            result = result * self
        return result

    def divides(self, other: "Gf2Poly") -> bool:
        return _divmod(other.bits, self.bits)[1] == 0

    def __str__(self):
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.bits.bit_length()):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else "t" if i == 1 else "t^%d" % i)
        return "+".join(terms)


@dataclass(frozen=True)
class Factorization:
    """Irreducible factors of a nonzero polynomial with multiplicities."""

    factors: tuple

    def product(self) -> Gf2Poly:
        result = Gf2Poly.one()
        for p, e in self.factors:
            result = result * p**e
        return result


def poly_gcd(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    """Greatest common divisor; gcd(a, 0) = a and gcd(0, 0) = 0."""
    return Gf2Poly(_gcd(a.bits, b.bits))


def poly_factor(a: Gf2Poly) -> Factorization:
    """Factor a nonzero polynomial into irreducibles, ascending by bitmask."""
    if a.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    factors = []
    rest = a.bits
    cand = 2
    while rest.bit_length() - 1 >= 1:
        if cand.bit_length() - 1 > (rest.bit_length() - 1) // 2:
            factors.append((Gf2Poly(rest), 1))
            break
        e = 0
        while _divmod(rest, cand)[1] == 0:
            rest = _divmod(rest, cand)[0]
            e += 1
        if e:
            factors.append((Gf2Poly(cand), e))
        cand += 1
    return Factorization(tuple(factors))


def recurrence_kernel(a: Gf2Poly, horizon: int | None = None) -> list:
    """All sequences annihilated by a(shift), sorted deterministically.

    The kernel of a degree-d polynomial is parametrized by the first d
    symbols; each solution is generated until its d-symbol state repeats,
    which happens within 2^d + d steps, so the default horizon always
    suffices and smaller requested horizons are raised to that bound.
    """
    if a.is_zero:
        raise ZeroPolynomial("the zero polynomial has full kernel")
    d = a.degree
    if horizon is not None and horizon < d:
        raise ValueError("horizon smaller than the recurrence degree")
    if d == 0:
        return [PeriodicSeq.zero()]
    steps = max(horizon or 0, (1 << d) + d)
    low = a.bits & ((1 << d) - 1)
    out = []
    for seed in range(1 << d):
        bits = [(seed >> (d - 1 - i)) & 1 for i in range(d)]
        seen = {}
        state = seed
        i = 0
        while state not in seen and i <= steps:
            seen[state] = i
            # x_{k+d} = sum of a_j x_{k+j}, j < d, taken mod 2.
            window = bits[i : i + d]
            nxt = 0
            for j in range(d):
                if (low >> j) & 1:
                    nxt ^= window[j]
            bits.append(nxt)
            state = ((state << 1) & ((1 << d) - 1)) | nxt
            i += 1
        start = seen[state]
        out.append(
            PeriodicSeq.from_parts(Word.from_bits(bits[:start]), Word.from_bits(bits[start:i]))
        )
    out.sort(key=lambda s: s.sort_key())
    return out
