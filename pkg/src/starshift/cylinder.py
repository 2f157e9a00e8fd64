"""Locally constant functions on sequence space and the averaging operators.

A level-k cylinder function is determined by its values on the 2^k words
of length k.  Values live in the ring of numbers a + b*sqrt2 with a, b
rational, which is closed under the square roots of the fiber counts
2^(n-1).  Internally a function stores two integer numerator arrays and
one common denominator, so all operator identities are checked exactly.

The composition operator alpha pulls a function back along a window map;
the transfer operator averages over the fibers of a progressive map; a
Parseval frame is a finite family v_i with sum v_i E(v_i f) = f for all f,
where E = alpha after transfer is the conditional expectation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dictionary import NotProgressive, WindowMap
from .words import Word


class NotAFrame(ValueError):
    """The family fails the Parseval frame conditions for its map."""


_SQRT2 = "√2"


@dataclass(frozen=True)
class QuadScalar:
    """An exact scalar a + b*sqrt2 with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @classmethod
    def of(cls, a, b=0) -> "QuadScalar":
        return cls(Fraction(a), Fraction(b))

    @classmethod
    def root2_power(cls, k: int) -> "QuadScalar":
        """sqrt(2)^k for k >= 0."""
        if k < 0:
            raise ValueError("negative root power")
        if k % 2 == 0:
            return cls.of(1 << (k // 2))
        return cls.of(0, 1 << ((k - 1) // 2))

    @classmethod
    def parse(cls, text: str) -> "QuadScalar":
        """Parse forms like "0", "-1/2", "√2", "1/2+3√2", "1-1/2√2"."""
        text = text.replace(" ", "").replace("sqrt2", _SQRT2)
        if not text:
            raise ValueError("empty scalar")
        if not text.endswith(_SQRT2):
            return cls(Fraction(text), Fraction(0))
        head = text[: -len(_SQRT2)]
        # The rational part, if any, ends at the last sign that starts a term.
        split = next(
            (i for i in range(len(head) - 1, 0, -1) if head[i] in "+-" and head[i - 1] not in "+-/"),
            None,
        )
        a_text, b_text = ("", head) if split is None else (head[:split], head[split:])
        if b_text in ("", "+"):
            b_text = "1"
        elif b_text == "-":
            b_text = "-1"
        return cls(Fraction(a_text) if a_text else Fraction(0), Fraction(b_text))

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __add__(self, other: "QuadScalar") -> "QuadScalar":
        return QuadScalar(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadScalar") -> "QuadScalar":
        return QuadScalar(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadScalar":
        return QuadScalar(-self.a, -self.b)

    def __mul__(self, other: "QuadScalar") -> "QuadScalar":
        return QuadScalar(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.b:
            coeff = "" if self.b == 1 else "-" if self.b == -1 else str(self.b)
            if parts and self.b > 0:
                parts.append("+")
            parts.append(coeff + _SQRT2)
        return "".join(parts)


def _as_int64(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _reduced(a: np.ndarray, b: np.ndarray, den: int):
    if den <= 0:
        raise ValueError("denominator must be positive")
    g = math.gcd(int(np.gcd.reduce(np.abs(a), axis=None, initial=0)), den)
    g = math.gcd(int(np.gcd.reduce(np.abs(b), axis=None, initial=0)), g)
    if g > 1:
        a, b, den = a // g, b // g, den // g
    return _as_int64(a), _as_int64(b), den


def _guard(*arrays):
    # Keep numerators far from the int64 edge before forming products.
    for arr in arrays:
        if arr.size and int(np.abs(arr).max()) >= 1 << 30:
            raise OverflowError("cylinder numerators grew unexpectedly large")


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """A level-k cylinder function with exact a + b*sqrt2 values."""

    level: int
    num_a: np.ndarray
    num_b: np.ndarray
    den: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("negative level")
        size = 1 << self.level
        if self.num_a.shape != (size,) or self.num_b.shape != (size,):
            raise ValueError("value arrays must have length 2^level")
        a, b, den = _reduced(self.num_a, self.num_b, self.den)
        object.__setattr__(self, "num_a", a)
        object.__setattr__(self, "num_b", b)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_values(cls, level: int, values) -> "CylinderFunction":
        values = [v if isinstance(v, QuadScalar) else QuadScalar.of(v) for v in values]
        den = math.lcm(*(1,), *(v.a.denominator for v in values), *(v.b.denominator for v in values))
        a = [int(v.a * den) for v in values]
        b = [int(v.b * den) for v in values]
        return cls(level, _as_int64(a), _as_int64(b), den)

    @classmethod
    def constant(cls, level: int, value) -> "CylinderFunction":
        return cls.from_values(level, [value] * (1 << level))

    @classmethod
    def one(cls, level: int = 0) -> "CylinderFunction":
        return cls.constant(level, 1)

    @classmethod
    def zero(cls, level: int = 0) -> "CylinderFunction":
        return cls.constant(level, 0)

    @classmethod
    def indicator(cls, w: Word) -> "CylinderFunction":
        a = np.zeros(1 << w.length, dtype=np.int64)
        a[w.bits] = 1
        return cls(w.length, _as_int64(a), _as_int64(np.zeros_like(a)), 1)

    def value_at(self, w: Word) -> QuadScalar:
        if w.length < self.level:
            raise ValueError("word shorter than the function level")
        v = w.prefix(self.level)
        return QuadScalar(
            Fraction(int(self.num_a[v.bits]), self.den),
            Fraction(int(self.num_b[v.bits]), self.den),
        )

    @property
    def values(self) -> tuple:
        return tuple(
            QuadScalar(Fraction(int(a), self.den), Fraction(int(b), self.den))
            for a, b in zip(self.num_a, self.num_b)
        )

    @property
    def is_zero(self) -> bool:
        return not self.num_a.any() and not self.num_b.any()

    def embed(self, level: int) -> "CylinderFunction":
        """The same function seen at a finer level."""
        if level < self.level:
            raise ValueError("cannot embed into a coarser level")
        if level == self.level:
            return self
        idx = np.arange(1 << level, dtype=np.int64) >> (level - self.level)
        return CylinderFunction(level, self.num_a[idx], self.num_b[idx], self.den)

    def _aligned(self, other: "CylinderFunction"):
        level = max(self.level, other.level)
        return self.embed(level), other.embed(level)

    def __add__(self, other: "CylinderFunction") -> "CylinderFunction":
        f, g = self._aligned(other)
        _guard(f.num_a, f.num_b, g.num_a, g.num_b)
        return CylinderFunction(
            f.level,
            f.num_a * g.den + g.num_a * f.den,
            f.num_b * g.den + g.num_b * f.den,
            f.den * g.den,
        )

    def __sub__(self, other: "CylinderFunction") -> "CylinderFunction":
        return self + (-other)

    def __neg__(self) -> "CylinderFunction":
        return CylinderFunction(self.level, -self.num_a, -self.num_b, self.den)

    def __mul__(self, other: "CylinderFunction") -> "CylinderFunction":
        f, g = self._aligned(other)
        _guard(f.num_a, f.num_b, g.num_a, g.num_b)
        return CylinderFunction(
            f.level,
            f.num_a * g.num_a + 2 * f.num_b * g.num_b,
            f.num_a * g.num_b + f.num_b * g.num_a,
            f.den * g.den,
        )

    def scale(self, s: QuadScalar) -> "CylinderFunction":
        return self * CylinderFunction.from_values(0, [s])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        f, g = self._aligned(other)
        return (
            f.den == g.den
            and np.array_equal(f.num_a, g.num_a)
            and np.array_equal(f.num_b, g.num_b)
        )

    def serialize(self) -> dict:
        return {"level": self.level, "values": [str(v) for v in self.values]}

    @classmethod
    def deserialize(cls, data: dict) -> "CylinderFunction":
        return cls.from_values(
            data["level"], [QuadScalar.parse(v) for v in data["values"]]
        )


def basis(level: int) -> list:
    """All indicator functions of level-k cylinders, ascending."""
    return [CylinderFunction.indicator(Word(level, v)) for v in range(1 << level)]


def alpha(m: WindowMap, f: CylinderFunction) -> CylinderFunction:
    """Composition with the map: (alpha f)(x) = f(m(x))."""
    level = f.level + m.window - 1
    idx = m.image_table(level)
    return CylinderFunction(level, f.num_a[idx], f.num_b[idx], f.den)


def _preimage_table(m: WindowMap, out_level: int) -> np.ndarray:
    """Encodings of the fiber of each level word, shape (2^out, fibers)."""
    n = m.window
    state_count = 1 << (n - 1)
    c1 = np.array(
        [m.rule_bit((s << 1) | 1) for s in range(state_count)], dtype=np.int64
    )
    targets = np.arange(1 << out_level, dtype=np.int64)
    columns = []
    for p in range(state_count):
        y = np.full(targets.shape, p, dtype=np.int64)
        state = np.full(targets.shape, p, dtype=np.int64)
        for j in range(out_level):
            t = (targets >> (out_level - 1 - j)) & 1
            bit = (c1[state] == t).astype(np.int64)
            y = (y << 1) | bit
            state = ((state << 1) | bit) & (state_count - 1)
        columns.append(y)
    return np.stack(columns, axis=1)


def transfer(m: WindowMap, f: CylinderFunction) -> CylinderFunction:
    """Fiber average: (L f)(x) = mean of f over the m-preimages of x."""
    if not m.is_progressive:
        raise NotProgressive("transfer needs a progressive rule")
    k = f.level
    out_level = max(k - m.window + 1, 0)
    depth = out_level + m.window - 1
    table = _preimage_table(m, out_level) >> (depth - k)
    _guard(f.num_a, f.num_b)
    a = f.num_a[table].sum(axis=1)
    b = f.num_b[table].sum(axis=1)
    return CylinderFunction(out_level, a, b, f.den * m.fiber_count)


def expectation(m: WindowMap, f: CylinderFunction) -> CylinderFunction:
    """The conditional expectation alpha after transfer."""
    return alpha(m, transfer(m, f))


def inner_product(m: WindowMap, f: CylinderFunction, g: CylinderFunction) -> CylinderFunction:
    """The module inner product <f, g> = L(f g); conjugation is trivial here."""
    return transfer(m, f * g)


def standard_frame(m: WindowMap) -> list:
    """The frame sqrt(fibers) * indicator(w) over words of length n-1."""
    if not m.is_progressive:
        raise NotProgressive("frames exist for progressive rules")
    root = QuadScalar.root2_power(m.window - 1)
    return [
        CylinderFunction.indicator(Word(m.window - 1, v)).scale(root)
        for v in range(1 << (m.window - 1))
    ]


def verify_frame(frame, m: WindowMap) -> None:
    """Raise NotAFrame unless the family is a Parseval frame for m.

    Checks that the normalized squares form a partition of unity, that the
    map is injective on each support (no two support words with distinct
    length-(n-1) prefixes share an image word), and that reconstruction
    holds on the full cylinder basis one window beyond the frame level.
    """
    if not frame:
        raise NotAFrame("empty family")
    n = m.window
    inv_n = QuadScalar.of(Fraction(1, m.fiber_count))
    total = CylinderFunction.zero()
    for nu in frame:
        total = total + (nu * nu).scale(inv_n)
    if total != CylinderFunction.one():
        raise NotAFrame("normalized squares do not sum to one")
    for nu in frame:
        level = max(nu.level, n - 1)
        lifted = nu.embed(level)
        support = [v for v in range(1 << level) if lifted.num_a[v] or lifted.num_b[v]]
        images = m.image_table(level)[support] if support else []
        if len(set(int(i) for i in images)) != len(support):
            raise NotAFrame("map is not injective on a frame support")
    check_level = max(nu.level for nu in frame) + n - 1
    for f in basis(check_level):
        total = CylinderFunction.zero(f.level)
        for nu in frame:
            total = total + nu * expectation(m, nu * f)
        if total != f.embed(total.level):
            raise NotAFrame("reconstruction fails on the level-%d basis" % check_level)


def refine_frame(frame1, m1: WindowMap, frame2, m2: WindowMap) -> list:
    """Frame for m1 after m2 built from frames of the two factors."""
    verify_frame(frame1, m1)
    verify_frame(frame2, m2)
    return [nu1 * alpha(m1, nu2) for nu1 in frame1 for nu2 in frame2]


@dataclass(frozen=True)
class CommuteDecision:
    commute: bool
    level: int
    witness: Word | None


def operator_commute_check(m1: WindowMap, m2: WindowMap, level: int) -> CommuteDecision:
    """Compare transfer(m1) after alpha(m2) with alpha(m2) after transfer(m1).

    Both composites are applied to every level-k basis indicator at once
    as exact integer matrices; the witness is the first basis function on
    which they disagree.
    """
    from .starcomm import NonCommutingMaps

    if not m1.is_progressive:
        raise NotProgressive("transfer side must be progressive")
    if m1.compose(m2).rule != m2.compose(m1).rule:
        raise NonCommutingMaps("maps do not commute")
    n1, n2 = m1.window, m2.window
    if level < max(n1, n2) - 1:
        raise ValueError("level must be at least max window - 1")
    k = level
    mid = k + n2 - 1
    out = k + n2 - n1
    img1_mid = m1.image_table(mid)
    img2_mid = m2.image_table(mid)
    lhs = np.zeros((1 << out, 1 << k), dtype=np.int64)
    np.add.at(lhs, (img1_mid, img2_mid), 1)
    img1_k = m1.image_table(k)
    img2_out = m2.image_table(out)
    rhs = (img1_k[None, :] == img2_out[:, None]).astype(np.int64)
    if np.array_equal(lhs, rhs):
        return CommuteDecision(True, level, None)
    col = int(np.nonzero((lhs != rhs).any(axis=0))[0][0])
    return CommuteDecision(False, level, Word(k, col))
