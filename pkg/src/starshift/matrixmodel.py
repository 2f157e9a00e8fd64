"""Finite matrix model for the isometries attached to progressive maps.

At level k the space of level-k cylinder functions is 2^k dimensional and
the isometry of a window-n progressive map sends the indicator of a word
x to the normalized sum of the indicators of its 2^(n-1) preimage words,
so it is a (2^(k+n-1) x 2^k) matrix with entries 0 or fibers^(-1/2).
Operators store two integer matrices (rational and sqrt2 numerators) over
one positive denominator, so every relation check below is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cylinder import CylinderFunction, QuadScalar, alpha, refine_frame, standard_frame, transfer
from .dictionary import NotProgressive, WindowMap
from .gf2poly import Gf2Poly, poly_gcd
from .starcomm import DynamicalSystem, InvalidSystem, MonoidElement, _coprimality_witnesses
from .words import PeriodicSeq, Word


class LevelTooSmall(ValueError):
    """The requested level cannot host the relation checks."""


class NoSeparation(ValueError):
    """The two maps agree on the given point, so no bump can separate them."""


def _reduced(a, b, den):
    if den <= 0:
        raise ValueError("denominator must be positive")
    g = math.gcd(int(np.gcd.reduce(np.abs(a), axis=None, initial=0)), den)
    g = math.gcd(int(np.gcd.reduce(np.abs(b), axis=None, initial=0)), g)
    if g > 1:
        a, b, den = a // g, b // g, den // g
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b, den


def _guard(*arrays):
    for arr in arrays:
        if arr.size and int(np.abs(arr).max()) >= 1 << 24:
            raise OverflowError("matrix numerators grew unexpectedly large")


@dataclass(frozen=True, eq=False)
class LevelOperator:
    """A linear map from level-source to level-target cylinder functions."""

    source_level: int
    target_level: int
    num_a: np.ndarray
    num_b: np.ndarray
    den: int

    def __post_init__(self):
        shape = (1 << self.target_level, 1 << self.source_level)
        if self.num_a.shape != shape or self.num_b.shape != shape:
            raise ValueError("matrix shape does not match the levels")
        a, b, den = _reduced(self.num_a, self.num_b, self.den)
        object.__setattr__(self, "num_a", a)
        object.__setattr__(self, "num_b", b)
        object.__setattr__(self, "den", den)

    @classmethod
    def identity(cls, level: int) -> "LevelOperator":
        eye = np.eye(1 << level, dtype=np.int64)
        return cls(level, level, eye, np.zeros_like(eye), 1)

    @classmethod
    def from_cylinder(cls, f: CylinderFunction, level: int) -> "LevelOperator":
        """The multiplication operator of f acting at the given level."""
        g = f.embed(level)
        return cls(level, level, np.diag(g.num_a), np.diag(g.num_b), g.den)

    def __matmul__(self, other: "LevelOperator") -> "LevelOperator":
        if other.target_level != self.source_level:
            raise ValueError("level mismatch in composition")
        _guard(self.num_a, self.num_b, other.num_a, other.num_b)
        a = self.num_a @ other.num_a + 2 * (self.num_b @ other.num_b)
        b = self.num_a @ other.num_b + self.num_b @ other.num_a
        return LevelOperator(other.source_level, self.target_level, a, b, self.den * other.den)

    def __add__(self, other: "LevelOperator") -> "LevelOperator":
        if (self.source_level, self.target_level) != (other.source_level, other.target_level):
            raise ValueError("level mismatch in sum")
        _guard(self.num_a, self.num_b, other.num_a, other.num_b)
        return LevelOperator(
            self.source_level,
            self.target_level,
            self.num_a * other.den + other.num_a * self.den,
            self.num_b * other.den + other.num_b * self.den,
            self.den * other.den,
        )

    def __sub__(self, other: "LevelOperator") -> "LevelOperator":
        return self + other.scaled(QuadScalar.of(-1))

    def scaled(self, s: QuadScalar) -> "LevelOperator":
        sd = math.lcm(s.a.denominator, s.b.denominator)
        sa, sb = int(s.a * sd), int(s.b * sd)
        _guard(self.num_a, self.num_b)
        return LevelOperator(
            self.source_level,
            self.target_level,
            self.num_a * sa + 2 * self.num_b * sb,
            self.num_a * sb + self.num_b * sa,
            self.den * sd,
        )

    def scale_rows(self, f: CylinderFunction) -> "LevelOperator":
        """diag(f) composed after this operator."""
        g = f.embed(self.target_level)
        _guard(self.num_a, self.num_b, g.num_a, g.num_b)
        ga, gb = g.num_a[:, None], g.num_b[:, None]
        return LevelOperator(
            self.source_level,
            self.target_level,
            ga * self.num_a + 2 * gb * self.num_b,
            ga * self.num_b + gb * self.num_a,
            self.den * g.den,
        )

    def scale_cols(self, f: CylinderFunction) -> "LevelOperator":
        """This operator composed after diag(f)."""
        g = f.embed(self.source_level)
        _guard(self.num_a, self.num_b, g.num_a, g.num_b)
        ga, gb = g.num_a[None, :], g.num_b[None, :]
        return LevelOperator(
            self.source_level,
            self.target_level,
            ga * self.num_a + 2 * gb * self.num_b,
            ga * self.num_b + gb * self.num_a,
            self.den * g.den,
        )

    def adjoint(self) -> "LevelOperator":
        return LevelOperator(
            self.target_level, self.source_level, self.num_a.T, self.num_b.T, self.den
        )

    @property
    def is_zero(self) -> bool:
        return not self.num_a.any() and not self.num_b.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelOperator):
            return NotImplemented
        return (
            (self.source_level, self.target_level) == (other.source_level, other.target_level)
            and self.den == other.den
            and np.array_equal(self.num_a, other.num_a)
            and np.array_equal(self.num_b, other.num_b)
        )

    def entry(self, row: Word, col: Word) -> QuadScalar:
        return QuadScalar(
            Fraction(int(self.num_a[row.bits, col.bits]), self.den),
            Fraction(int(self.num_b[row.bits, col.bits]), self.den),
        )

    def first_nonzero(self):
        """Row-major witness (row word, column word, value) or None."""
        nz = np.nonzero(np.abs(self.num_a) + np.abs(self.num_b))
        if nz[0].size == 0:
            return None
        r, c = int(nz[0][0]), int(nz[1][0])
        row, col = Word(self.target_level, r), Word(self.source_level, c)
        return row, col, self.entry(row, col)

    def diagonal(self) -> CylinderFunction:
        if self.source_level != self.target_level:
            raise ValueError("diagonal of a non-square operator")
        return CylinderFunction(
            self.source_level, self.num_a.diagonal(), self.num_b.diagonal(), self.den
        )

    def to_text(self) -> str:
        """Plain form "level_src level_tgt scale; row-major integers"."""
        if self.num_a.any() and self.num_b.any():
            raise ValueError("mixed rational and sqrt2 entries have no single scale")
        if self.num_b.any():
            scale, ints = str(QuadScalar.of(0, Fraction(1, self.den))), self.num_b
        else:
            scale, ints = str(QuadScalar.of(Fraction(1, self.den))), self.num_a
        body = " ".join(str(int(v)) for v in ints.ravel())
        return "%d %d %s; %s" % (self.source_level, self.target_level, scale, body)


def isometry_matrix(m: WindowMap, source_level: int) -> LevelOperator:
    """The isometry of a progressive map from source_level to its image level."""
    if not m.is_progressive:
        raise NotProgressive("isometries need a progressive rule")
    n = m.window
    target = source_level + n - 1
    img = m.image_table(target)
    pattern = np.zeros((1 << target, 1 << source_level), dtype=np.int64)
    pattern[np.arange(1 << target), img] = 1
    zero = np.zeros_like(pattern)
    # 1/sqrt(fibers) = 2^-(n-1)/2, split by parity of n-1.
    if (n - 1) % 2 == 0:
        return LevelOperator(source_level, target, pattern, zero, 1 << ((n - 1) // 2))
    return LevelOperator(source_level, target, zero, pattern, 1 << (n // 2))


@dataclass(frozen=True)
class RelationReport:
    level: int
    relations: dict
    witnesses: dict
    pair_details: tuple

    @property
    def all_expected_hold(self) -> bool:
        expected = dict(self.relations)
        # (III) is expected to hold only for coprime pairs.
        ok = all(v for k, v in expected.items() if k != "III")
        pairs_ok = all(
            d["holds"] == d["coprime"] or d["holds"] for d in self.pair_details
        )
        return ok and pairs_ok

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "relations": dict(self.relations),
            "witnesses": dict(self.witnesses),
            "pair_details": [dict(d) for d in self.pair_details],
        }


def _witness_dict(pair_names, diff: LevelOperator) -> dict:
    row, col, value = diff.first_nonzero()
    return {
        "pair": list(pair_names),
        "row": str(row),
        "col": str(col),
        "value": str(value),
    }


def verify_relations(sys: DynamicalSystem, level: int) -> RelationReport:
    """Check the defining operator relations for a system at one level.

    (I)   S_p M_f = M_{alpha f} S_p on the level-k indicator basis,
    (II)  S_p* M_f S_p = M_{L f} on the image-level indicator basis,
    (III) S_p* S_q = S_q S_p* for every pair of distinct generators,
          expected to hold exactly for coprime pairs,
    (IV)  sum_w M_{nu_w} S_p S_p* M_{nu_w} = 1 for the standard frame,
    plus frame-choice independence of the reconstruction sum for products
    of two generators and the matrix-unit algebra of the frame operators.
    """
    windows = [m.window for m in sys.generators]
    if not windows:
        raise InvalidSystem("system has no generators")
    max_window = max(windows)
    composite_window = 2 * max_window - 1
    if level < max_window + 2 or level < composite_window - 1:
        raise LevelTooSmall("level %d too small for windows %s" % (level, windows))
    k = level
    relations = {
        "I": True,
        "II": True,
        "III": True,
        "IV": True,
        "frame_independence": True,
        "orthonormal_matrix_units": True,
    }
    witnesses = {}
    pair_details = []

    def record(name, pair_names, diff):
        relations[name] = False
        if name not in witnesses:
            witnesses[name] = _witness_dict(pair_names, diff)

    for m, name in zip(sys.generators, sys.names):
        n = m.window
        top = isometry_matrix(m, k)
        img = m.image_table(k + n - 1)
        # (I): both sides vanish outside the sparsity pattern of S_p, so
        # compare the masked rows and columns for every basis indicator.
        for u in range(1 << k):
            rows = img == u
            col_a, col_b = top.num_a[:, u], top.num_b[:, u]
            off_rows = ~rows
            ok = not col_a[off_rows].any() and not col_b[off_rows].any()
            in_rows = int(np.count_nonzero(top.num_a[rows])) + int(
                np.count_nonzero(top.num_b[rows])
            )
            in_col = int(np.count_nonzero(col_a[rows])) + int(np.count_nonzero(col_b[rows]))
            if not ok or in_rows != in_col:
                chi = CylinderFunction.indicator(Word(k, u))
                lhs = top.scale_cols(chi)
                rhs = top.scale_rows(alpha(m, chi))
                record("I", (name,), lhs - rhs)
                break
        # (II): the sandwich with diag(indicator of u) is the outer product
        # of row u of S_p with itself; compare with the transfer diagonal.
        for u in range(1 << (k + n - 1)):
            ra, rb = top.num_a[u], top.num_b[u]
            oa = np.outer(ra, ra) + 2 * np.outer(rb, rb)
            ob = np.outer(ra, rb) + np.outer(rb, ra)
            lhs = LevelOperator(k, k, oa, ob, top.den * top.den)
            t = transfer(m, CylinderFunction.indicator(Word(k + n - 1, u)))
            rhs = LevelOperator.from_cylinder(t, k)
            if lhs != rhs:
                record("II", (name,), lhs - rhs)
                break
        # (IV) and the matrix-unit algebra for the standard frame.
        frame = standard_frame(m)
        s_low = isometry_matrix(m, k - n + 1)
        t_op = s_low @ s_low.adjoint()
        total = None
        for nu in frame:
            term = t_op.scale_rows(nu).scale_cols(nu)
            total = term if total is None else total + term
        if total != LevelOperator.identity(k):
            record("IV", (name,), total - LevelOperator.identity(k))
        fiber_scalar = QuadScalar.of(m.fiber_count)
        sym = t_op - t_op.adjoint()
        if not sym.is_zero:
            record("orthonormal_matrix_units", (name,), sym)
        for b, nu_b in enumerate(frame):
            chi_b = CylinderFunction.indicator(Word(n - 1, b))
            inner = (t_op.scale_cols(chi_b) @ t_op).scaled(fiber_scalar)
            if inner != t_op:
                record("orthonormal_matrix_units", (name,), inner - t_op)
                break
            for c, nu_c in enumerate(frame):
                if c != b and not (nu_b * nu_c).is_zero:
                    record("orthonormal_matrix_units", (name,), t_op)
                    break

    # (III) for every unordered pair of distinct generators.
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            mi, mj = sys.generators[i], sys.generators[j]
            di, dj = mi.window - 1, mj.window - 1
            lhs = isometry_matrix(mi, k + dj - di).adjoint() @ isometry_matrix(mj, k)
            rhs = isometry_matrix(mj, k - di) @ isometry_matrix(mi, k - di).adjoint()
            holds = lhs == rhs
            gcd = poly_gcd(mi.linear_poly, mj.linear_poly)
            detail = {
                "pair": [sys.names[i], sys.names[j]],
                "gcd": str(gcd),
                "coprime": gcd == Gf2Poly.one(),
                "holds": holds,
            }
            if not holds:
                relations["III"] = False
                if "III" not in witnesses:
                    witnesses["III"] = _witness_dict((sys.names[i], sys.names[j]), lhs - rhs)
                detail["witness"] = _witness_dict((sys.names[i], sys.names[j]), lhs - rhs)
            pair_details.append(detail)

    # Frame independence for products of two generators (including squares).
    for i in range(sys.rank):
        for j in range(i, sys.rank):
            mi, mj = sys.generators[i], sys.generators[j]
            comp = mi.compose(mj)
            s_comp = isometry_matrix(comp, k - comp.window + 1)
            t_comp = s_comp @ s_comp.adjoint()

            def recon_sum(frame):
                total = None
                for nu in frame:
                    term = t_comp.scale_rows(nu).scale_cols(nu)
                    total = term if total is None else total + term
                return total

            std = recon_sum(standard_frame(comp))
            refined = recon_sum(
                refine_frame(standard_frame(mi), mi, standard_frame(mj), mj)
            )
            if std != refined:
                record("frame_independence", (sys.names[i], sys.names[j]), std - refined)

    return RelationReport(level, relations, witnesses, tuple(pair_details))


@dataclass(frozen=True)
class DefectReport:
    requested_level: int
    working_level: int
    output_level: int
    diagonal: CylinderFunction
    defect: tuple

    def to_json_dict(self) -> dict:
        return {
            "requested_level": self.requested_level,
            "working_level": self.working_level,
            "output_level": self.output_level,
            "diagonal": self.diagonal.serialize(),
            "defect": [str(w) for w in self.defect],
        }


def expectation_defect(
    sys: DynamicalSystem,
    p: MonoidElement,
    q: MonoidElement,
    level: int,
    f: CylinderFunction | None = None,
    g: CylinderFunction | None = None,
) -> DefectReport:
    """Diagonal of M_f S_p S_q* M_g and where it deviates from an expectation.

    For p = q the compression is exactly fibers^(-1) f g on level words and
    the defect is empty.  For p != q the sandwich is computed at the level
    k + max(deg p, deg q) so both prefix gatherings are defined; the words
    whose diagonal survives (with f = g = 1) are exactly the length-k
    truncations of the kernel of the difference polynomial.
    """
    if _coprimality_witnesses(sys):
        raise InvalidSystem("generators are not pairwise coprime")
    poly_p, poly_q = sys.poly_of(p), sys.poly_of(q)
    mp, mq = sys.map_of(p), sys.map_of(q)
    dp, dq = mp.window - 1, mq.window - 1
    k = level
    f = CylinderFunction.one() if f is None else f
    g = CylinderFunction.one() if g is None else g
    if max(f.level, g.level) > k:
        raise ValueError("f and g must live at or below the requested level")
    if k < max(dp, dq):
        raise LevelTooSmall("level below the degrees of p and q")
    if poly_p == poly_q:
        s = isometry_matrix(mp, k - dp)
        base = s @ s.adjoint()
        op = base.scale_rows(f).scale_cols(g)
        return DefectReport(k, k, k, op.diagonal(), ())
    working = k + max(dp, dq)
    sq = isometry_matrix(mq, working - dq)
    sp = isometry_matrix(mp, working - dq)
    target = working - dq + dp
    base = sp @ sq.adjoint()
    op = base.scale_rows(f.embed(target)).scale_cols(g.embed(working))
    diag_level = max(working, target)
    rows = np.arange(1 << diag_level, dtype=np.int64) >> (diag_level - target)
    cols = np.arange(1 << diag_level, dtype=np.int64) >> (diag_level - working)
    diagonal = CylinderFunction(
        diag_level, op.num_a[rows, cols], op.num_b[rows, cols], op.den
    )
    base_diag_a = base.num_a[rows, cols]
    base_diag_b = base.num_b[rows, cols]
    live = np.nonzero(np.abs(base_diag_a) + np.abs(base_diag_b))[0]
    defect = sorted({int(v) >> (diag_level - k) for v in live})
    return DefectReport(
        k, working, target, diagonal, tuple(Word(k, v) for v in defect)
    )


@dataclass(frozen=True)
class BumpReport:
    prefix: Word
    level: int

    def to_json_dict(self) -> dict:
        return {"prefix": str(self.prefix), "level": self.level}


def annihilating_bump(
    sys: DynamicalSystem, p: MonoidElement, q: MonoidElement, x: PeriodicSeq
) -> BumpReport:
    """A cylinder prefix of x whose indicator kills S_p S_q* from both sides.

    The images of x under the two maps are computed exactly as eventually
    periodic sequences; if they differ at coordinate j, the prefix of x of
    some length m <= j + max(deg p, deg q) already separates the orbits,
    and the returned level certifies chi S_p S_q* chi = 0 by matrix check.
    """
    mp, mq = sys.map_of(p), sys.map_of(q)
    image_p = mp.apply_seq(x)
    image_q = mq.apply_seq(x)
    if image_p == image_q:
        raise NoSeparation("the maps agree on the given sequence")
    horizon = max(image_p.pre_len, image_q.pre_len) + math.lcm(
        image_p.per_len, image_q.per_len
    )
    j = next(i for i in range(1, horizon + 1) if image_p.coord(i) != image_q.coord(i))
    dp, dq = mp.window - 1, mq.window - 1
    bound = j + max(dp, dq)
    for m in range(1, bound + 1):
        u = x.prefix(m)
        chi = CylinderFunction.indicator(u)
        working = m + max(mp.window, mq.window) + 1
        sq = isometry_matrix(mq, working - dq)
        sp = isometry_matrix(mp, working - dq)
        sandwich = (sp @ sq.adjoint()).scale_rows(chi).scale_cols(chi)
        if sandwich.is_zero:
            return BumpReport(u, working)
    raise AssertionError("separation bound exceeded; this cannot happen")
