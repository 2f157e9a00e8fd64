"""Triangular patches of the three-dot shift and its base-row encoding.

A configuration of the two-dimensional shift with the rule that every
upward triangle of cells sums to zero is determined by its base row: each
higher row is the pairwise sum of the row below, which is also the image
of the row below under the two-word dictionary {01, 10}.  A triangular
patch records finitely many rows of such a configuration, widest first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dictionary import Dictionary, NotProgressive, WordTooShort, apply_window_map, classify_dictionary
from .words import Word

LEDRAPPIER = Dictionary.from_text("01,10")

BASIC_BLOCKS = (
    (Word.from_str("0"), Word.from_str("00")),
    (Word.from_str("1"), Word.from_str("01")),
    (Word.from_str("1"), Word.from_str("10")),
    (Word.from_str("0"), Word.from_str("11")),
)


def _pair_sums(w: Word) -> Word:
    return Word.from_bits(w.bit(i) ^ w.bit(i + 1) for i in range(1, w.length))


@dataclass(frozen=True)
class TrianglePatch:
    """Rows of decreasing length, each the pairwise sum of the one below."""

    rows: tuple

    def __post_init__(self):
        if not self.rows:
            raise ValueError("a patch needs at least one row")
        for above, below in zip(self.rows[1:], self.rows):
            if above.length != below.length - 1 or above != _pair_sums(below):
                raise ValueError("rows do not satisfy the triangle rule")

    @property
    def base(self) -> Word:
        return self.rows[0]

    def sub_blocks(self):
        """All (top cell, two base cells) blocks across adjacent rows."""
        for above, below in zip(self.rows[1:], self.rows):
            for i in range(1, below.length):
                yield (
                    Word(1, above.bit(i)),
                    Word.from_bits((below.bit(i), below.bit(i + 1))),
                )

    def serialize(self) -> str:
        return "\n".join(str(row) for row in self.rows)


def complete_patch(base: Word) -> TrianglePatch:
    """The full triangle over a base row, down to a single cell."""
    if base.length < 1:
        raise WordTooShort("base row must be nonempty")
    rows = [base]
    while rows[-1].length > 1:
        rows.append(_pair_sums(rows[-1]))
    return TrianglePatch(tuple(rows))


def conjugate_vertical(base: Word) -> Word:
    """One vertical step, checked along three equal routes.

    The row above the base is its pairwise-sum row, the image of the base
    under the dictionary {01, 10}, and the sum of the base with its shift;
    the three computations are compared and any mismatch raises.
    """
    if base.length < 2:
        raise WordTooShort("vertical step needs length at least 2")
    by_sums = _pair_sums(base)
    by_dictionary = apply_window_map(LEDRAPPIER, base)
    by_shift = Word.from_bits(
        base.bit(i) ^ base.bit(i + 1) for i in range(1, base.length)
    )
    if not (by_sums == by_dictionary == by_shift):
        raise AssertionError("vertical step routes disagree")
    return by_sums


def stack_orbit(d: Dictionary, base: Word, steps: int) -> tuple:
    """Rows 0..steps of the orbit of a base row under a progressive map."""
    if not classify_dictionary(d).progressive:
        raise NotProgressive(str(d))
    if base.length < steps * (d.window - 1) + 1:
        raise WordTooShort("base too short for %d steps" % steps)
    rows = [base]
    for _ in range(steps):
        rows.append(apply_window_map(d, rows[-1]))
    return tuple(rows)
