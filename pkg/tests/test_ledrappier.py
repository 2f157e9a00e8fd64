"""Tests for triangular patches over the parity-of-neighbors dictionary."""

import pytest

from starshift import (
    BASIC_BLOCKS,
    LEDRAPPIER,
    TrianglePatch,
    Word,
    WordTooShort,
    apply_window_map,
    complete_patch,
    conjugate_vertical,
    stack_orbit,
)


def all_words(length):
    return [Word(length, bits) for bits in range(1 << length)]


def adjacent_xor(w):
    """One vertical step written out bit by bit; positions count from 1."""
    bits = [w.bit(i) ^ w.bit(i + 1) for i in range(1, w.length)]
    out = 0
    for b in bits:
        out = (out << 1) | b
    return Word(w.length - 1, out)


class TestConjugateVertical:
    def test_frozen_example(self):
        assert str(conjugate_vertical(Word.from_str("1101"))) == "011"

    def test_three_routes_agree(self):
        for length in range(2, 13):
            for w in all_words(length):
                direct = conjugate_vertical(w)
                assert direct == adjacent_xor(w)
                assert direct == apply_window_map(LEDRAPPIER, w)

    def test_rejects_short_words(self):
        for text in ["", "0", "1"]:
            with pytest.raises(WordTooShort):
                conjugate_vertical(Word.from_str(text))


class TestCompletePatch:
    def test_frozen_example(self):
        patch = complete_patch(Word.from_str("1101"))
        assert [str(r) for r in patch.rows] == ["1101", "011", "10", "1"]
        assert str(patch.base) == "1101"
        assert patch.serialize() == "1101\n011\n10\n1"

    def test_rows_shrink_to_a_point(self):
        for length in range(1, 8):
            for w in all_words(length):
                patch = complete_patch(w)
                assert len(patch.rows) == length
                assert [r.length for r in patch.rows] == list(range(length, 0, -1))
                for upper, lower in zip(patch.rows[1:], patch.rows):
                    assert upper == conjugate_vertical(lower)

    def test_rejects_empty_base(self):
        with pytest.raises(WordTooShort):
            complete_patch(Word.from_str(""))


class TestSubBlocks:
    def test_basic_blocks_are_the_parity_table(self):
        assert len(BASIC_BLOCKS) == 4
        seen_bottoms = set()
        for top, bottom in BASIC_BLOCKS:
            assert top.length == 1 and bottom.length == 2
            assert top.bit(1) == bottom.bit(1) ^ bottom.bit(2)
            seen_bottoms.add(str(bottom))
        assert seen_bottoms == {"00", "01", "10", "11"}

    def test_every_sub_block_is_basic(self):
        for length in range(2, 7):
            for w in all_words(length):
                patch = complete_patch(w)
                blocks = list(patch.sub_blocks())
                assert len(blocks) == length * (length - 1) // 2
                assert all(block in BASIC_BLOCKS for block in blocks)

    def test_frozen_example_blocks(self):
        patch = complete_patch(Word.from_str("1101"))
        blocks = [(str(t), str(b)) for t, b in patch.sub_blocks()]
        assert blocks == [
            ("0", "11"),
            ("1", "10"),
            ("1", "01"),
            ("1", "01"),
            ("0", "11"),
            ("1", "10"),
        ]


class TestStackOrbit:
    def test_matches_complete_patch(self):
        for length in range(1, 7):
            for w in all_words(length):
                full = complete_patch(w)
                rows = stack_orbit(LEDRAPPIER, w, length - 1)
                assert rows == full.rows

    def test_partial_orbit(self):
        rows = stack_orbit(LEDRAPPIER, Word.from_str("1101"), 2)
        assert [str(r) for r in rows] == ["1101", "011", "10"]

    def test_zero_steps(self):
        base = Word.from_str("10")
        assert stack_orbit(LEDRAPPIER, base, 0) == (base,)

    def test_too_many_steps(self):
        with pytest.raises(WordTooShort):
            stack_orbit(LEDRAPPIER, Word.from_str("1101"), 4)


class TestTrianglePatch:
    def test_accepts_consistent_rows(self):
        rows = (Word.from_str("110"), Word.from_str("01"), Word.from_str("1"))
        patch = TrianglePatch(rows)
        assert patch.rows == rows
        assert patch.serialize() == "110\n01\n1"

    def test_rejects_inconsistent_rows(self):
        bad_pairs = [
            (Word.from_str("110"), Word.from_str("11")),
            (Word.from_str("110"), Word.from_str("0111")),
        ]
        for rows in bad_pairs:
            with pytest.raises(ValueError):
                TrianglePatch(rows)
        with pytest.raises(ValueError):
            TrianglePatch(
                (Word.from_str("110"), Word.from_str("01"), Word.from_str("0"))
            )

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            TrianglePatch(())

    def test_single_row(self):
        patch = TrianglePatch((Word.from_str("0"),))
        assert patch.serialize() == "0"
        assert list(patch.sub_blocks()) == []
