"""AMO ALU: trivial cases, signed/unsigned boundary sweep, hypothesis oracle."""

from hypothesis import given
from hypothesis import strategies as st

from rvsoc.isa import amo_apply, sext


def test_add_trivial():
    assert amo_apply("add", 1, 2, 8) == 3


def test_swap_returns_operand():
    assert amo_apply("swap", 0xDEAD, 0xBEEF, 8) == 0xBEEF
    assert amo_apply("swap", 0, 0x1_0000_0001, 4) == 0x0000_0001


def test_maxu_boundary():
    assert amo_apply("maxu", 0xFFFF_FFFF, 1, 4) == 0xFFFF_FFFF


_BOUNDARY32 = [0, 1, 2, 0x7FFF_FFFE, 0x7FFF_FFFF, 0x8000_0000, 0x8000_0001,
               0xFFFF_FFFE, 0xFFFF_FFFF]


def test_signed_vs_unsigned_orderings_32():
    """Brute-force comparison over boundary values: min/max (signed) and
    minu/maxu (unsigned) must each agree with plain Python ordering."""
    for old in _BOUNDARY32:
        for opnd in _BOUNDARY32:
            s_old, s_opnd = sext(32, old), sext(32, opnd)
            assert amo_apply("min", old, opnd, 4) == (old if s_old <= s_opnd else opnd)
            assert amo_apply("max", old, opnd, 4) == (old if s_old >= s_opnd else opnd)
            assert amo_apply("minu", old, opnd, 4) == min(old, opnd)
            assert amo_apply("maxu", old, opnd, 4) == max(old, opnd)


u64 = st.integers(min_value=0, max_value=(1 << 64) - 1)


@given(u64, u64, st.sampled_from([4, 8]))
def test_amo_matches_python_semantics(old, opnd, width):
    mask = (1 << (8 * width)) - 1
    o, p = old & mask, opnd & mask
    assert amo_apply("add", old, opnd, width) == (o + p) & mask
    assert amo_apply("xor", old, opnd, width) == o ^ p
    assert amo_apply("and", old, opnd, width) == o & p
    assert amo_apply("or", old, opnd, width) == o | p
    assert amo_apply("swap", old, opnd, width) == p
    bits = width * 8
    assert sext(bits, amo_apply("min", old, opnd, width)) == min(sext(bits, o), sext(bits, p))
    assert sext(bits, amo_apply("max", old, opnd, width)) == max(sext(bits, o), sext(bits, p))
    assert amo_apply("minu", old, opnd, width) == min(o, p)
    assert amo_apply("maxu", old, opnd, width) == max(o, p)


@given(u64, u64, st.sampled_from([4, 8]))
def test_amo_result_fits_width(old, opnd, width):
    for op in ("swap", "add", "xor", "and", "or", "min", "max", "minu", "maxu"):
        assert 0 <= amo_apply(op, old, opnd, width) < (1 << (8 * width))
