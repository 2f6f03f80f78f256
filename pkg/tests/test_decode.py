"""Decoder unit tests plus the exhaustive compressed cross-check."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rvsoc.isa import DecodedInst, Decoder, IllegalInstruction, decode32, expand16

from rvc_reference import expand_reference

D = Decoder()


def test_canonical_nop():
    inst = D.decode(0x00000013)
    assert (inst.op, inst.rd, inst.rs1, inst.imm, inst.length) == ("addi", 0, 0, 0, 4)


def test_c_li_a0_zero():
    inst = D.decode(0x4501)
    assert (inst.op, inst.rd, inst.rs1, inst.imm, inst.length) == ("addi", 10, 0, 0, 2)


def test_all_zeros_is_illegal():
    with pytest.raises(IllegalInstruction):
        D.decode(0x0000)


def test_all_ones_32bit_is_illegal():
    with pytest.raises(IllegalInstruction):
        D.decode(0xFFFFFFFF)


def test_length_tracks_low_bits():
    assert D.decode(0x4501).length == 2
    assert D.decode(0x00000013).length == 4


@pytest.mark.parametrize("raw,op,rd,rs1,rs2", [
    (0x00B50533, "add", 10, 10, 11),
    (0x40B50533, "sub", 10, 10, 11),
    (0x02B50533, "mul", 10, 10, 11),
    (0x00B55533, "srl", 10, 10, 11),
    (0x0005059B, "addiw", 11, 10, 0),
    (0x0033151B, "slliw", 10, 6, 3),
])
def test_basic_rtype_fields(raw, op, rd, rs1, rs2):
    inst = D.decode(raw)
    assert inst.op == op and inst.rd == rd and inst.rs1 == rs1


def test_amo_decode():
    # amoadd.d a0, a1, (a2)
    inst = D.decode(0x00B6352F)
    assert (inst.op, inst.rd, inst.rs1, inst.rs2, inst.width) == ("amoadd_d", 10, 12, 11, 8)
    # lr.w with rs2 != 0 is reserved
    with pytest.raises(IllegalInstruction):
        D.decode(0x10B6252F)


def test_fp_loadstore_decode_without_fpu():
    assert D.decode(0x0005B507).op == "fld"
    assert D.decode(0x00A5B827).op == "fsd"
    assert D.decode(0xE2050553).op == "fmv_x_d"
    assert D.decode(0xF2050553).op == "fmv_d_x"


def test_fp_compute_illegal_by_default():
    with pytest.raises(IllegalInstruction):
        D.decode(0x00B50553)  # fadd.s
    assert Decoder(fpu_full=True).decode(0x00B50553).op == "fadd_s"


def test_csr_decode_carries_index_and_zimm():
    inst = D.decode(0x30029073)  # csrw mstatus, t0
    assert (inst.op, inst.imm, inst.rs1) == ("csrrw", 0x300, 5)
    inst = D.decode(0x3002D073)  # csrwi mstatus, 5
    assert (inst.op, inst.imm, inst.rs1) == ("csrrwi", 0x300, 5)


def _product_semantics(half):
    try:
        inst = D.decode(half)
    except IllegalInstruction:
        return None
    return (inst.op, inst.rd, inst.rs1, inst.rs2, inst.imm, inst.width)


def test_compressed_exhaustive_against_reference():
    """Every 16-bit pattern: legality and expansion semantics must match the
    independently written reference table. Zero mismatches allowed."""
    mismatches = []
    for half in range(1 << 16):
        if half & 3 == 3:
            continue
        ref = expand_reference(half)
        got = _product_semantics(half)
        if ref != got:
            mismatches.append((hex(half), ref, got))
    assert mismatches == []


def test_compressed_equivalence_with_expansion():
    """decode(c) must equal decode(expand16(c)) in everything but raw/length."""
    for half in range(1 << 16):
        if half & 3 == 3:
            continue
        try:
            word = expand16(half)
        except IllegalInstruction:
            continue
        a = D.decode(half)
        b = decode32(word)
        assert a.same_semantics(b), (hex(half), a, b)
        assert a.length == 2 and a.raw == half


@given(st.integers(min_value=0, max_value=(1 << 32) - 1))
def test_decode_totality(raw):
    """Every pattern either decodes or raises IllegalInstruction."""
    if raw & 3 != 3:
        raw &= 0xFFFF
    try:
        inst = D.decode(raw)
    except IllegalInstruction:
        return
    assert isinstance(inst, DecodedInst)
    assert inst.length == (4 if raw & 3 == 3 else 2)
    assert 0 <= inst.rd < 32 and 0 <= inst.rs1 < 32 and 0 <= inst.rs2 < 32
