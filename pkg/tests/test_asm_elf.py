"""Assembler and ELF round-trip tests.

The assembler is validated by decoding its output with the product decoder,
which is itself cross-checked exhaustively against an independent reference,
so the two layers vouch for each other from different directions.
"""

import subprocess

import pytest

from rvsoc.asm import A0, A1, RA, T0, T1, Assembler
from rvsoc.isa import Decoder, sext, to_s64
from rvsoc.soc.elf import MalformedElf, read_elf, write_elf

D = Decoder()


def decode_stream(data):
    out = []
    pos = 0
    while pos < len(data):
        half = int.from_bytes(data[pos:pos + 2], "little")
        if half & 3 == 3:
            raw = int.from_bytes(data[pos:pos + 4], "little")
            pos += 4
        else:
            raw = half
            pos += 2
        out.append(D.decode(raw))
    return out


def test_basic_encodings_roundtrip():
    a = Assembler()
    a.addi(T0, 0, -5)
    a.add(A0, T0, T1)
    a.lw(A1, A0, 16)
    a.sd(T0, A0, -8)
    a.lui(T1, 0xFFFFF000)
    insts = decode_stream(a.assemble())
    assert [i.op for i in insts] == ["addi", "add", "lw", "sd", "lui"]
    assert insts[0].imm == -5
    assert insts[2].imm == 16
    assert insts[3].imm == -8
    assert insts[4].imm == sext(32, 0xFFFFF000)


def test_branch_and_label_resolution():
    a = Assembler(org=0x8000_0000)
    a.label("top")
    a.addi(T0, T0, 1)
    a.bne(T0, T1, "top")
    a.j("end")
    a.nop()
    a.label("end")
    insts = decode_stream(a.assemble())
    assert insts[1].op == "bne" and insts[1].imm == -4
    assert insts[2].op == "jal" and insts[2].imm == 8


@pytest.mark.parametrize("value", [
    0, 1, -1, 5, -2048, 2047, 0x7FFFFFFF, -0x80000000, 0x12345678,
    0xDEADBEEF_CAFEF00D, -0x1234_5678_9ABC_DEF0, (1 << 63) - 1, -(1 << 63),
])
def test_li_materializes_any_constant(value):
    from rvsoc.isa import HartState, StepEnv, step
    from conftest import ToyMem

    a = Assembler()
    a.li(A0, value)
    data = a.assemble()
    mem = ToyMem()
    mem.data[:len(data)] = data
    state = HartState(pc=0x8000_0000)
    env = StepEnv()
    for _ in range(len(decode_stream(data))):
        res = step(state, mem, env)
        assert res.trap is None
    assert state.x[10] == to_s64(value)


def test_la_loads_label_address():
    from rvsoc.isa import HartState, StepEnv, step
    from conftest import ToyMem

    a = Assembler(org=0x8000_0000)
    a.la(A0, "data")
    a.j("data")
    a.label("data")
    a.dword(0x1122334455667788)
    image = a.assemble()
    mem = ToyMem()
    mem.data[:len(image)] = image
    state = HartState(pc=0x8000_0000)
    env = StepEnv()
    step(state, mem, env)
    step(state, mem, env)
    assert state.x[10] == a.labels["data"]


def test_elf_roundtrip_with_symbols():
    a = Assembler(org=0x8000_0000)
    a.li(A0, 1)
    payload = a.assemble()
    elf = write_elf(0x8000_0000, [(0x8000_0000, payload)],
                    {"tohost": 0x8000_1000, "fromhost": 0x8000_1040})
    img = read_elf(elf)
    assert img.entry == 0x8000_0000
    assert img.segments == [(0x8000_0000, payload)]
    assert img.symbols["tohost"] == 0x8000_1000
    assert img.symbols["fromhost"] == 0x8000_1040


def test_elf_rejects_wrong_class():
    elf = bytearray(write_elf(0x8000_0000, [(0x8000_0000, b"\x13\x00\x00\x00")], {}))
    elf[4] = 1  # ELFCLASS32
    with pytest.raises(MalformedElf):
        read_elf(bytes(elf))


def test_elf_rejects_wrong_machine():
    elf = bytearray(write_elf(0x8000_0000, [(0x8000_0000, b"\x13\x00\x00\x00")], {}))
    elf[18] = 62  # x86-64
    with pytest.raises(MalformedElf):
        read_elf(bytes(elf))


def test_elf_readable_by_standard_tool(tmp_path):
    """Cross-check the writer against binutils readelf when available."""
    elf = write_elf(0x8000_0000, [(0x8000_0000, b"\x13\x00\x00\x00")],
                    {"tohost": 0x8000_1000})
    path = tmp_path / "prog.elf"
    path.write_bytes(elf)
    try:
        out = subprocess.run(["readelf", "-hs", str(path)], capture_output=True,
                             text=True, timeout=30)
    except FileNotFoundError:
        pytest.skip("readelf not available")
    assert out.returncode == 0
    assert "RISC-V" in out.stdout
    assert "tohost" in out.stdout
