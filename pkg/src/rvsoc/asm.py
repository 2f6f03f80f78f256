"""Tiny two-pass RV64 assembler.

Emits machine code for the implemented instruction set from a builder-style
API with labels and a handful of pseudo-instructions. Used by the test-suite
generator, the random program generator, the litmus kernels, and the
microbenchmarks, so the simulator can be exercised without an external
toolchain.
"""

from .isa.bits import sext
from .isa.encode import enc_b, enc_i, enc_j, enc_r, enc_s, enc_u

# ABI register names.
ZERO, RA, SP, GP, TP = 0, 1, 2, 3, 4
T0, T1, T2 = 5, 6, 7
S0, FP, S1 = 8, 8, 9
A0, A1, A2, A3, A4, A5, A6, A7 = 10, 11, 12, 13, 14, 15, 16, 17
S2, S3, S4, S5, S6, S7, S8, S9, S10, S11 = 18, 19, 20, 21, 22, 23, 24, 25, 26, 27
T3, T4, T5, T6 = 28, 29, 30, 31


class AsmError(Exception):
    pass


class Assembler:
    """Accumulates instructions/data, resolves labels on assemble()."""

    def __init__(self, org=0x8000_0000):
        self.org = org
        self._items = []  # (size, bytes | callable(addr, labels) -> int)
        self._labels = {}
        self._pos = 0

    # -- layout ---------------------------------------------------------

    def label(self, name):
        if name in self._labels:
            raise AsmError(f"duplicate label {name}")
        self._labels[name] = self.org + self._pos
        return self

    def here(self):
        return self.org + self._pos

    def word(self, value):
        self._items.append((4, (value & 0xFFFFFFFF).to_bytes(4, "little")))
        self._pos += 4
        return self

    def half(self, value):
        self._items.append((2, (value & 0xFFFF).to_bytes(2, "little")))
        self._pos += 2
        return self

    def dword(self, value):
        self._items.append((8, (value & (1 << 64) - 1).to_bytes(8, "little")))
        self._pos += 8
        return self

    def space(self, nbytes, fill=0):
        self._items.append((nbytes, bytes([fill]) * nbytes))
        self._pos += nbytes
        return self

    def align(self, boundary):
        while (self.org + self._pos) % boundary:
            if boundary >= 4 and (self.org + self._pos) % 4 == 0:
                self.word(0x00000013)  # nop padding on word alignment
            else:
                self._items.append((1, b"\x00"))
                self._pos += 1
        return self

    def _emit(self, word):
        self._items.append((4, word.to_bytes(4, "little")))
        self._pos += 4
        return self

    def _emit_fix(self, fn):
        self._items.append((4, fn))
        self._pos += 4
        return self

    def _resolve(self, target, labels, addr):
        if isinstance(target, str):
            if target not in labels:
                raise AsmError(f"undefined label {target}")
            return labels[target] - addr
        return target

    def assemble(self):
        """Return the assembled byte string (labels resolved)."""
        out = bytearray()
        addr = self.org
        for size, item in self._items:
            if callable(item):
                word = item(addr, self._labels)
                out += word.to_bytes(size, "little")
            else:
                out += item
            addr += size
        return bytes(out)

    @property
    def labels(self):
        return dict(self._labels)

    # -- base integer instructions ---------------------------------------

    def lui(self, rd, imm):
        return self._emit(enc_u(0x37, rd, imm))

    def auipc(self, rd, imm):
        return self._emit(enc_u(0x17, rd, imm))

    def jal(self, rd, target):
        def fix(addr, labels):
            off = self._resolve(target, labels, addr)
            if off & 1 or not -(1 << 20) <= off < 1 << 20:
                raise AsmError(f"jal offset {off} out of range")
            return enc_j(0x6F, rd, off)
        return self._emit_fix(fix)

    def jalr(self, rd, rs1, imm=0):
        return self._emit(enc_i(0x67, rd, 0, rs1, imm))

    def _branch(self, funct3, rs1, rs2, target):
        def fix(addr, labels):
            off = self._resolve(target, labels, addr)
            if off & 1 or not -(1 << 12) <= off < 1 << 12:
                raise AsmError(f"branch offset {off} out of range")
            return enc_b(0x63, funct3, rs1, rs2, off)
        return self._emit_fix(fix)

    def beq(self, rs1, rs2, target):
        return self._branch(0, rs1, rs2, target)

    def bne(self, rs1, rs2, target):
        return self._branch(1, rs1, rs2, target)

    def blt(self, rs1, rs2, target):
        return self._branch(4, rs1, rs2, target)

    def bge(self, rs1, rs2, target):
        return self._branch(5, rs1, rs2, target)

    def bltu(self, rs1, rs2, target):
        return self._branch(6, rs1, rs2, target)

    def bgeu(self, rs1, rs2, target):
        return self._branch(7, rs1, rs2, target)

    def _load(self, funct3, rd, rs1, imm):
        return self._emit(enc_i(0x03, rd, funct3, rs1, imm))

    def lb(self, rd, rs1, imm=0):
        return self._load(0, rd, rs1, imm)

    def lh(self, rd, rs1, imm=0):
        return self._load(1, rd, rs1, imm)

    def lw(self, rd, rs1, imm=0):
        return self._load(2, rd, rs1, imm)

    def ld(self, rd, rs1, imm=0):
        return self._load(3, rd, rs1, imm)

    def lbu(self, rd, rs1, imm=0):
        return self._load(4, rd, rs1, imm)

    def lhu(self, rd, rs1, imm=0):
        return self._load(5, rd, rs1, imm)

    def lwu(self, rd, rs1, imm=0):
        return self._load(6, rd, rs1, imm)

    def _store(self, funct3, rs2, rs1, imm):
        return self._emit(enc_s(0x23, funct3, rs1, rs2, imm))

    def sb(self, rs2, rs1, imm=0):
        return self._store(0, rs2, rs1, imm)

    def sh(self, rs2, rs1, imm=0):
        return self._store(1, rs2, rs1, imm)

    def sw(self, rs2, rs1, imm=0):
        return self._store(2, rs2, rs1, imm)

    def sd(self, rs2, rs1, imm=0):
        return self._store(3, rs2, rs1, imm)

    def addi(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 0, rs1, imm))

    def slti(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 2, rs1, imm))

    def sltiu(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 3, rs1, imm))

    def xori(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 4, rs1, imm))

    def ori(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 6, rs1, imm))

    def andi(self, rd, rs1, imm):
        return self._emit(enc_i(0x13, rd, 7, rs1, imm))

    def slli(self, rd, rs1, shamt):
        return self._emit(enc_i(0x13, rd, 1, rs1, shamt & 0x3F))

    def srli(self, rd, rs1, shamt):
        return self._emit(enc_i(0x13, rd, 5, rs1, shamt & 0x3F))

    def srai(self, rd, rs1, shamt):
        return self._emit(enc_i(0x13, rd, 5, rs1, (shamt & 0x3F) | 0x400))

    def addiw(self, rd, rs1, imm):
        return self._emit(enc_i(0x1B, rd, 0, rs1, imm))

    def slliw(self, rd, rs1, shamt):
        return self._emit(enc_i(0x1B, rd, 1, rs1, shamt & 0x1F))

    def srliw(self, rd, rs1, shamt):
        return self._emit(enc_i(0x1B, rd, 5, rs1, shamt & 0x1F))

    def sraiw(self, rd, rs1, shamt):
        return self._emit(enc_i(0x1B, rd, 5, rs1, (shamt & 0x1F) | 0x400))

    def _op(self, funct3, funct7, rd, rs1, rs2, opcode=0x33):
        return self._emit(enc_r(opcode, rd, funct3, rs1, rs2, funct7))

    def add(self, rd, rs1, rs2):
        return self._op(0, 0x00, rd, rs1, rs2)

    def sub(self, rd, rs1, rs2):
        return self._op(0, 0x20, rd, rs1, rs2)

    def sll(self, rd, rs1, rs2):
        return self._op(1, 0x00, rd, rs1, rs2)

    def slt(self, rd, rs1, rs2):
        return self._op(2, 0x00, rd, rs1, rs2)

    def sltu(self, rd, rs1, rs2):
        return self._op(3, 0x00, rd, rs1, rs2)

    def xor(self, rd, rs1, rs2):
        return self._op(4, 0x00, rd, rs1, rs2)

    def srl(self, rd, rs1, rs2):
        return self._op(5, 0x00, rd, rs1, rs2)

    def sra(self, rd, rs1, rs2):
        return self._op(5, 0x20, rd, rs1, rs2)

    def or_(self, rd, rs1, rs2):
        return self._op(6, 0x00, rd, rs1, rs2)

    def and_(self, rd, rs1, rs2):
        return self._op(7, 0x00, rd, rs1, rs2)

    def addw(self, rd, rs1, rs2):
        return self._op(0, 0x00, rd, rs1, rs2, 0x3B)

    def subw(self, rd, rs1, rs2):
        return self._op(0, 0x20, rd, rs1, rs2, 0x3B)

    def sllw(self, rd, rs1, rs2):
        return self._op(1, 0x00, rd, rs1, rs2, 0x3B)

    def srlw(self, rd, rs1, rs2):
        return self._op(5, 0x00, rd, rs1, rs2, 0x3B)

    def sraw(self, rd, rs1, rs2):
        return self._op(5, 0x20, rd, rs1, rs2, 0x3B)

    def mul(self, rd, rs1, rs2):
        return self._op(0, 0x01, rd, rs1, rs2)

    def mulh(self, rd, rs1, rs2):
        return self._op(1, 0x01, rd, rs1, rs2)

    def mulhsu(self, rd, rs1, rs2):
        return self._op(2, 0x01, rd, rs1, rs2)

    def mulhu(self, rd, rs1, rs2):
        return self._op(3, 0x01, rd, rs1, rs2)

    def div(self, rd, rs1, rs2):
        return self._op(4, 0x01, rd, rs1, rs2)

    def divu(self, rd, rs1, rs2):
        return self._op(5, 0x01, rd, rs1, rs2)

    def rem(self, rd, rs1, rs2):
        return self._op(6, 0x01, rd, rs1, rs2)

    def remu(self, rd, rs1, rs2):
        return self._op(7, 0x01, rd, rs1, rs2)

    def mulw(self, rd, rs1, rs2):
        return self._op(0, 0x01, rd, rs1, rs2, 0x3B)

    def divw(self, rd, rs1, rs2):
        return self._op(4, 0x01, rd, rs1, rs2, 0x3B)

    def divuw(self, rd, rs1, rs2):
        return self._op(5, 0x01, rd, rs1, rs2, 0x3B)

    def remw(self, rd, rs1, rs2):
        return self._op(6, 0x01, rd, rs1, rs2, 0x3B)

    def remuw(self, rd, rs1, rs2):
        return self._op(7, 0x01, rd, rs1, rs2, 0x3B)

    # -- atomics ----------------------------------------------------------

    def _amo(self, funct5, funct3, rd, rs1, rs2):
        return self._emit(enc_r(0x2F, rd, funct3, rs1, rs2, funct5 << 2))

    def lr_w(self, rd, rs1):
        return self._amo(0x02, 2, rd, rs1, 0)

    def lr_d(self, rd, rs1):
        return self._amo(0x02, 3, rd, rs1, 0)

    def sc_w(self, rd, rs2, rs1):
        return self._amo(0x03, 2, rd, rs1, rs2)

    def sc_d(self, rd, rs2, rs1):
        return self._amo(0x03, 3, rd, rs1, rs2)

    def _amo_named(self, name, funct3, rd, rs2, rs1):
        funct5 = {"swap": 0x01, "add": 0x00, "xor": 0x04, "and": 0x0C, "or": 0x08,
                  "min": 0x10, "max": 0x14, "minu": 0x18, "maxu": 0x1C}[name]
        return self._amo(funct5, funct3, rd, rs1, rs2)

    def amo_w(self, name, rd, rs2, rs1):
        return self._amo_named(name, 2, rd, rs2, rs1)

    def amo_d(self, name, rd, rs2, rs1):
        return self._amo_named(name, 3, rd, rs2, rs1)

    # -- system -----------------------------------------------------------

    def ecall(self):
        return self._emit(0x00000073)

    def ebreak(self):
        return self._emit(0x00100073)

    def mret(self):
        return self._emit(0x30200073)

    def sret(self):
        return self._emit(0x10200073)

    def wfi(self):
        return self._emit(0x10500073)

    def fence(self):
        return self._emit(0x0FF0000F)

    def fence_i(self):
        return self._emit(0x0000100F)

    def sfence_vma(self, rs1=0, rs2=0):
        return self._emit(enc_r(0x73, 0, 0, rs1, rs2, 0x09))

    def csrrw(self, rd, csr, rs1):
        return self._emit(enc_i(0x73, rd, 1, rs1, csr))

    def csrrs(self, rd, csr, rs1):
        return self._emit(enc_i(0x73, rd, 2, rs1, csr))

    def csrrc(self, rd, csr, rs1):
        return self._emit(enc_i(0x73, rd, 3, rs1, csr))

    def csrrwi(self, rd, csr, zimm):
        return self._emit(enc_i(0x73, rd, 5, zimm, csr))

    def csrrsi(self, rd, csr, zimm):
        return self._emit(enc_i(0x73, rd, 6, zimm, csr))

    def csrrci(self, rd, csr, zimm):
        return self._emit(enc_i(0x73, rd, 7, zimm, csr))

    # -- FP load/store/move ------------------------------------------------

    def flw(self, rd, rs1, imm=0):
        return self._emit(enc_i(0x07, rd, 2, rs1, imm))

    def fld(self, rd, rs1, imm=0):
        return self._emit(enc_i(0x07, rd, 3, rs1, imm))

    def fsw(self, rs2, rs1, imm=0):
        return self._emit(enc_s(0x27, 2, rs1, rs2, imm))

    def fsd(self, rs2, rs1, imm=0):
        return self._emit(enc_s(0x27, 3, rs1, rs2, imm))

    def fmv_x_d(self, rd, rs1):
        return self._emit(enc_r(0x53, rd, 0, rs1, 0, 0x71))

    def fmv_d_x(self, rd, rs1):
        return self._emit(enc_r(0x53, rd, 0, rs1, 0, 0x79))

    def fmv_x_w(self, rd, rs1):
        return self._emit(enc_r(0x53, rd, 0, rs1, 0, 0x70))

    def fmv_w_x(self, rd, rs1):
        return self._emit(enc_r(0x53, rd, 0, rs1, 0, 0x78))

    # -- pseudo-instructions ------------------------------------------------

    def nop(self):
        return self.addi(0, 0, 0)

    def mv(self, rd, rs1):
        return self.addi(rd, rs1, 0)

    def j(self, target):
        return self.jal(0, target)

    def ret(self):
        return self.jalr(0, RA, 0)

    def call(self, target):
        return self.jal(RA, target)

    def beqz(self, rs1, target):
        return self.beq(rs1, 0, target)

    def bnez(self, rs1, target):
        return self.bne(rs1, 0, target)

    def csrr(self, rd, csr):
        return self.csrrs(rd, csr, 0)

    def csrw(self, csr, rs1):
        return self.csrrw(0, csr, rs1)

    def li(self, rd, value):
        """Materialize an arbitrary 64-bit constant."""
        value = sext(64, value)
        if -2048 <= value < 2048:
            return self.addi(rd, 0, value)
        if -(1 << 31) <= value < 1 << 31:
            hi20 = ((value + 0x800) >> 12) & 0xFFFFF
            lo = sext(12, value)
            self.lui(rd, hi20 << 12)
            if lo:
                self.addiw(rd, rd, lo)
            return self
        lo = sext(12, value)
        self.li(rd, (value - lo) >> 12)
        self.slli(rd, rd, 12)
        if lo:
            self.addi(rd, rd, lo)
        return self

    def la(self, rd, label):
        """Load a label's absolute address (auipc + addi, position-exact)."""
        def fix_hi(addr, labels):
            off = labels[label] - addr
            return enc_u(0x17, rd, ((off + 0x800) >> 12 << 12) & 0xFFFFFFFF)

        def fix_lo(addr, labels):
            off = labels[label] - (addr - 4)
            return enc_i(0x13, rd, 0, rd, sext(12, off))
        self._emit_fix(fix_hi)
        return self._emit_fix(fix_lo)
