"""RV64 instruction decoder.

Decodes the full 32-bit base encodings for I/M/A/Zicsr/Zifencei plus the FP
load/store/move subset, and expands every 16-bit compressed encoding to its
32-bit equivalent before decoding, so a compressed instruction and its
expansion always produce the same decoded record (apart from raw/length).

FP compute opcodes decode only when `fpu_full` is set; the default build keeps
FP registers and FP load/store/move but treats compute encodings as illegal so
firmware can trap and emulate them.
"""

from .bits import sext
from .encode import enc_b, enc_i, enc_j, enc_r, enc_s, enc_u

# Functional-unit tags used by the issue logic.
ALU = "alu"
BRANCH = "branch"
MEM = "mem"
MULDIV = "muldiv"
SYSTEM = "system"
FPMOVE = "fpmove"


class IllegalInstruction(Exception):
    """Raised for encodings that do not decode; carries the raw bits."""

    def __init__(self, raw):
        super().__init__(f"illegal instruction 0x{raw:08x}")
        self.raw = raw


class DecodedInst:
    __slots__ = ("op", "rd", "rs1", "rs2", "imm", "width", "unit", "raw", "length")

    def __init__(self, op, rd=0, rs1=0, rs2=0, imm=0, width=0, unit=ALU, raw=0, length=4):
        self.op = op
        self.rd = rd
        self.rs1 = rs1
        self.rs2 = rs2
        self.imm = imm
        self.width = width
        self.unit = unit
        self.raw = raw
        self.length = length

    def same_semantics(self, other):
        """Field equality ignoring raw/length (compressed-equivalence check)."""
        return (self.op == other.op and self.rd == other.rd and self.rs1 == other.rs1
                and self.rs2 == other.rs2 and self.imm == other.imm
                and self.width == other.width and self.unit == other.unit)

    def __repr__(self):
        return (f"DecodedInst({self.op} rd={self.rd} rs1={self.rs1} rs2={self.rs2} "
                f"imm={self.imm:#x} raw={self.raw:#x} len={self.length})")


_LOADS = {0: ("lb", 1), 1: ("lh", 2), 2: ("lw", 4), 3: ("ld", 8),
          4: ("lbu", 1), 5: ("lhu", 2), 6: ("lwu", 4)}
_STORES = {0: ("sb", 1), 1: ("sh", 2), 2: ("sw", 4), 3: ("sd", 8)}
_BRANCHES = {0: "beq", 1: "bne", 4: "blt", 5: "bge", 6: "bltu", 7: "bgeu"}
_OP_IMM = {0: "addi", 2: "slti", 3: "sltiu", 4: "xori", 6: "ori", 7: "andi"}
_OP_RR0 = {0: "add", 1: "sll", 2: "slt", 3: "sltu", 4: "xor", 5: "srl", 6: "or", 7: "and"}
_OP_MUL = {0: "mul", 1: "mulh", 2: "mulhsu", 3: "mulhu", 4: "div", 5: "divu", 6: "rem", 7: "remu"}
_AMO_FUNCT5 = {0x00: "amoadd", 0x01: "amoswap", 0x04: "amoxor", 0x08: "amoor",
               0x0C: "amoand", 0x10: "amomin", 0x14: "amomax", 0x18: "amominu", 0x1C: "amomaxu"}
_CSR_OPS = {1: "csrrw", 2: "csrrs", 3: "csrrc", 5: "csrrwi", 6: "csrrsi", 7: "csrrci"}

# FP compute decode tables (experimental full-FPU configuration only).
_FP_CMP = {0: "fle", 1: "flt", 2: "feq"}
_FP_FMA = {0x43: "fmadd", 0x47: "fmsub", 0x4B: "fnmsub", 0x4F: "fnmadd"}


def _imm_i(raw):
    return sext(12, raw >> 20)


def _imm_s(raw):
    return sext(12, ((raw >> 25) << 5) | ((raw >> 7) & 0x1F))


def _imm_b(raw):
    return sext(13, (((raw >> 31) & 1) << 12) | (((raw >> 7) & 1) << 11)
                | (((raw >> 25) & 0x3F) << 5) | (((raw >> 8) & 0xF) << 1))


def _imm_u(raw):
    return sext(32, raw & 0xFFFFF000)


def _imm_j(raw):
    return sext(21, (((raw >> 31) & 1) << 20) | (((raw >> 12) & 0xFF) << 12)
                | (((raw >> 20) & 1) << 11) | (((raw >> 21) & 0x3FF) << 1))


def decode32(raw, fpu_full=False):
    """Decode a 32-bit encoding. Raises IllegalInstruction."""
    opcode = raw & 0x7F
    rd = (raw >> 7) & 0x1F
    funct3 = (raw >> 12) & 7
    rs1 = (raw >> 15) & 0x1F
    rs2 = (raw >> 20) & 0x1F
    funct7 = raw >> 25

    if opcode == 0x37:
        return DecodedInst("lui", rd=rd, imm=_imm_u(raw), raw=raw)
    if opcode == 0x17:
        return DecodedInst("auipc", rd=rd, imm=_imm_u(raw), raw=raw)
    if opcode == 0x6F:
        return DecodedInst("jal", rd=rd, imm=_imm_j(raw), unit=BRANCH, raw=raw)
    if opcode == 0x67:
        if funct3 != 0:
            raise IllegalInstruction(raw)
        return DecodedInst("jalr", rd=rd, rs1=rs1, imm=_imm_i(raw), unit=BRANCH, raw=raw)
    if opcode == 0x63:
        op = _BRANCHES.get(funct3)
        if op is None:
            raise IllegalInstruction(raw)
        return DecodedInst(op, rs1=rs1, rs2=rs2, imm=_imm_b(raw), unit=BRANCH, raw=raw)
    if opcode == 0x03:
        ent = _LOADS.get(funct3)
        if ent is None:
            raise IllegalInstruction(raw)
        return DecodedInst(ent[0], rd=rd, rs1=rs1, imm=_imm_i(raw), width=ent[1], unit=MEM, raw=raw)
    if opcode == 0x23:
        ent = _STORES.get(funct3)
        if ent is None:
            raise IllegalInstruction(raw)
        return DecodedInst(ent[0], rs1=rs1, rs2=rs2, imm=_imm_s(raw), width=ent[1], unit=MEM, raw=raw)
    if opcode == 0x13:
        if funct3 == 1:
            if raw >> 26 != 0:
                raise IllegalInstruction(raw)
            return DecodedInst("slli", rd=rd, rs1=rs1, imm=(raw >> 20) & 0x3F, raw=raw)
        if funct3 == 5:
            shtop = raw >> 26
            if shtop == 0x00:
                return DecodedInst("srli", rd=rd, rs1=rs1, imm=(raw >> 20) & 0x3F, raw=raw)
            if shtop == 0x10:
                return DecodedInst("srai", rd=rd, rs1=rs1, imm=(raw >> 20) & 0x3F, raw=raw)
            raise IllegalInstruction(raw)
        return DecodedInst(_OP_IMM[funct3], rd=rd, rs1=rs1, imm=_imm_i(raw), raw=raw)
    if opcode == 0x1B:
        if funct3 == 0:
            return DecodedInst("addiw", rd=rd, rs1=rs1, imm=_imm_i(raw), raw=raw)
        if funct3 == 1 and funct7 == 0x00:
            return DecodedInst("slliw", rd=rd, rs1=rs1, imm=rs2, raw=raw)
        if funct3 == 5 and funct7 == 0x00:
            return DecodedInst("srliw", rd=rd, rs1=rs1, imm=rs2, raw=raw)
        if funct3 == 5 and funct7 == 0x20:
            return DecodedInst("sraiw", rd=rd, rs1=rs1, imm=rs2, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x33:
        if funct7 == 0x00:
            return DecodedInst(_OP_RR0[funct3], rd=rd, rs1=rs1, rs2=rs2, raw=raw)
        if funct7 == 0x20:
            if funct3 == 0:
                return DecodedInst("sub", rd=rd, rs1=rs1, rs2=rs2, raw=raw)
            if funct3 == 5:
                return DecodedInst("sra", rd=rd, rs1=rs1, rs2=rs2, raw=raw)
            raise IllegalInstruction(raw)
        if funct7 == 0x01:
            return DecodedInst(_OP_MUL[funct3], rd=rd, rs1=rs1, rs2=rs2, unit=MULDIV, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x3B:
        if funct7 == 0x00 and funct3 in (0, 1, 5):
            return DecodedInst({0: "addw", 1: "sllw", 5: "srlw"}[funct3],
                               rd=rd, rs1=rs1, rs2=rs2, raw=raw)
        if funct7 == 0x20 and funct3 in (0, 5):
            return DecodedInst("subw" if funct3 == 0 else "sraw", rd=rd, rs1=rs1, rs2=rs2, raw=raw)
        if funct7 == 0x01 and funct3 in (0, 4, 5, 6, 7):
            return DecodedInst({0: "mulw", 4: "divw", 5: "divuw", 6: "remw", 7: "remuw"}[funct3],
                               rd=rd, rs1=rs1, rs2=rs2, unit=MULDIV, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x0F:
        if funct3 == 0:
            return DecodedInst("fence", imm=(raw >> 20) & 0xFFF, unit=SYSTEM, raw=raw)
        if funct3 == 1:
            return DecodedInst("fence_i", unit=SYSTEM, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x73:
        if funct3 == 0:
            if raw == 0x00000073:
                return DecodedInst("ecall", unit=SYSTEM, raw=raw)
            if raw == 0x00100073:
                return DecodedInst("ebreak", unit=SYSTEM, raw=raw)
            if raw == 0x10200073:
                return DecodedInst("sret", unit=SYSTEM, raw=raw)
            if raw == 0x30200073:
                return DecodedInst("mret", unit=SYSTEM, raw=raw)
            if raw == 0x10500073:
                return DecodedInst("wfi", unit=SYSTEM, raw=raw)
            if funct7 == 0x09 and rd == 0:
                return DecodedInst("sfence_vma", rs1=rs1, rs2=rs2, unit=SYSTEM, raw=raw)
            raise IllegalInstruction(raw)
        op = _CSR_OPS.get(funct3)
        if op is None:
            raise IllegalInstruction(raw)
        # For immediate forms the rs1 slot carries the 5-bit zero-extended operand.
        return DecodedInst(op, rd=rd, rs1=rs1, imm=(raw >> 20) & 0xFFF, unit=SYSTEM, raw=raw)
    if opcode == 0x2F:
        if funct3 not in (2, 3):
            raise IllegalInstruction(raw)
        width = 4 if funct3 == 2 else 8
        suffix = "_w" if funct3 == 2 else "_d"
        funct5 = raw >> 27
        if funct5 == 0x02:
            if rs2 != 0:
                raise IllegalInstruction(raw)
            return DecodedInst("lr" + suffix, rd=rd, rs1=rs1, width=width, unit=MEM, raw=raw)
        if funct5 == 0x03:
            return DecodedInst("sc" + suffix, rd=rd, rs1=rs1, rs2=rs2, width=width, unit=MEM, raw=raw)
        op = _AMO_FUNCT5.get(funct5)
        if op is None:
            raise IllegalInstruction(raw)
        return DecodedInst(op + suffix, rd=rd, rs1=rs1, rs2=rs2, width=width, unit=MEM, raw=raw)
    if opcode == 0x07:
        if funct3 == 2:
            return DecodedInst("flw", rd=rd, rs1=rs1, imm=_imm_i(raw), width=4, unit=MEM, raw=raw)
        if funct3 == 3:
            return DecodedInst("fld", rd=rd, rs1=rs1, imm=_imm_i(raw), width=8, unit=MEM, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x27:
        if funct3 == 2:
            return DecodedInst("fsw", rs1=rs1, rs2=rs2, imm=_imm_s(raw), width=4, unit=MEM, raw=raw)
        if funct3 == 3:
            return DecodedInst("fsd", rs1=rs1, rs2=rs2, imm=_imm_s(raw), width=8, unit=MEM, raw=raw)
        raise IllegalInstruction(raw)
    if opcode == 0x53:
        return _decode_fp_op(raw, rd, funct3, rs1, rs2, funct7, fpu_full)
    if opcode in _FP_FMA:
        if not fpu_full:
            raise IllegalInstruction(raw)
        fmt = (raw >> 25) & 3
        if fmt > 1:
            raise IllegalInstruction(raw)
        op = _FP_FMA[opcode] + ("_s" if fmt == 0 else "_d")
        # rs3 lives in funct7[6:2]; carried in imm.
        return DecodedInst(op, rd=rd, rs1=rs1, rs2=rs2, imm=funct7 >> 2, unit=FPMOVE, raw=raw)
    raise IllegalInstruction(raw)


def _decode_fp_op(raw, rd, funct3, rs1, rs2, funct7, fpu_full):
    # Bit moves are plain register transfers and decode in every configuration.
    if funct3 == 0 and rs2 == 0:
        if funct7 == 0x70:
            return DecodedInst("fmv_x_w", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
        if funct7 == 0x78:
            return DecodedInst("fmv_w_x", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
        if funct7 == 0x71:
            return DecodedInst("fmv_x_d", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
        if funct7 == 0x79:
            return DecodedInst("fmv_d_x", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if not fpu_full:
        raise IllegalInstruction(raw)
    fmt = funct7 & 3
    if fmt > 1:
        raise IllegalInstruction(raw)
    sfx = "_s" if fmt == 0 else "_d"
    group = funct7 >> 2
    if group == 0x00:
        return DecodedInst("fadd" + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x01:
        return DecodedInst("fsub" + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x02:
        return DecodedInst("fmul" + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x03:
        return DecodedInst("fdiv" + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x0B and rs2 == 0:
        return DecodedInst("fsqrt" + sfx, rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if group == 0x04 and funct3 in (0, 1, 2):
        op = {0: "fsgnj", 1: "fsgnjn", 2: "fsgnjx"}[funct3]
        return DecodedInst(op + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x05 and funct3 in (0, 1):
        return DecodedInst(("fmin" if funct3 == 0 else "fmax") + sfx,
                           rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x08 and fmt == 0 and rs2 == 1:
        return DecodedInst("fcvt_s_d", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if group == 0x08 and fmt == 1 and rs2 == 0:
        return DecodedInst("fcvt_d_s", rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if group == 0x14 and funct3 in (0, 1, 2):
        return DecodedInst(_FP_CMP[funct3] + sfx, rd=rd, rs1=rs1, rs2=rs2, unit=FPMOVE, raw=raw)
    if group == 0x1C and funct3 == 1 and rs2 == 0:
        return DecodedInst("fclass" + sfx, rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if group == 0x18 and rs2 <= 3:
        op = {0: "fcvt_w", 1: "fcvt_wu", 2: "fcvt_l", 3: "fcvt_lu"}[rs2]
        return DecodedInst(op + sfx, rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    if group == 0x1A and rs2 <= 3:
        op = {0: "fcvt" + sfx + "_w", 1: "fcvt" + sfx + "_wu",
              2: "fcvt" + sfx + "_l", 3: "fcvt" + sfx + "_lu"}[rs2]
        return DecodedInst(op, rd=rd, rs1=rs1, unit=FPMOVE, raw=raw)
    raise IllegalInstruction(raw)


def expand16(half):
    """Expand a 16-bit compressed encoding into the equivalent 32-bit encoding.

    Raises IllegalInstruction for reserved/undefined patterns (including the
    all-zeros word). HINT encodings expand to their architectural no-effect
    equivalents.
    """
    if half == 0:
        raise IllegalInstruction(half)
    quad = half & 3
    funct3 = (half >> 13) & 7
    if quad == 0:
        rdp = ((half >> 2) & 7) + 8
        rs1p = ((half >> 7) & 7) + 8
        if funct3 == 0:
            imm = ((half >> 7) & 0x30) | ((half >> 1) & 0x3C0) | ((half >> 4) & 4) | ((half >> 2) & 8)
            if imm == 0:
                raise IllegalInstruction(half)
            return enc_i(0x13, rdp, 0, 2, imm)  # c.addi4spn
        if funct3 == 1:  # c.fld
            imm = ((half >> 7) & 0x38) | ((half << 1) & 0xC0)
            return enc_i(0x07, rdp, 3, rs1p, imm)
        if funct3 == 2:  # c.lw
            imm = ((half >> 7) & 0x38) | ((half >> 4) & 4) | ((half << 1) & 0x40)
            return enc_i(0x03, rdp, 2, rs1p, imm)
        if funct3 == 3:  # c.ld
            imm = ((half >> 7) & 0x38) | ((half << 1) & 0xC0)
            return enc_i(0x03, rdp, 3, rs1p, imm)
        if funct3 == 5:  # c.fsd
            imm = ((half >> 7) & 0x38) | ((half << 1) & 0xC0)
            return enc_s(0x27, 3, rs1p, rdp, imm)
        if funct3 == 6:  # c.sw
            imm = ((half >> 7) & 0x38) | ((half >> 4) & 4) | ((half << 1) & 0x40)
            return enc_s(0x23, 2, rs1p, rdp, imm)
        if funct3 == 7:  # c.sd
            imm = ((half >> 7) & 0x38) | ((half << 1) & 0xC0)
            return enc_s(0x23, 3, rs1p, rdp, imm)
        raise IllegalInstruction(half)
    if quad == 1:
        rd = (half >> 7) & 0x1F
        imm6 = sext(6, ((half >> 7) & 0x20) | ((half >> 2) & 0x1F))
        if funct3 == 0:  # c.addi / c.nop
            return enc_i(0x13, rd, 0, rd, imm6)
        if funct3 == 1:  # c.addiw (rd=x0 reserved)
            if rd == 0:
                raise IllegalInstruction(half)
            return enc_i(0x1B, rd, 0, rd, imm6)
        if funct3 == 2:  # c.li
            return enc_i(0x13, rd, 0, 0, imm6)
        if funct3 == 3:
            if rd == 2:  # c.addi16sp
                imm = sext(10, ((half >> 3) & 0x200) | ((half >> 2) & 0x10) | ((half << 1) & 0x40)
                           | ((half << 4) & 0x180) | ((half << 3) & 0x20))
                if imm == 0:
                    raise IllegalInstruction(half)
                return enc_i(0x13, 2, 0, 2, imm)
            imm = sext(18, ((half << 5) & 0x20000) | ((half << 10) & 0x1F000))
            if imm == 0:
                raise IllegalInstruction(half)
            return enc_u(0x37, rd, imm & 0xFFFFF000)  # c.lui
        if funct3 == 4:
            sub = (half >> 10) & 3
            rdp = ((half >> 7) & 7) + 8
            if sub == 0 or sub == 1:
                shamt = ((half >> 7) & 0x20) | ((half >> 2) & 0x1F)
                if sub == 0:
                    return enc_i(0x13, rdp, 5, rdp, shamt)  # c.srli
                return enc_i(0x13, rdp, 5, rdp, shamt | 0x400)  # c.srai
            if sub == 2:
                return enc_i(0x13, rdp, 7, rdp, imm6)  # c.andi
            rs2p = ((half >> 2) & 7) + 8
            if half & 0x1000:
                if (half >> 5) & 3 == 0:
                    return enc_r(0x3B, rdp, 0, rdp, rs2p, 0x20)  # c.subw
                if (half >> 5) & 3 == 1:
                    return enc_r(0x3B, rdp, 0, rdp, rs2p, 0x00)  # c.addw
                raise IllegalInstruction(half)
            funct2 = (half >> 5) & 3
            if funct2 == 0:
                return enc_r(0x33, rdp, 0, rdp, rs2p, 0x20)  # c.sub
            if funct2 == 1:
                return enc_r(0x33, rdp, 4, rdp, rs2p, 0x00)  # c.xor
            if funct2 == 2:
                return enc_r(0x33, rdp, 6, rdp, rs2p, 0x00)  # c.or
            return enc_r(0x33, rdp, 7, rdp, rs2p, 0x00)  # c.and
        if funct3 == 5:  # c.j
            imm = sext(12, ((half >> 1) & 0x800) | ((half >> 7) & 0x10) | ((half >> 1) & 0x300)
                       | ((half << 2) & 0x400) | ((half >> 1) & 0x40) | ((half << 1) & 0x80)
                       | ((half >> 2) & 0xE) | ((half << 3) & 0x20))
            return enc_j(0x6F, 0, imm)
        # c.beqz / c.bnez
        rs1p = ((half >> 7) & 7) + 8
        imm = sext(9, ((half >> 4) & 0x100) | ((half >> 7) & 0x18) | ((half << 1) & 0xC0)
                   | ((half >> 2) & 6) | ((half << 3) & 0x20))
        return enc_b(0x63, 0 if funct3 == 6 else 1, rs1p, 0, imm)
    # quad == 2
    rd = (half >> 7) & 0x1F
    rs2 = (half >> 2) & 0x1F
    if funct3 == 0:  # c.slli
        shamt = ((half >> 7) & 0x20) | ((half >> 2) & 0x1F)
        return enc_i(0x13, rd, 1, rd, shamt)
    if funct3 == 1:  # c.fldsp
        imm = ((half >> 7) & 0x20) | ((half >> 2) & 0x18) | ((half << 4) & 0x1C0)
        return enc_i(0x07, rd, 3, 2, imm)
    if funct3 == 2:  # c.lwsp
        if rd == 0:
            raise IllegalInstruction(half)
        imm = ((half >> 7) & 0x20) | ((half >> 2) & 0x1C) | ((half << 4) & 0xC0)
        return enc_i(0x03, rd, 2, 2, imm)
    if funct3 == 3:  # c.ldsp
        if rd == 0:
            raise IllegalInstruction(half)
        imm = ((half >> 7) & 0x20) | ((half >> 2) & 0x18) | ((half << 4) & 0x1C0)
        return enc_i(0x03, rd, 3, 2, imm)
    if funct3 == 4:
        if not half & 0x1000:
            if rs2 == 0:  # c.jr
                if rd == 0:
                    raise IllegalInstruction(half)
                return enc_i(0x67, 0, 0, rd, 0)
            return enc_r(0x33, rd, 0, 0, rs2, 0x00)  # c.mv
        if rs2 == 0:
            if rd == 0:
                return 0x00100073  # c.ebreak
            return enc_i(0x67, 1, 0, rd, 0)  # c.jalr
        return enc_r(0x33, rd, 0, rd, rs2, 0x00)  # c.add
    if funct3 == 5:  # c.fsdsp
        imm = ((half >> 7) & 0x38) | ((half >> 1) & 0x1C0)
        return enc_s(0x27, 3, 2, rs2, imm)
    if funct3 == 6:  # c.swsp
        imm = ((half >> 7) & 0x3C) | ((half >> 1) & 0xC0)
        return enc_s(0x23, 2, 2, rs2, imm)
    # c.sdsp
    imm = ((half >> 7) & 0x38) | ((half >> 1) & 0x1C0)
    return enc_s(0x23, 3, 2, rs2, imm)


class Decoder:
    """Caching decode front door; one instance per FPU configuration."""

    def __init__(self, fpu_full=False):
        self.fpu_full = fpu_full
        self._cache = {}

    def decode(self, raw):
        """Decode a 16- or 32-bit encoding; raises IllegalInstruction."""
        hit = self._cache.get(raw)
        if hit is not None:
            if hit is _ILLEGAL:
                raise IllegalInstruction(raw)
            return hit
        try:
            if raw & 3 == 3:
                inst = decode32(raw & 0xFFFFFFFF, self.fpu_full)
            else:
                inst = decode32(expand16(raw & 0xFFFF), self.fpu_full)
                inst.raw = raw & 0xFFFF
                inst.length = 2
        except IllegalInstruction:
            self._cache[raw] = _ILLEGAL
            raise
        self._cache[raw] = inst
        return inst

    def try_decode(self, raw):
        """Decode, returning None instead of raising for illegal encodings."""
        try:
            return self.decode(raw)
        except IllegalInstruction:
            return None


_ILLEGAL = object()
