"""Functional (untimed) RV64 hart: one-instruction-at-a-time execution.

This model provides the architectural semantics for the whole simulator: the
pipeline uses its helper functions for execute-stage results, and a shadow
instance of it runs as the lockstep oracle at retirement.

All execution environment interaction (instruction fetch, data memory, the
volatile counter CSRs, SC outcomes) goes through a StepEnv so the same step
function serves both pure-oracle runs and replay-driven lockstep checking.
"""

from .alu import alu_result, branch_taken
from .amo import amo_apply
from .bits import sext, to_s64, to_u64
from .csr import (MST_FS, MST_MIE, MST_MPIE, MST_MPP, MST_MPP_SHIFT, MST_MPRV,
                  MST_MXR, MST_SIE, MST_SPIE, MST_SPP, MST_SUM, PRIV_M, PRIV_S,
                  PRIV_U, CYCLE, INSTRET, TIME, CsrFile, counter_accessible,
                  csr_read, csr_write)
from .decode import Decoder, IllegalInstruction
from .mmu import (ACCESS_FETCH, ACCESS_LOAD, ACCESS_STORE, AccessFault,
                  PageFault, translate)

# Exception cause codes.
EXC_INST_MISALIGNED = 0  # never produced: compressed support removes it
EXC_INST_ACCESS = 1
EXC_ILLEGAL = 2
EXC_BREAKPOINT = 3
EXC_LOAD_MISALIGNED = 4
EXC_LOAD_ACCESS = 5
EXC_STORE_MISALIGNED = 6
EXC_STORE_ACCESS = 7
EXC_ECALL_U = 8
EXC_ECALL_S = 9
EXC_ECALL_M = 11
EXC_INST_PAGEFAULT = 12
EXC_LOAD_PAGEFAULT = 13
EXC_STORE_PAGEFAULT = 15

_PAGEFAULT_CAUSE = {ACCESS_FETCH: EXC_INST_PAGEFAULT, ACCESS_LOAD: EXC_LOAD_PAGEFAULT,
                    ACCESS_STORE: EXC_STORE_PAGEFAULT}
_ACCESSFAULT_CAUSE = {ACCESS_FETCH: EXC_INST_ACCESS, ACCESS_LOAD: EXC_LOAD_ACCESS,
                      ACCESS_STORE: EXC_STORE_ACCESS}

NANBOX = 0xFFFFFFFF_00000000

# AMO opclass -> amo_apply function name.
AMO_FN = {}
for _w, _sfx in ((4, "_w"), (8, "_d")):
    for _name in ("swap", "add", "xor", "and", "or", "min", "max", "minu", "maxu"):
        AMO_FN["amo" + _name + _sfx] = _name

_IMM_OPS = {"addi", "slti", "sltiu", "xori", "ori", "andi", "slli", "srli", "srai",
            "addiw", "slliw", "srliw", "sraiw"}


class TrapInfo:
    __slots__ = ("cause", "tval", "is_interrupt")

    def __init__(self, cause, tval=0, is_interrupt=False):
        self.cause = cause
        self.tval = tval
        self.is_interrupt = is_interrupt

    def __repr__(self):
        kind = "interrupt" if self.is_interrupt else "exception"
        return f"TrapInfo({kind} cause={self.cause} tval={self.tval:#x})"

    def __eq__(self, other):
        return (isinstance(other, TrapInfo) and self.cause == other.cause
                and self.tval == other.tval and self.is_interrupt == other.is_interrupt)


class TrapException(Exception):
    """Internal control flow: architectural exception during execution."""

    def __init__(self, trap):
        super().__init__(repr(trap))
        self.trap = trap


class HartState:
    """Architectural state of one hart. x0 is kept hardwired to zero by all
    writers; integer registers hold canonical signed 64-bit values, FP
    registers raw unsigned 64-bit values (NaN-boxed for single precision)."""

    __slots__ = ("x", "f", "pc", "priv", "csr", "reservation", "instret")

    def __init__(self, hartid=0, pc=0):
        self.x = [0] * 32
        self.f = [0] * 32
        self.pc = pc
        self.priv = PRIV_M
        self.csr = CsrFile(hartid)
        self.reservation = None
        self.instret = 0

    def copy_from(self, other):
        self.x = list(other.x)
        self.f = list(other.f)
        self.pc = other.pc
        self.priv = other.priv
        self.reservation = other.reservation
        self.instret = other.instret
        for name in CsrFile.__slots__:
            setattr(self.csr, name, getattr(other.csr, name))


class StepResult:
    __slots__ = ("inst", "trap")

    def __init__(self, inst, trap):
        self.inst = inst
        self.trap = trap


class StepEnv:
    """Pure-oracle execution environment; lockstep overrides the hooks."""

    def __init__(self, fpu_full=False):
        self.decoder = Decoder(fpu_full)

    # Volatile counter CSRs: in pure-oracle mode they count instructions.
    def read_cycle(self, state):
        return state.instret

    def read_instret(self, state):
        return state.instret

    def read_time(self, state):
        return state.instret

    def read_mip(self, state):
        return state.csr.mip

    def fetch(self, state, mem):
        return fetch_insn(state, mem, self)

    def load(self, state, mem, paddr, width):
        return mem.read(paddr, width)

    def store(self, state, mem, paddr, width, value):
        mem.write(paddr, width, value)

    def amo(self, state, mem, paddr, width, fn, operand):
        old = mem.read(paddr, width)
        mem.write(paddr, width, amo_apply(fn, old, operand, width))
        return old

    def sc(self, state, mem, paddr, width, value):
        ok = state.reservation is not None and state.reservation == paddr & ~63
        if ok:
            mem.write(paddr, width, value)
        return ok

    def read_pte(self, state, mem, paddr):
        return mem.read(paddr, 8)


def translate_addr(state, mem, env, vaddr, access, fetch_priv=None):
    """Resolve effective privilege/SUM/MXR and run the Sv39 walk."""
    vaddr = to_u64(vaddr)
    mstatus = state.csr.mstatus
    if access == ACCESS_FETCH:
        priv = state.priv if fetch_priv is None else fetch_priv
    elif mstatus & MST_MPRV:
        priv = (mstatus & MST_MPP) >> MST_MPP_SHIFT
    else:
        priv = state.priv
    try:
        return translate(lambda pa: env.read_pte(state, mem, pa), state.csr.satp,
                         priv, bool(mstatus & MST_SUM), bool(mstatus & MST_MXR),
                         vaddr, access)
    except PageFault as pf:
        raise TrapException(TrapInfo(_PAGEFAULT_CAUSE[pf.access], pf.vaddr)) from None
    except AccessFault:
        raise TrapException(TrapInfo(_ACCESSFAULT_CAUSE[access], vaddr)) from None


def fetch_insn(state, mem, env):
    """Fetch one 16/32-bit instruction at state.pc, translating per halfword
    so page-straddling fetches fault with the right address."""
    pc = state.pc
    try:
        low = mem.read(translate_addr(state, mem, env, pc, ACCESS_FETCH), 2)
    except AccessFault:
        raise TrapException(TrapInfo(EXC_INST_ACCESS, pc)) from None
    if low & 3 != 3:
        return low
    try:
        high = mem.read(translate_addr(state, mem, env, pc + 2, ACCESS_FETCH), 2)
    except AccessFault:
        raise TrapException(TrapInfo(EXC_INST_ACCESS, to_u64(pc + 2))) from None
    return low | (high << 16)


def _load(state, mem, env, vaddr, width, signed):
    if vaddr & (width - 1):
        raise TrapException(TrapInfo(EXC_LOAD_MISALIGNED, to_u64(vaddr)))
    paddr = translate_addr(state, mem, env, vaddr, ACCESS_LOAD)
    try:
        value = env.load(state, mem, paddr, width)
    except AccessFault:
        raise TrapException(TrapInfo(EXC_LOAD_ACCESS, to_u64(vaddr))) from None
    return sext(8 * width, value) if signed else value


def _store(state, mem, env, vaddr, width, value):
    if vaddr & (width - 1):
        raise TrapException(TrapInfo(EXC_STORE_MISALIGNED, to_u64(vaddr)))
    paddr = translate_addr(state, mem, env, vaddr, ACCESS_STORE)
    try:
        env.store(state, mem, paddr, width, value & ((1 << (8 * width)) - 1))
    except AccessFault:
        raise TrapException(TrapInfo(EXC_STORE_ACCESS, to_u64(vaddr))) from None


def _require_fp(state):
    if state.csr.mstatus & MST_FS == 0:
        return False
    return True


def _set_fs_dirty(state):
    state.csr.mstatus |= MST_FS


def csr_access(state, op, csr, operand, env, write=None):
    """Execute one CSR instruction: returns (old_value, side_effect_tags).

    `operand` is the rs1 value for register forms or the zimm for immediate
    forms. `write` forces/suppresses the write half (CSRRS/CSRRC with rs1=x0
    must not write even though the OR/AND-NOT would be a no-op anyway; the
    caller knows the register index). Raises IllegalInstruction on
    privilege/implementation violations.
    """
    if write is None:
        write = True if op in ("csrrw", "csrrwi") else operand != 0
    if (csr >> 8) & 3 > state.priv:
        raise IllegalInstruction(csr)
    if write and csr >> 10 == 3:
        raise IllegalInstruction(csr)
    if csr in (CYCLE, TIME, INSTRET) and not counter_accessible(state, csr):
        raise IllegalInstruction(csr)
    try:
        old = csr_read(state, csr, env)
    except KeyError:
        raise IllegalInstruction(csr) from None
    side = ()
    if write:
        if op in ("csrrw", "csrrwi"):
            new = operand
        elif op in ("csrrs", "csrrsi"):
            new = old | operand
        else:
            new = old & ~operand
        try:
            side = csr_write(state, csr, new, env)
        except KeyError:
            raise IllegalInstruction(csr) from None
    return old, side


def take_trap(state, trap, epc):
    """Architectural trap entry: delegation, privilege stack, vectoring."""
    c = state.csr
    cause = trap.cause
    deleg = c.mideleg if trap.is_interrupt else c.medeleg
    if state.priv != PRIV_M and (deleg >> cause) & 1:
        c.scause = cause | (1 << 63 if trap.is_interrupt else 0)
        c.sepc = to_u64(epc) & ~1
        c.stval = to_u64(trap.tval)
        mst = c.mstatus
        spie = MST_SPIE if mst & MST_SIE else 0
        spp = MST_SPP if state.priv == PRIV_S else 0
        c.mstatus = (mst & ~(MST_SPIE | MST_SIE | MST_SPP)) | spie | spp
        state.priv = PRIV_S
        tvec = c.stvec
    else:
        c.mcause = cause | (1 << 63 if trap.is_interrupt else 0)
        c.mepc = to_u64(epc) & ~1
        c.mtval = to_u64(trap.tval)
        mst = c.mstatus
        mpie = MST_MPIE if mst & MST_MIE else 0
        c.mstatus = (mst & ~(MST_MPIE | MST_MIE | MST_MPP)) | mpie | (state.priv << MST_MPP_SHIFT)
        state.priv = PRIV_M
        tvec = c.mtvec
    base = tvec & ~3
    if tvec & 3 == 1 and trap.is_interrupt:
        state.pc = to_u64(base + 4 * cause)
    else:
        state.pc = base


# Interrupt priority within each target level.
_IRQ_PRIORITY = (11, 3, 7, 9, 1, 5)


def pending_interrupt(state, mip):
    """Highest-priority interrupt to take given mip, or None."""
    pend = mip & state.csr.mie
    if not pend:
        return None
    mideleg = state.csr.mideleg
    mst = state.csr.mstatus
    m_pend = pend & ~mideleg
    if m_pend and (state.priv < PRIV_M or mst & MST_MIE):
        for code in _IRQ_PRIORITY:
            if (m_pend >> code) & 1:
                return TrapInfo(code, 0, is_interrupt=True)
    s_pend = pend & mideleg
    if s_pend and (state.priv < PRIV_S or (state.priv == PRIV_S and mst & MST_SIE)):
        for code in _IRQ_PRIORITY:
            if (s_pend >> code) & 1:
                return TrapInfo(code, 0, is_interrupt=True)
    return None


def _exec_mem(state, inst, mem, env, op):
    x = state.x
    if op == "lb" or op == "lh" or op == "lw" or op == "ld":
        v = _load(state, mem, env, x[inst.rs1] + inst.imm, inst.width, True)
        if inst.rd:
            x[inst.rd] = v
        return
    if op == "lbu" or op == "lhu" or op == "lwu":
        v = _load(state, mem, env, x[inst.rs1] + inst.imm, inst.width, False)
        if inst.rd:
            x[inst.rd] = v
        return
    if op == "sb" or op == "sh" or op == "sw" or op == "sd":
        _store(state, mem, env, x[inst.rs1] + inst.imm, inst.width, to_u64(x[inst.rs2]))
        return
    if op == "flw" or op == "fld":
        if not _require_fp(state):
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        v = _load(state, mem, env, x[inst.rs1] + inst.imm, inst.width, False)
        state.f[inst.rd] = (NANBOX | v) if inst.width == 4 else v
        _set_fs_dirty(state)
        return
    if op == "fsw" or op == "fsd":
        if not _require_fp(state):
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        v = state.f[inst.rs2] & (0xFFFFFFFF if inst.width == 4 else to_u64(-1))
        _store(state, mem, env, x[inst.rs1] + inst.imm, inst.width, v)
        return
    # AMO / LR / SC: naturally-aligned addresses only.
    vaddr = x[inst.rs1]
    width = inst.width
    if op.startswith("lr"):
        if vaddr & (width - 1):
            raise TrapException(TrapInfo(EXC_LOAD_MISALIGNED, to_u64(vaddr)))
        paddr = translate_addr(state, mem, env, vaddr, ACCESS_LOAD)
        try:
            v = env.load(state, mem, paddr, width)
        except AccessFault:
            raise TrapException(TrapInfo(EXC_LOAD_ACCESS, to_u64(vaddr))) from None
        state.reservation = paddr & ~63
        if inst.rd:
            x[inst.rd] = sext(8 * width, v)
        return
    if op.startswith("sc"):
        if vaddr & (width - 1):
            raise TrapException(TrapInfo(EXC_STORE_MISALIGNED, to_u64(vaddr)))
        paddr = translate_addr(state, mem, env, vaddr, ACCESS_STORE)
        try:
            ok = env.sc(state, mem, paddr, width, to_u64(x[inst.rs2]) & ((1 << (8 * width)) - 1))
        except AccessFault:
            raise TrapException(TrapInfo(EXC_STORE_ACCESS, to_u64(vaddr))) from None
        state.reservation = None
        if inst.rd:
            x[inst.rd] = 0 if ok else 1
        return
    # AMOs.
    if vaddr & (width - 1):
        raise TrapException(TrapInfo(EXC_STORE_MISALIGNED, to_u64(vaddr)))
    paddr = translate_addr(state, mem, env, vaddr, ACCESS_STORE)
    try:
        old = env.amo(state, mem, paddr, width, AMO_FN[op], to_u64(x[inst.rs2]))
    except AccessFault:
        raise TrapException(TrapInfo(EXC_STORE_ACCESS, to_u64(vaddr))) from None
    if inst.rd:
        x[inst.rd] = sext(8 * width, old)


def _exec_system(state, inst, mem, env, op, pc):
    c = state.csr
    if op[0] == "c":  # csrr*
        if op in ("csrrw", "csrrs", "csrrc"):
            operand = to_u64(state.x[inst.rs1])
            write = True if op == "csrrw" else inst.rs1 != 0
        else:
            operand = inst.rs1
            write = True if op == "csrrwi" else inst.rs1 != 0
        try:
            old, _side = csr_access(state, op, inst.imm, operand, env, write)
        except IllegalInstruction:
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw)) from None
        if inst.rd:
            state.x[inst.rd] = to_s64(old)
        state.pc = to_u64(pc + inst.length)
        return
    if op == "ecall":
        raise TrapException(TrapInfo({PRIV_U: EXC_ECALL_U, PRIV_S: EXC_ECALL_S,
                                      PRIV_M: EXC_ECALL_M}[state.priv], 0))
    if op == "ebreak":
        raise TrapException(TrapInfo(EXC_BREAKPOINT, pc))
    if op == "mret":
        if state.priv != PRIV_M:
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        mst = c.mstatus
        new_priv = (mst & MST_MPP) >> MST_MPP_SHIFT
        mst = (mst & ~MST_MIE) | (MST_MIE if mst & MST_MPIE else 0)
        mst |= MST_MPIE
        mst &= ~MST_MPP
        if new_priv != PRIV_M:
            mst &= ~MST_MPRV
        c.mstatus = mst
        state.priv = new_priv
        state.pc = c.mepc
        return
    if op == "sret":
        if state.priv == PRIV_U:
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        mst = c.mstatus
        new_priv = PRIV_S if mst & MST_SPP else PRIV_U
        mst = (mst & ~MST_SIE) | (MST_SIE if mst & MST_SPIE else 0)
        mst |= MST_SPIE
        mst &= ~MST_SPP
        mst &= ~MST_MPRV
        c.mstatus = mst
        state.priv = new_priv
        state.pc = c.sepc
        return
    if op == "wfi":
        if state.priv == PRIV_U:
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        state.pc = to_u64(pc + inst.length)
        return
    if op == "sfence_vma":
        if state.priv == PRIV_U:
            raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
        state.pc = to_u64(pc + inst.length)
        return
    if op in ("fence", "fence_i"):
        state.pc = to_u64(pc + inst.length)
        return
    raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))


def _exec_fpmove(state, inst, op):
    if not _require_fp(state):
        raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))
    x, f = state.x, state.f
    if op == "fmv_x_w":
        if inst.rd:
            x[inst.rd] = sext(32, f[inst.rs1])
    elif op == "fmv_w_x":
        f[inst.rd] = NANBOX | (to_u64(x[inst.rs1]) & 0xFFFFFFFF)
        _set_fs_dirty(state)
    elif op == "fmv_x_d":
        if inst.rd:
            x[inst.rd] = to_s64(f[inst.rs1])
    elif op == "fmv_d_x":
        f[inst.rd] = to_u64(x[inst.rs1])
        _set_fs_dirty(state)
    else:
        from . import fp
        fp.execute(state, inst, op)


def execute(state, inst, mem, env, pc):
    """Apply one decoded instruction's semantics. pc is the instruction's own
    address; updates state.pc. Raises TrapException for exceptions."""
    op = inst.op
    unit = inst.unit
    x = state.x
    if unit == "alu":
        if op == "lui":
            if inst.rd:
                x[inst.rd] = inst.imm
        elif op == "auipc":
            if inst.rd:
                x[inst.rd] = to_s64(pc + inst.imm)
        else:
            b = inst.imm if op in _IMM_OPS else x[inst.rs2]
            v = alu_result(op, x[inst.rs1], b)
            if inst.rd:
                x[inst.rd] = v
        state.pc = to_u64(pc + inst.length)
        return
    if unit == "branch":
        if op == "jal":
            target = to_u64(pc + inst.imm)
            if inst.rd:
                x[inst.rd] = to_s64(pc + inst.length)
            state.pc = target
        elif op == "jalr":
            target = to_u64(x[inst.rs1] + inst.imm) & ~1
            if inst.rd:
                x[inst.rd] = to_s64(pc + inst.length)
            state.pc = target
        else:
            if branch_taken(op, x[inst.rs1], x[inst.rs2]):
                state.pc = to_u64(pc + inst.imm)
            else:
                state.pc = to_u64(pc + inst.length)
        return
    if unit == "mem":
        _exec_mem(state, inst, mem, env, op)
        state.pc = to_u64(pc + inst.length)
        return
    if unit == "muldiv":
        v = alu_result(op, x[inst.rs1], x[inst.rs2])
        if inst.rd:
            x[inst.rd] = v
        state.pc = to_u64(pc + inst.length)
        return
    if unit == "system":
        _exec_system(state, inst, mem, env, op, pc)
        return
    if unit == "fpmove":
        _exec_fpmove(state, inst, op)
        state.pc = to_u64(pc + inst.length)
        return
    raise TrapException(TrapInfo(EXC_ILLEGAL, inst.raw))


def step(state, mem, env):
    """Execute exactly one instruction or take one exception.

    Deterministic and total: every architectural exception is converted into
    a trap entry and reflected in the returned StepResult.
    """
    pc = state.pc
    inst = None
    try:
        raw = env.fetch(state, mem)
        try:
            inst = env.decoder.decode(raw)
        except IllegalInstruction:
            raise TrapException(TrapInfo(EXC_ILLEGAL, raw & 0xFFFFFFFF)) from None
        execute(state, inst, mem, env, pc)
    except TrapException as te:
        take_trap(state, te.trap, pc)
        return StepResult(inst, te.trap)
    state.instret += 1
    return StepResult(inst, None)
