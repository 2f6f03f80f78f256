"""CSR file: implemented registers, WARL legalization, and access checks."""

from .bits import to_u64

# Privilege levels.
PRIV_U = 0
PRIV_S = 1
PRIV_M = 3

# CSR addresses.
FFLAGS = 0x001
FRM = 0x002
FCSR = 0x003
CYCLE = 0xC00
TIME = 0xC01
INSTRET = 0xC02
SSTATUS = 0x100
SIE = 0x104
STVEC = 0x105
SCOUNTEREN = 0x106
SSCRATCH = 0x140
SEPC = 0x141
SCAUSE = 0x142
STVAL = 0x143
SIP = 0x144
SATP = 0x180
MVENDORID = 0xF11
MARCHID = 0xF12
MIMPID = 0xF13
MHARTID = 0xF14
MSTATUS = 0x300
MISA = 0x301
MEDELEG = 0x302
MIDELEG = 0x303
MIE = 0x304
MTVEC = 0x305
MCOUNTEREN = 0x306
MSCRATCH = 0x340
MEPC = 0x341
MCAUSE = 0x342
MTVAL = 0x343
MIP = 0x344
MCYCLE = 0xB00
MINSTRET = 0xB02

# mstatus bit positions.
MST_SIE = 1 << 1
MST_MIE = 1 << 3
MST_SPIE = 1 << 5
MST_MPIE = 1 << 7
MST_SPP = 1 << 8
MST_MPP_SHIFT = 11
MST_MPP = 3 << 11
MST_FS_SHIFT = 13
MST_FS = 3 << 13
MST_MPRV = 1 << 17
MST_SUM = 1 << 18
MST_MXR = 1 << 19
MST_UXL = 2 << 32
MST_SXL = 2 << 34
MST_SD = 1 << 63

_MSTATUS_WMASK = (MST_SIE | MST_MIE | MST_SPIE | MST_MPIE | MST_SPP | MST_MPP
                  | MST_FS | MST_MPRV | MST_SUM | MST_MXR)
_SSTATUS_MASK = MST_SIE | MST_SPIE | MST_SPP | MST_FS | MST_SUM | MST_MXR

# Interrupt bit positions (mip/mie).
IRQ_SSI = 1
IRQ_MSI = 3
IRQ_STI = 5
IRQ_MTI = 7
IRQ_SEI = 9
IRQ_MEI = 11

_MIE_MASK = (1 << IRQ_SSI) | (1 << IRQ_MSI) | (1 << IRQ_STI) | (1 << IRQ_MTI) \
    | (1 << IRQ_SEI) | (1 << IRQ_MEI)
_MIP_WMASK = (1 << IRQ_SSI) | (1 << IRQ_STI) | (1 << IRQ_SEI)
_SIx_MASK = (1 << IRQ_SSI) | (1 << IRQ_STI) | (1 << IRQ_SEI)

# Delegatable exception causes (ecall-from-M, bit 11, is never delegatable).
_MEDELEG_MASK = 0xB3FF
_MIDELEG_MASK = _SIx_MASK

# misa: RV64 IMAFDC + S + U.
MISA_VALUE = (2 << 62) | (1 << 0) | (1 << 2) | (1 << 3) | (1 << 5) | (1 << 8) \
    | (1 << 12) | (1 << 18) | (1 << 20)

_COUNTER_MASK = 0b111  # CY, TM, IR


class CsrFile:
    """Architectural CSR state for one hart.

    Counter CSRs (cycle/instret/time) are served through the owning hart's
    environment so they can mirror the timing model in lockstep or the retired
    instruction count in pure-oracle mode.
    """

    __slots__ = ("mstatus", "medeleg", "mideleg", "mie", "mip", "mtvec", "mepc",
                 "mcause", "mtval", "mscratch", "satp", "stvec", "sepc", "scause",
                 "stval", "sscratch", "mcounteren", "scounteren", "fcsr", "mhartid")

    def __init__(self, hartid=0):
        self.mstatus = MST_UXL | MST_SXL
        self.medeleg = 0
        self.mideleg = 0
        self.mie = 0
        self.mip = 0
        self.mtvec = 0
        self.mepc = 0
        self.mcause = 0
        self.mtval = 0
        self.mscratch = 0
        self.satp = 0
        self.stvec = 0
        self.sepc = 0
        self.scause = 0
        self.stval = 0
        self.sscratch = 0
        self.mcounteren = _COUNTER_MASK
        self.scounteren = _COUNTER_MASK
        self.fcsr = 0
        self.mhartid = hartid

    def mstatus_read(self):
        v = self.mstatus
        if v & MST_FS == MST_FS:
            v |= MST_SD
        return v

    def mstatus_write(self, value):
        mpp = (value & MST_MPP) >> MST_MPP_SHIFT
        if mpp == 2:  # reserved privilege level: WARL, keep old MPP
            value = (value & ~MST_MPP) | (self.mstatus & MST_MPP)
        self.mstatus = (self.mstatus & ~_MSTATUS_WMASK) | (value & _MSTATUS_WMASK)

    def compare_key(self):
        """Tuple of everything lockstep comparison should include (mip is
        device-driven and excluded)."""
        return (self.mstatus, self.medeleg, self.mideleg, self.mie, self.mtvec,
                self.mepc, self.mcause, self.mtval, self.mscratch, self.satp,
                self.stvec, self.sepc, self.scause, self.stval, self.sscratch,
                self.mcounteren, self.scounteren, self.fcsr)


def _tvec_write(old, value):
    if value & 3 > 1:
        return old
    return value & ~2


def csr_read(state, csr, env):
    """Raw CSR read; raises KeyError for unimplemented addresses.

    `state` is a HartState; `env` provides counter values.
    """
    c = state.csr
    if csr == MSTATUS:
        return c.mstatus_read()
    if csr == SSTATUS:
        v = c.mstatus_read() & (_SSTATUS_MASK | MST_UXL | MST_SD)
        return v
    if csr == MISA:
        return MISA_VALUE
    if csr == MEDELEG:
        return c.medeleg
    if csr == MIDELEG:
        return c.mideleg
    if csr == MIE:
        return c.mie
    if csr == SIE:
        return c.mie & c.mideleg
    if csr == MIP:
        return env.read_mip(state)
    if csr == SIP:
        return env.read_mip(state) & c.mideleg
    if csr == MTVEC:
        return c.mtvec
    if csr == STVEC:
        return c.stvec
    if csr == MEPC:
        return c.mepc
    if csr == SEPC:
        return c.sepc
    if csr == MCAUSE:
        return c.mcause
    if csr == SCAUSE:
        return c.scause
    if csr == MTVAL:
        return c.mtval
    if csr == STVAL:
        return c.stval
    if csr == MSCRATCH:
        return c.mscratch
    if csr == SSCRATCH:
        return c.sscratch
    if csr == SATP:
        return c.satp
    if csr == MCOUNTEREN:
        return c.mcounteren
    if csr == SCOUNTEREN:
        return c.scounteren
    if csr in (FCSR, FFLAGS, FRM):
        if c.mstatus & MST_FS == 0:
            raise KeyError(csr)
        if csr == FCSR:
            return c.fcsr
        if csr == FFLAGS:
            return c.fcsr & 0x1F
        return (c.fcsr >> 5) & 7
    if csr in (MCYCLE, CYCLE):
        return env.read_cycle(state)
    if csr in (MINSTRET, INSTRET):
        return env.read_instret(state)
    if csr == TIME:
        return env.read_time(state)
    if csr == MHARTID:
        return c.mhartid
    if csr in (MVENDORID, MARCHID, MIMPID):
        return 0
    raise KeyError(csr)


def csr_write(state, csr, value, env):
    """Raw CSR write with WARL legalization; raises KeyError if unimplemented.

    Returns a set of side-effect tags ("satp" when translation state changed).
    """
    c = state.csr
    value = to_u64(value)
    if csr == MSTATUS:
        c.mstatus_write(value)
        return ()
    if csr == SSTATUS:
        c.mstatus = (c.mstatus & ~_SSTATUS_MASK) | (value & _SSTATUS_MASK)
        return ()
    if csr == MISA:
        return ()  # read-only by choice: writes ignored
    if csr == MEDELEG:
        c.medeleg = value & _MEDELEG_MASK
        return ()
    if csr == MIDELEG:
        c.mideleg = value & _MIDELEG_MASK
        return ()
    if csr == MIE:
        c.mie = value & _MIE_MASK
        return ()
    if csr == SIE:
        c.mie = (c.mie & ~c.mideleg) | (value & c.mideleg & _MIE_MASK)
        return ()
    if csr == MIP:
        c.mip = (c.mip & ~_MIP_WMASK) | (value & _MIP_WMASK)
        return ()
    if csr == SIP:
        wm = (1 << IRQ_SSI) & c.mideleg
        c.mip = (c.mip & ~wm) | (value & wm)
        return ()
    if csr == MTVEC:
        c.mtvec = _tvec_write(c.mtvec, value)
        return ()
    if csr == STVEC:
        c.stvec = _tvec_write(c.stvec, value)
        return ()
    if csr == MEPC:
        c.mepc = value & ~1
        return ()
    if csr == SEPC:
        c.sepc = value & ~1
        return ()
    if csr == MCAUSE:
        c.mcause = value
        return ()
    if csr == SCAUSE:
        c.scause = value
        return ()
    if csr == MTVAL:
        c.mtval = value
        return ()
    if csr == STVAL:
        c.stval = value
        return ()
    if csr == MSCRATCH:
        c.mscratch = value
        return ()
    if csr == SSCRATCH:
        c.sscratch = value
        return ()
    if csr == SATP:
        mode = value >> 60
        if mode not in (0, 8):
            return ()  # WARL: unsupported modes leave satp unchanged
        c.satp = value
        return ("satp",)
    if csr == MCOUNTEREN:
        c.mcounteren = value & _COUNTER_MASK
        return ()
    if csr == SCOUNTEREN:
        c.scounteren = value & _COUNTER_MASK
        return ()
    if csr in (FCSR, FFLAGS, FRM):
        if c.mstatus & MST_FS == 0:
            raise KeyError(csr)
        if csr == FCSR:
            c.fcsr = value & 0xFF
        elif csr == FFLAGS:
            c.fcsr = (c.fcsr & ~0x1F) | (value & 0x1F)
        else:
            c.fcsr = (c.fcsr & 0x1F) | ((value & 7) << 5)
        c.mstatus |= MST_FS
        return ()
    if csr in (MCYCLE, MINSTRET):
        return ()  # counters mirror the driving model: writes ignored
    raise KeyError(csr)


def counter_accessible(state, csr):
    """Check mcounteren/scounteren gating for user-level counter reads."""
    bitpos = {CYCLE: 0, TIME: 1, INSTRET: 2}[csr]
    if state.priv < PRIV_M and not (state.csr.mcounteren >> bitpos) & 1:
        return False
    if state.priv == PRIV_U and not (state.csr.scounteren >> bitpos) & 1:
        return False
    return True
