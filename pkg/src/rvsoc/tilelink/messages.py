"""TileLink message model and static conformance rules.

Numeric opcode/param encodings follow the TileLink 1.8 specification. The bus
carries 8 bytes per beat; data-bearing messages wider than one beat occupy
consecutive beats with constant header fields (interleaving is prohibited by
construction in the link layer).
"""

BEAT_BYTES = 8
BEAT_SHIFT = 3

TL_UL = 0
TL_UH = 1
TL_C = 2

LEVEL_NAMES = {TL_UL: "TL-UL", TL_UH: "TL-UH", TL_C: "TL-C"}


class ChanA:
    PutFullData = 0
    PutPartialData = 1
    ArithmeticData = 2
    LogicalData = 3
    Get = 4
    Intent = 5
    AcquireBlock = 6
    AcquirePerm = 7


class ChanB:
    Probe = 6


class ChanC:
    AccessAck = 0
    AccessAckData = 1
    HintAck = 2
    ProbeAck = 4
    ProbeAckData = 5
    Release = 6
    ReleaseData = 7


class ChanD:
    AccessAck = 0
    AccessAckData = 1
    HintAck = 2
    Grant = 4
    GrantData = 5
    ReleaseAck = 6


# Permission-transition parameters.
GROW_NTOB = 0
GROW_NTOT = 1
GROW_BTOT = 2
CAP_TOT = 0
CAP_TOB = 1
CAP_TON = 2
PRUNE_TTOB = 0
PRUNE_TTON = 1
PRUNE_BTON = 2
REPORT_TTOT = 3
REPORT_BTOB = 4
REPORT_NTON = 5

# Arithmetic/logical atomic params.
ARITH_MIN = 0
ARITH_MAX = 1
ARITH_MINU = 2
ARITH_MAXU = 3
ARITH_ADD = 4
LOGIC_XOR = 0
LOGIC_OR = 1
LOGIC_AND = 2
LOGIC_SWAP = 3

ARITH_FN = {ARITH_MIN: "min", ARITH_MAX: "max", ARITH_MINU: "minu",
            ARITH_MAXU: "maxu", ARITH_ADD: "add"}
LOGIC_FN = {LOGIC_XOR: "xor", LOGIC_OR: "or", LOGIC_AND: "and", LOGIC_SWAP: "swap"}

# Cached-block permission states.
PERM_NONE = 0
PERM_BRANCH = 1
PERM_TRUNK = 2

GROW_FROM = {GROW_NTOB: PERM_NONE, GROW_NTOT: PERM_NONE, GROW_BTOT: PERM_BRANCH}
GROW_WANT = {GROW_NTOB: PERM_BRANCH, GROW_NTOT: PERM_TRUNK, GROW_BTOT: PERM_TRUNK}
CAP_TO = {CAP_TOT: PERM_TRUNK, CAP_TOB: PERM_BRANCH, CAP_TON: PERM_NONE}
PRUNE_FROM = {PRUNE_TTOB: PERM_TRUNK, PRUNE_TTON: PERM_TRUNK, PRUNE_BTON: PERM_BRANCH,
              REPORT_TTOT: PERM_TRUNK, REPORT_BTOB: PERM_BRANCH, REPORT_NTON: PERM_NONE}
PRUNE_TO = {PRUNE_TTOB: PERM_BRANCH, PRUNE_TTON: PERM_NONE, PRUNE_BTON: PERM_NONE,
            REPORT_TTOT: PERM_TRUNK, REPORT_BTOB: PERM_BRANCH, REPORT_NTON: PERM_NONE}

_A_NAMES = {0: "PutFullData", 1: "PutPartialData", 2: "ArithmeticData", 3: "LogicalData",
            4: "Get", 5: "Intent", 6: "AcquireBlock", 7: "AcquirePerm"}
_B_NAMES = {6: "Probe"}
_C_NAMES = {0: "AccessAck", 1: "AccessAckData", 2: "HintAck", 4: "ProbeAck",
            5: "ProbeAckData", 6: "Release", 7: "ReleaseData"}
_D_NAMES = {0: "AccessAck", 1: "AccessAckData", 2: "HintAck", 4: "Grant",
            5: "GrantData", 6: "ReleaseAck"}

OPCODE_NAMES = {"A": _A_NAMES, "B": _B_NAMES, "C": _C_NAMES, "D": _D_NAMES,
                "E": {0: "GrantAck"}}

# (channel, opcode) -> minimum conformance level.
_LEVEL_OF = {
    ("A", ChanA.PutFullData): TL_UL,
    ("A", ChanA.PutPartialData): TL_UL,
    ("A", ChanA.Get): TL_UL,
    ("A", ChanA.ArithmeticData): TL_UH,
    ("A", ChanA.LogicalData): TL_UH,
    ("A", ChanA.Intent): TL_UH,
    ("A", ChanA.AcquireBlock): TL_C,
    ("A", ChanA.AcquirePerm): TL_C,
    ("B", ChanB.Probe): TL_C,
    ("C", ChanC.ProbeAck): TL_C,
    ("C", ChanC.ProbeAckData): TL_C,
    ("C", ChanC.Release): TL_C,
    ("C", ChanC.ReleaseData): TL_C,
    ("D", ChanD.AccessAck): TL_UL,
    ("D", ChanD.AccessAckData): TL_UL,
    ("D", ChanD.HintAck): TL_UH,
    ("D", ChanD.Grant): TL_C,
    ("D", ChanD.GrantData): TL_C,
    ("D", ChanD.ReleaseAck): TL_C,
    ("E", 0): TL_C,
}

# Data-bearing (channel, opcode) pairs.
_HAS_DATA = {
    ("A", ChanA.PutFullData), ("A", ChanA.PutPartialData),
    ("A", ChanA.ArithmeticData), ("A", ChanA.LogicalData),
    ("C", ChanC.ProbeAckData), ("C", ChanC.ReleaseData),
    ("D", ChanD.AccessAckData), ("D", ChanD.GrantData),
}

_PARAM_MAX = {
    ("A", ChanA.PutFullData): 0, ("A", ChanA.PutPartialData): 0,
    ("A", ChanA.Get): 0, ("A", ChanA.ArithmeticData): 4,
    ("A", ChanA.LogicalData): 3, ("A", ChanA.Intent): 1,
    ("A", ChanA.AcquireBlock): 2, ("A", ChanA.AcquirePerm): 2,
    ("B", ChanB.Probe): 2,
    ("C", ChanC.ProbeAck): 5, ("C", ChanC.ProbeAckData): 5,
    ("C", ChanC.Release): 5, ("C", ChanC.ReleaseData): 5,
    ("D", ChanD.AccessAck): 0, ("D", ChanD.AccessAckData): 0,
    ("D", ChanD.HintAck): 0, ("D", ChanD.Grant): 2,
    ("D", ChanD.GrantData): 2, ("D", ChanD.ReleaseAck): 0,
    ("E", 0): 0,
}


class Violation:
    """One broken protocol rule, identified by a stable rule id."""

    __slots__ = ("rule", "message", "cycle", "link")

    def __init__(self, rule, message, cycle=None, link=None):
        self.rule = rule
        self.message = message
        self.cycle = cycle
        self.link = link

    def __repr__(self):
        where = f" link={self.link} cycle={self.cycle}" if self.link is not None else ""
        return f"Violation({self.rule}:{where} {self.message})"


class TlMessage:
    """One TileLink message (all beats of one A-E transfer)."""

    __slots__ = ("channel", "opcode", "param", "size", "source", "sink",
                 "address", "mask", "data", "corrupt", "denied")

    def __init__(self, channel, opcode, param=0, size=0, source=0, sink=0,
                 address=0, mask=None, data=None, corrupt=False, denied=False):
        self.channel = channel
        self.opcode = opcode
        self.param = param
        self.size = size
        self.source = source
        self.sink = sink
        self.address = address
        self.mask = lanes_mask(address, size) if mask is None else mask
        self.data = data
        self.corrupt = corrupt
        self.denied = denied

    @property
    def opname(self):
        return OPCODE_NAMES[self.channel].get(self.opcode, f"op{self.opcode}")

    def has_data(self):
        return (self.channel, self.opcode) in _HAS_DATA

    def __repr__(self):
        return (f"TlMessage({self.channel}.{self.opname} param={self.param} "
                f"size={self.size} src={self.source} sink={self.sink} "
                f"addr={self.address:#x})")


def lanes_mask(address, size):
    """Active byte lanes within one beat for an access of 2^size bytes."""
    if size >= BEAT_SHIFT:
        return (1 << BEAT_BYTES) - 1
    nbytes = 1 << size
    return ((1 << nbytes) - 1) << (address & (BEAT_BYTES - 1))


def beats_of(msg):
    """Number of wire beats this message occupies."""
    if msg.has_data() and msg.size > BEAT_SHIFT:
        return 1 << (msg.size - BEAT_SHIFT)
    return 1


def data_opcode(channel, opcode):
    return (channel, opcode) in _HAS_DATA


def conformance_check(msg, level, max_size=6):
    """Static legality of one message at a conformance level.

    Returns None when legal, else a Violation naming the broken rule.
    """
    key = (msg.channel, msg.opcode)
    need = _LEVEL_OF.get(key)
    if need is None:
        return Violation("opcode", f"unknown opcode {msg.opcode} on channel {msg.channel}")
    if need > level:
        return Violation("level", f"{msg.channel}.{msg.opname} needs {LEVEL_NAMES[need]} "
                                  f"on a {LEVEL_NAMES[level]} link")
    if msg.size > max_size:
        return Violation("size", f"size {msg.size} exceeds link maximum {max_size}")
    if msg.address & ((1 << msg.size) - 1):
        return Violation("alignment", f"address {msg.address:#x} not aligned to 2^{msg.size}")
    if not 0 <= msg.param <= _PARAM_MAX[key]:
        return Violation("param", f"param {msg.param} out of range for {msg.opname}")
    if msg.channel == "A":
        full = lanes_mask(msg.address, msg.size)
        if msg.opcode == ChanA.PutPartialData:
            if msg.mask & ~full:
                return Violation("mask", "PutPartialData mask outside active lanes")
        elif msg.mask != full:
            return Violation("mask", f"mask {msg.mask:#x} must be the active lanes {full:#x}")
    if msg.has_data():
        want = 1 << msg.size
        if msg.data is None or len(msg.data) != max(want, 0):
            got = 0 if msg.data is None else len(msg.data)
            return Violation("beats", f"{msg.opname} carries {got} data bytes, wants {want}")
    elif msg.data is not None:
        return Violation("beats", f"{msg.opname} must not carry data")
    if msg.denied and msg.has_data() and not msg.corrupt:
        return Violation("denied-corrupt", "denied response with data must set corrupt")
    return None
