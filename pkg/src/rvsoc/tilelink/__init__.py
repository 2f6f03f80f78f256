"""TileLink protocol substrate: channels A-E message types for TL-UL/UH/C,
permission algebra, links with valid-ready beat timing, and the verification
trio (assertion monitor, functional coverage, random traffic generator)."""

from .messages import (CAP_TOB, CAP_TON, CAP_TOT, GROW_BTOT, GROW_NTOB,
                       GROW_NTOT, PERM_BRANCH, PERM_NONE, PERM_TRUNK,
                       PRUNE_BTON, PRUNE_TTOB, PRUNE_TTON, REPORT_BTOB,
                       REPORT_NTON, REPORT_TTOT, TL_C, TL_UH, TL_UL,
                       ChanA, ChanB, ChanC, ChanD, TlMessage, Violation,
                       beats_of, conformance_check, data_opcode, lanes_mask)
from .link import Channel, Link
from .monitor import Monitor
from .coverage import Coverage

__all__ = [
    "CAP_TOB", "CAP_TON", "CAP_TOT", "ChanA", "ChanB", "ChanC", "ChanD",
    "Channel", "Coverage", "GROW_BTOT", "GROW_NTOB", "GROW_NTOT", "Link",
    "Monitor", "PERM_BRANCH", "PERM_NONE", "PERM_TRUNK", "PRUNE_BTON",
    "PRUNE_TTOB", "PRUNE_TTON", "REPORT_BTOB", "REPORT_NTON", "REPORT_TTOT",
    "TL_C", "TL_UH", "TL_UL", "TlMessage", "Violation", "beats_of",
    "conformance_check", "data_opcode", "lanes_mask",
]
