"""Functional RV64 architectural model: decode, execution semantics,
privilege/CSR system, traps, and Sv39 translation."""

from .amo import amo_apply
from .bits import sext, to_s64, to_u64, zext
from .csr import PRIV_M, PRIV_S, PRIV_U, CsrFile
from .decode import ALU, BRANCH, FPMOVE, MEM, MULDIV, SYSTEM, DecodedInst, Decoder, \
    IllegalInstruction, decode32, expand16
from .hart import (HartState, StepEnv, StepResult, TrapException, TrapInfo,
                   csr_access, fetch_insn, pending_interrupt, step, take_trap,
                   translate_addr)
from .mmu import ACCESS_FETCH, ACCESS_LOAD, ACCESS_STORE, AccessFault, PageFault, translate

__all__ = [
    "ALU", "BRANCH", "FPMOVE", "MEM", "MULDIV", "SYSTEM",
    "ACCESS_FETCH", "ACCESS_LOAD", "ACCESS_STORE",
    "AccessFault", "CsrFile", "DecodedInst", "Decoder", "HartState",
    "IllegalInstruction", "PageFault", "PRIV_M", "PRIV_S", "PRIV_U",
    "StepEnv", "StepResult", "TrapException", "TrapInfo",
    "amo_apply", "csr_access", "decode32", "expand16", "fetch_insn",
    "pending_interrupt", "sext", "step", "take_trap", "to_s64", "to_u64",
    "translate", "translate_addr", "zext",
]
