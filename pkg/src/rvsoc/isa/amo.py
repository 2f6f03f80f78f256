"""Atomic-memory-operation ALU, shared by the functional model and the data
cache (which has its own instance, independent of the backend ALU)."""

from .bits import sext, to_u64


def amo_apply(op, old, operand, width):
    """Compute the new memory value for an AMO.

    `op` is one of swap/add/xor/and/or/min/max/minu/maxu; `old` and `operand`
    are raw unsigned values; for width 4 only the low 32 bits participate and
    a 32-bit result is returned.
    """
    if width == 4:
        old &= 0xFFFFFFFF
        operand &= 0xFFFFFFFF
        bits = 32
        mask = 0xFFFFFFFF
    else:
        old = to_u64(old)
        operand = to_u64(operand)
        bits = 64
        mask = 0xFFFFFFFFFFFFFFFF
    if op == "swap":
        return operand
    if op == "add":
        return (old + operand) & mask
    if op == "xor":
        return old ^ operand
    if op == "and":
        return old & operand
    if op == "or":
        return old | operand
    if op == "min":
        return old if sext(bits, old) <= sext(bits, operand) else operand
    if op == "max":
        return old if sext(bits, old) >= sext(bits, operand) else operand
    if op == "minu":
        return min(old, operand)
    if op == "maxu":
        return max(old, operand)
    raise ValueError(f"unknown AMO op {op!r}")
