"""Small bit-manipulation helpers shared across the ISA model."""

MASK32 = 0xFFFF_FFFF
MASK64 = 0xFFFF_FFFF_FFFF_FFFF


def zext(width, value):
    """Truncate to an unsigned value of the given bit width."""
    return value & ((1 << width) - 1)


def sext(width, value):
    """Truncate to width bits, then sign-extend to a Python int."""
    value &= (1 << width) - 1
    if value & (1 << (width - 1)):
        return value - (1 << width)
    return value


def to_u64(value):
    return value & MASK64


def to_s64(value):
    value &= MASK64
    return value - (1 << 64) if value & (1 << 63) else value


def bit(value, pos):
    return (value >> pos) & 1


def bits(value, hi, lo):
    """Extract value[hi:lo] inclusive, right-aligned."""
    return (value >> lo) & ((1 << (hi - lo + 1)) - 1)
