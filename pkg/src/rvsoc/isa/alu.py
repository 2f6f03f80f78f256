"""Integer ALU / multiply-divide / branch-compare semantics.

Shared by the functional model and the pipeline's execute stage, so both
paths compute with identical arithmetic. Register values are canonical
signed 64-bit Python ints.
"""

from .bits import sext, to_s64, to_u64


def _divtrunc(a, b):
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


_BASE = {
    "add": lambda a, b: to_s64(a + b),
    "sub": lambda a, b: to_s64(a - b),
    "and": lambda a, b: a & b,
    "or": lambda a, b: a | b,
    "xor": lambda a, b: a ^ b,
    "slt": lambda a, b: int(a < b),
    "sltu": lambda a, b: int(to_u64(a) < to_u64(b)),
    "sll": lambda a, b: to_s64(a << (b & 63)),
    "srl": lambda a, b: to_s64(to_u64(a) >> (b & 63)),
    "sra": lambda a, b: a >> (b & 63),
    "addw": lambda a, b: sext(32, a + b),
    "subw": lambda a, b: sext(32, a - b),
    "sllw": lambda a, b: sext(32, a << (b & 31)),
    "srlw": lambda a, b: sext(32, (a & 0xFFFFFFFF) >> (b & 31)),
    "sraw": lambda a, b: sext(32, sext(32, a) >> (b & 31)),
    "mul": lambda a, b: to_s64(a * b),
    "mulh": lambda a, b: to_s64((a * b) >> 64),
    "mulhu": lambda a, b: to_s64((to_u64(a) * to_u64(b)) >> 64),
    "mulhsu": lambda a, b: to_s64((a * to_u64(b)) >> 64),
    "mulw": lambda a, b: sext(32, a * b),
    "div": lambda a, b: to_s64(_divtrunc(a, b)) if b else -1,
    "divu": lambda a, b: to_s64(to_u64(a) // to_u64(b)) if b else -1,
    "rem": lambda a, b: to_s64(a - b * _divtrunc(a, b)) if b else a,
    "remu": lambda a, b: to_s64(to_u64(a) % to_u64(b)) if b else a,
    "divw": lambda a, b: sext(32, _divtrunc(sext(32, a), sext(32, b))) if sext(32, b) else -1,
    "divuw": lambda a, b: sext(32, (a & 0xFFFFFFFF) // (b & 0xFFFFFFFF)) if b & 0xFFFFFFFF else -1,
    "remw": lambda a, b: sext(32, sext(32, a) - sext(32, b) * _divtrunc(sext(32, a), sext(32, b)))
    if sext(32, b) else sext(32, a),
    "remuw": lambda a, b: sext(32, (a & 0xFFFFFFFF) % (b & 0xFFFFFFFF))
    if b & 0xFFFFFFFF else sext(32, a),
}

# Immediate and word-immediate forms share the register-register semantics.
_ALIASES = {
    "addi": "add", "slti": "slt", "sltiu": "sltu", "xori": "xor", "ori": "or",
    "andi": "and", "slli": "sll", "srli": "srl", "srai": "sra",
    "addiw": "addw", "slliw": "sllw", "srliw": "srlw", "sraiw": "sraw",
}

OPS = dict(_BASE)
for _alias, _target in _ALIASES.items():
    OPS[_alias] = _BASE[_target]


def alu_result(op, a, b):
    return OPS[op](a, b)


_CMP = {
    "beq": lambda a, b: a == b,
    "bne": lambda a, b: a != b,
    "blt": lambda a, b: a < b,
    "bge": lambda a, b: a >= b,
    "bltu": lambda a, b: to_u64(a) < to_u64(b),
    "bgeu": lambda a, b: to_u64(a) >= to_u64(b),
}


def branch_taken(op, a, b):
    return _CMP[op](a, b)
