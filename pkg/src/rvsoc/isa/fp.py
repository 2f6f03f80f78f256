"""Experimental full-FPU execution (config: fpu_full).

Software float semantics implemented with the host's IEEE-754 doubles. Known
limitations, acceptable for the experimental flag: only round-to-nearest-even
is honored for FP arithmetic (int conversions truncate), fused multiply-add is
emulated with two rounded operations, and the inexact/underflow/overflow flags
are not reported (invalid and divide-by-zero are). The default build does not
decode these opcodes at all; firmware traps and emulates instead.
"""

import math
import struct

from .bits import sext, to_s64, to_u64
from .csr import MST_FS

F32_QNAN = 0x7FC00000
F64_QNAN = 0x7FF8000000000000
NANBOX = 0xFFFFFFFF_00000000

FLAG_NV = 0x10
FLAG_DZ = 0x08


def _unbox32(bits):
    if bits & NANBOX != NANBOX:
        return F32_QNAN
    return bits & 0xFFFFFFFF


def _f32_to_float(bits):
    return struct.unpack("<f", struct.pack("<I", bits))[0]


def _float_to_f32(value):
    try:
        return struct.unpack("<I", struct.pack("<f", value))[0]
    except OverflowError:
        return 0x7F800000 if value > 0 else 0xFF800000


def _f64_to_float(bits):
    return struct.unpack("<d", struct.pack("<Q", bits))[0]


def _float_to_f64(value):
    return struct.unpack("<Q", struct.pack("<d", value))[0]


def _is_nan32(bits):
    return (bits & 0x7F800000) == 0x7F800000 and bits & 0x7FFFFF


def _is_nan64(bits):
    return (bits & 0x7FF0000000000000) == 0x7FF0000000000000 and bits & 0xFFFFFFFFFFFFF


def _is_snan32(bits):
    return _is_nan32(bits) and not bits & 0x400000


def _is_snan64(bits):
    return _is_nan64(bits) and not bits & 0x8000000000000


def _classify(sign, exp_zero, exp_max, mantissa, quiet_nan, signaling):
    if exp_max and mantissa:
        return 1 << (9 if quiet_nan else 8)
    if exp_max:
        return 1 << (7 if not sign else 0)
    if exp_zero and mantissa == 0:
        return 1 << (4 if not sign else 3)
    if exp_zero:
        return 1 << (5 if not sign else 2)
    return 1 << (6 if not sign else 1)


def execute(state, inst, op):
    """Dispatch one FP compute opclass; mutates state."""
    handler = _DISPATCH.get(op)
    if handler is None:
        raise NotImplementedError(op)
    handler(state, inst)
    state.csr.mstatus |= MST_FS


def _set_flags(state, flags):
    if flags:
        state.csr.fcsr |= flags


def _rd_f32(state, rd, value, flags=0):
    state.f[rd] = NANBOX | value
    _set_flags(state, flags)


def _rd_f64(state, rd, value, flags=0):
    state.f[rd] = value
    _set_flags(state, flags)


def _arith32(fn):
    def run(state, inst):
        a = _unbox32(state.f[inst.rs1])
        b = _unbox32(state.f[inst.rs2])
        if _is_nan32(a) or _is_nan32(b):
            flags = FLAG_NV if _is_snan32(a) or _is_snan32(b) else 0
            _rd_f32(state, inst.rd, F32_QNAN, flags)
            return
        try:
            r = fn(_f32_to_float(a), _f32_to_float(b))
            bits = _float_to_f32(r)
        except ZeroDivisionError:
            sign = (a ^ b) & 0x80000000
            if a & 0x7FFFFFFF == 0:  # 0/0
                _rd_f32(state, inst.rd, F32_QNAN, FLAG_NV)
                return
            _rd_f32(state, inst.rd, sign | 0x7F800000, FLAG_DZ)
            return
        except ValueError:
            _rd_f32(state, inst.rd, F32_QNAN, FLAG_NV)
            return
        if math.isnan(r):
            bits = F32_QNAN
        _rd_f32(state, inst.rd, bits)
    return run


def _arith64(fn):
    def run(state, inst):
        a = state.f[inst.rs1]
        b = state.f[inst.rs2]
        if _is_nan64(a) or _is_nan64(b):
            flags = FLAG_NV if _is_snan64(a) or _is_snan64(b) else 0
            _rd_f64(state, inst.rd, F64_QNAN, flags)
            return
        try:
            r = fn(_f64_to_float(a), _f64_to_float(b))
            bits = _float_to_f64(r)
        except ZeroDivisionError:
            sign = (a ^ b) & (1 << 63)
            if a & ~(1 << 63) == 0:
                _rd_f64(state, inst.rd, F64_QNAN, FLAG_NV)
                return
            _rd_f64(state, inst.rd, sign | 0x7FF0000000000000, FLAG_DZ)
            return
        except (ValueError, OverflowError):
            _rd_f64(state, inst.rd, F64_QNAN, FLAG_NV)
            return
        if math.isnan(r):
            bits = F64_QNAN
        _rd_f64(state, inst.rd, bits)
    return run


def _sgnj(single, mode):
    def run(state, inst):
        if single:
            a = _unbox32(state.f[inst.rs1])
            b = _unbox32(state.f[inst.rs2])
            sign_bit = 0x80000000
        else:
            a = state.f[inst.rs1]
            b = state.f[inst.rs2]
            sign_bit = 1 << 63
        if mode == "j":
            sign = b & sign_bit
        elif mode == "jn":
            sign = ~b & sign_bit
        else:
            sign = (a ^ b) & sign_bit
        r = (a & ~sign_bit) | sign
        if single:
            _rd_f32(state, inst.rd, r)
        else:
            _rd_f64(state, inst.rd, r)
    return run


def _minmax(single, is_min):
    def run(state, inst):
        if single:
            a, b = _unbox32(state.f[inst.rs1]), _unbox32(state.f[inst.rs2])
            nan_a, nan_b = _is_nan32(a), _is_nan32(b)
            qnan = F32_QNAN
            snan = _is_snan32(a) or _is_snan32(b)
        else:
            a, b = state.f[inst.rs1], state.f[inst.rs2]
            nan_a, nan_b = _is_nan64(a), _is_nan64(b)
            qnan = F64_QNAN
            snan = _is_snan64(a) or _is_snan64(b)
        flags = FLAG_NV if snan else 0
        if nan_a and nan_b:
            r = qnan
        elif nan_a:
            r = b
        elif nan_b:
            r = a
        else:
            fa = _f32_to_float(a) if single else _f64_to_float(a)
            fb = _f32_to_float(b) if single else _f64_to_float(b)
            if fa == fb:  # -0.0 vs +0.0
                sign_bit = 0x80000000 if single else 1 << 63
                neg = a | b if is_min else a & b
                r = (a & ~sign_bit) | (neg & sign_bit)
            elif (fa < fb) == is_min:
                r = a
            else:
                r = b
        if single:
            _rd_f32(state, inst.rd, r, flags)
        else:
            _rd_f64(state, inst.rd, r, flags)
    return run


def _compare(single, mode):
    def run(state, inst):
        if single:
            a, b = _unbox32(state.f[inst.rs1]), _unbox32(state.f[inst.rs2])
            nan = _is_nan32(a) or _is_nan32(b)
            signaling_nan = _is_snan32(a) or _is_snan32(b)
        else:
            a, b = state.f[inst.rs1], state.f[inst.rs2]
            nan = _is_nan64(a) or _is_nan64(b)
            signaling_nan = _is_snan64(a) or _is_snan64(b)
        if nan:
            flags = FLAG_NV if (mode != "eq" or signaling_nan) else 0
            _set_flags(state, flags)
            if inst.rd:
                state.x[inst.rd] = 0
            return
        fa = _f32_to_float(a) if single else _f64_to_float(a)
        fb = _f32_to_float(b) if single else _f64_to_float(b)
        r = {"eq": fa == fb, "lt": fa < fb, "le": fa <= fb}[mode]
        if inst.rd:
            state.x[inst.rd] = int(r)
    return run


def _fclass(single):
    def run(state, inst):
        if single:
            bits = _unbox32(state.f[inst.rs1])
            sign = bits >> 31
            exp = (bits >> 23) & 0xFF
            mant = bits & 0x7FFFFF
            r = _classify(sign, exp == 0, exp == 0xFF, mant, bool(bits & 0x400000), True)
        else:
            bits = state.f[inst.rs1]
            sign = bits >> 63
            exp = (bits >> 52) & 0x7FF
            mant = bits & 0xFFFFFFFFFFFFF
            r = _classify(sign, exp == 0, exp == 0x7FF, mant, bool(bits & 0x8000000000000), True)
        if inst.rd:
            state.x[inst.rd] = r
    return run


def _to_int(single, bits_out, signed):
    lo = -(1 << (bits_out - 1)) if signed else 0
    hi = (1 << (bits_out - 1)) - 1 if signed else (1 << bits_out) - 1

    def run(state, inst):
        raw = _unbox32(state.f[inst.rs1]) if single else state.f[inst.rs1]
        nan = _is_nan32(raw) if single else _is_nan64(raw)
        if nan:
            r, flags = hi, FLAG_NV
        else:
            v = _f32_to_float(raw) if single else _f64_to_float(raw)
            if math.isinf(v):
                r, flags = (hi if v > 0 else lo), FLAG_NV
            else:
                t = math.trunc(v)
                if t < lo:
                    r, flags = lo, FLAG_NV
                elif t > hi:
                    r, flags = hi, FLAG_NV
                else:
                    r, flags = t, 0
        _set_flags(state, flags)
        if inst.rd:
            state.x[inst.rd] = sext(32, r) if bits_out == 32 else to_s64(r)
    return run


def _from_int(single, bits_in, signed):
    def run(state, inst):
        v = state.x[inst.rs1]
        if bits_in == 32:
            v = sext(32, v) if signed else v & 0xFFFFFFFF
        elif not signed:
            v = to_u64(v)
        if single:
            _rd_f32(state, inst.rd, _float_to_f32(float(v)))
        else:
            _rd_f64(state, inst.rd, _float_to_f64(float(v)))
    return run


def _cvt_s_d(state, inst):
    bits = state.f[inst.rs1]
    if _is_nan64(bits):
        _rd_f32(state, inst.rd, F32_QNAN, FLAG_NV if _is_snan64(bits) else 0)
        return
    _rd_f32(state, inst.rd, _float_to_f32(_f64_to_float(bits)))


def _cvt_d_s(state, inst):
    bits = _unbox32(state.f[inst.rs1])
    if _is_nan32(bits):
        _rd_f64(state, inst.rd, F64_QNAN, FLAG_NV if _is_snan32(bits) else 0)
        return
    _rd_f64(state, inst.rd, _float_to_f64(_f32_to_float(bits)))


def _fma(single, negate_product, negate_addend):
    def run(state, inst):
        rs3 = inst.imm
        if single:
            vals = [_unbox32(state.f[r]) for r in (inst.rs1, inst.rs2, rs3)]
            if any(_is_nan32(v) for v in vals):
                _rd_f32(state, inst.rd, F32_QNAN)
                return
            a, b, c = (_f32_to_float(v) for v in vals)
        else:
            vals = [state.f[r] for r in (inst.rs1, inst.rs2, rs3)]
            if any(_is_nan64(v) for v in vals):
                _rd_f64(state, inst.rd, F64_QNAN)
                return
            a, b, c = (_f64_to_float(v) for v in vals)
        prod = a * b
        if negate_product:
            prod = -prod
        r = prod + (-c if negate_addend else c)
        if math.isnan(r):
            if single:
                _rd_f32(state, inst.rd, F32_QNAN, FLAG_NV)
            else:
                _rd_f64(state, inst.rd, F64_QNAN, FLAG_NV)
            return
        if single:
            _rd_f32(state, inst.rd, _float_to_f32(r))
        else:
            _rd_f64(state, inst.rd, _float_to_f64(r))
    return run


def _sqrt32(state, inst):
    a = _unbox32(state.f[inst.rs1])
    if _is_nan32(a) or (_f32_to_float(a) < 0):
        _rd_f32(state, inst.rd, F32_QNAN, FLAG_NV if not _is_nan32(a) or _is_snan32(a) else 0)
        return
    _rd_f32(state, inst.rd, _float_to_f32(math.sqrt(_f32_to_float(a))))


def _sqrt64(state, inst):
    a = state.f[inst.rs1]
    if _is_nan64(a) or (_f64_to_float(a) < 0):
        _rd_f64(state, inst.rd, F64_QNAN, FLAG_NV if not _is_nan64(a) or _is_snan64(a) else 0)
        return
    _rd_f64(state, inst.rd, _float_to_f64(math.sqrt(_f64_to_float(a))))


_DISPATCH = {
    "fadd_s": _arith32(lambda a, b: a + b),
    "fsub_s": _arith32(lambda a, b: a - b),
    "fmul_s": _arith32(lambda a, b: a * b),
    "fdiv_s": _arith32(lambda a, b: a / b),
    "fadd_d": _arith64(lambda a, b: a + b),
    "fsub_d": _arith64(lambda a, b: a - b),
    "fmul_d": _arith64(lambda a, b: a * b),
    "fdiv_d": _arith64(lambda a, b: a / b),
    "fsqrt_s": _sqrt32,
    "fsqrt_d": _sqrt64,
    "fsgnj_s": _sgnj(True, "j"), "fsgnjn_s": _sgnj(True, "jn"), "fsgnjx_s": _sgnj(True, "jx"),
    "fsgnj_d": _sgnj(False, "j"), "fsgnjn_d": _sgnj(False, "jn"), "fsgnjx_d": _sgnj(False, "jx"),
    "fmin_s": _minmax(True, True), "fmax_s": _minmax(True, False),
    "fmin_d": _minmax(False, True), "fmax_d": _minmax(False, False),
    "feq_s": _compare(True, "eq"), "flt_s": _compare(True, "lt"), "fle_s": _compare(True, "le"),
    "feq_d": _compare(False, "eq"), "flt_d": _compare(False, "lt"), "fle_d": _compare(False, "le"),
    "fclass_s": _fclass(True), "fclass_d": _fclass(False),
    "fcvt_w_s": _to_int(True, 32, True), "fcvt_wu_s": _to_int(True, 32, False),
    "fcvt_l_s": _to_int(True, 64, True), "fcvt_lu_s": _to_int(True, 64, False),
    "fcvt_w_d": _to_int(False, 32, True), "fcvt_wu_d": _to_int(False, 32, False),
    "fcvt_l_d": _to_int(False, 64, True), "fcvt_lu_d": _to_int(False, 64, False),
    "fcvt_s_w": _from_int(True, 32, True), "fcvt_s_wu": _from_int(True, 32, False),
    "fcvt_s_l": _from_int(True, 64, True), "fcvt_s_lu": _from_int(True, 64, False),
    "fcvt_d_w": _from_int(False, 32, True), "fcvt_d_wu": _from_int(False, 32, False),
    "fcvt_d_l": _from_int(False, 64, True), "fcvt_d_lu": _from_int(False, 64, False),
    "fcvt_s_d": _cvt_s_d, "fcvt_d_s": _cvt_d_s,
    "fmadd_s": _fma(True, False, False), "fmsub_s": _fma(True, False, True),
    "fnmsub_s": _fma(True, True, False), "fnmadd_s": _fma(True, True, True),
    "fmadd_d": _fma(False, False, False), "fmsub_d": _fma(False, False, True),
    "fnmsub_d": _fma(False, True, False), "fnmadd_d": _fma(False, True, True),
}
