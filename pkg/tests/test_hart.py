"""Functional hart tests: step semantics, traps, delegation, CSRs, NaN-boxing."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rvsoc.isa import (PRIV_M, PRIV_S, PRIV_U, HartState, IllegalInstruction,
                       StepEnv, TrapInfo, csr_access, pending_interrupt, step,
                       take_trap, to_u64)
from rvsoc.isa.csr import (MEDELEG, MEPC, MIDELEG, MISA, MISA_VALUE, MCYCLE,
                           MST_FS, MSTATUS, MTVEC, SATP, STVEC, MST_MPP_SHIFT)
from rvsoc.isa.hart import EXC_ECALL_U, EXC_ILLEGAL

from conftest import ToyMem

BASE = 0x8000_0000


def make_hart(words, pc=BASE, mem=None):
    mem = mem or ToyMem()
    addr = BASE
    for w in words:
        if w <= 0xFFFF and w & 3 != 3:
            mem.write(addr, 2, w)
            addr += 2
        else:
            mem.write(addr, 4, w)
            addr += 4
    state = HartState(pc=pc)
    return state, mem, StepEnv()


def test_addi_advances_pc_and_writes_rd():
    state, mem, env = make_hart([0x00500093])  # addi x1, x0, 5
    res = step(state, mem, env)
    assert res.trap is None
    assert state.x[1] == 5
    assert state.pc == BASE + 4


def test_x0_is_invariant():
    state, mem, env = make_hart([0x00500013, 0x00000013])  # addi x0, x0, 5
    step(state, mem, env)
    assert state.x[0] == 0


def test_ecall_delegated_to_smode():
    state, mem, env = make_hart([0x00000073])  # ecall
    state.priv = PRIV_U
    state.csr.medeleg = 1 << EXC_ECALL_U
    state.csr.stvec = 0x8000_1000
    res = step(state, mem, env)
    assert res.trap is not None and res.trap.cause == EXC_ECALL_U
    assert state.priv == PRIV_S
    assert state.csr.scause == EXC_ECALL_U
    assert state.csr.sepc == BASE
    assert state.pc == 0x8000_1000


def test_ecall_from_m_not_delegatable():
    state, mem, env = make_hart([0x00000073])
    state.csr.medeleg = 0xFFFF
    state.csr.mtvec = 0x8000_2000
    step(state, mem, env)
    assert state.priv == PRIV_M
    assert state.csr.mcause == 11
    assert state.pc == 0x8000_2000


def test_fp_compute_traps_illegal_with_raw_in_mtval():
    state, mem, env = make_hart([0x02B57553])  # fadd.d fa0, fa0, fa1
    state.csr.mstatus |= MST_FS
    state.csr.mtvec = 0x8000_3000
    res = step(state, mem, env)
    assert res.trap is not None and res.trap.cause == EXC_ILLEGAL
    assert state.csr.mtval == 0x02B57553
    assert state.pc == 0x8000_3000


def test_flw_nan_boxes():
    state, mem, env = make_hart([0x0005A087 | (1 << 7)])  # flw f1, 0(a1)
    state.csr.mstatus |= MST_FS
    state.x[11] = BASE + 0x100
    mem.write(BASE + 0x100, 4, 0x3F800000)
    res = step(state, mem, env)
    assert res.trap is None
    assert state.f[1] == 0xFFFFFFFF_3F800000


def test_fp_loadstore_illegal_when_fs_off():
    state, mem, env = make_hart([0x0005A007])  # flw f0, 0(a1)
    state.x[11] = BASE
    state.csr.mstatus &= ~MST_FS
    res = step(state, mem, env)
    assert res.trap is not None and res.trap.cause == EXC_ILLEGAL


def test_misaligned_load_traps():
    state, mem, env = make_hart([0x0005B283])  # ld t0, 0(a1)
    state.x[11] = BASE + 3
    res = step(state, mem, env)
    assert res.trap is not None and res.trap.cause == 4
    assert state.csr.mtval == BASE + 3


def test_lr_sc_pair_succeeds_locally():
    # lr.d t0, (a0); sc.d t1, t2, (a0)
    state, mem, env = make_hart([0x100532AF, 0x1875332F])
    state.x[10] = BASE + 0x200
    state.x[7] = 77
    mem.write(BASE + 0x200, 8, 11)
    step(state, mem, env)
    assert state.x[5] == 11
    step(state, mem, env)
    assert state.x[6] == 0
    assert mem.read(BASE + 0x200, 8) == 77


def test_sc_without_reservation_fails():
    state, mem, env = make_hart([0x1875B32F])  # sc.d t1, t2, (a1)... rs1=a1
    state.x[11] = BASE + 0x200
    mem.write(BASE + 0x200, 8, 5)
    step(state, mem, env)
    assert state.x[6] == 1
    assert mem.read(BASE + 0x200, 8) == 5


def test_csr_mcycle_read_in_m_mode():
    state, mem, env = make_hart([])
    state.instret = 42
    old, side = csr_access(state, "csrrs", MCYCLE, 0, env, write=False)
    assert old == 42 and side == ()


def test_csr_satp_write_in_u_mode_illegal():
    state, mem, env = make_hart([])
    state.priv = PRIV_U
    with pytest.raises(IllegalInstruction):
        csr_access(state, "csrrw", SATP, 0, env)


def test_csr_misa_write_ignored():
    state, mem, env = make_hart([])
    old, _ = csr_access(state, "csrrw", MISA, 0, env)
    assert old == MISA_VALUE
    old2, _ = csr_access(state, "csrrs", MISA, 0, env, write=False)
    assert old2 == MISA_VALUE


def test_csr_satp_write_reports_side_effect():
    state, mem, env = make_hart([])
    _, side = csr_access(state, "csrrw", SATP, 8 << 60, env)
    assert "satp" in side
    assert state.csr.satp == 8 << 60


def test_satp_invalid_mode_ignored():
    state, mem, env = make_hart([])
    csr_access(state, "csrrw", SATP, 5 << 60, env)
    assert state.csr.satp == 0


def test_mret_round_trip():
    state, mem, env = make_hart([0x30200073])  # mret
    state.csr.mepc = BASE + 0x40
    state.csr.mstatus |= (PRIV_U << MST_MPP_SHIFT) | (1 << 7)  # MPP=U, MPIE=1
    step(state, mem, env)
    assert state.priv == PRIV_U
    assert state.pc == BASE + 0x40
    assert state.csr.mstatus & (1 << 3)  # MIE restored from MPIE


def test_vectored_interrupt_dispatch():
    state = HartState()
    state.priv = PRIV_S
    state.csr.stvec = 0x8000_4001  # vectored mode
    state.csr.mideleg = 1 << 5
    take_trap(state, TrapInfo(5, 0, is_interrupt=True), 0x8000_0010)
    assert state.pc == 0x8000_4000 + 4 * 5
    assert state.csr.scause == (1 << 63) | 5


def test_interrupt_priority_and_masking():
    state = HartState()
    state.csr.mie = (1 << 7) | (1 << 3) | (1 << 11)
    mip = (1 << 7) | (1 << 3) | (1 << 11)
    # M-mode with MIE=0: nothing taken.
    assert pending_interrupt(state, mip) is None
    state.csr.mstatus |= 1 << 3
    t = pending_interrupt(state, mip)
    assert t.cause == 11  # MEI beats MSI beats MTI
    t = pending_interrupt(state, (1 << 7) | (1 << 3))
    assert t.cause == 3


def test_delegated_interrupt_masked_in_m():
    state = HartState()
    state.csr.mie = 1 << 5
    state.csr.mideleg = 1 << 5
    state.csr.mstatus |= (1 << 3) | (1 << 1)  # MIE, SIE
    assert pending_interrupt(state, 1 << 5) is None  # S-level int masked in M
    state.priv = PRIV_S
    assert pending_interrupt(state, 1 << 5).cause == 5


def test_step_determinism():
    def run():
        state, mem, env = make_hart([0x00500093, 0x00108133, 0x00000073])
        state.csr.mtvec = BASE
        for _ in range(6):
            step(state, mem, env)
        return (tuple(state.x), state.pc, state.csr.mcause)
    assert run() == run()


@given(st.integers(min_value=0, max_value=(1 << 16) - 1))
def test_step_total_on_random_fetch(word):
    """Any fetched pattern yields either execution or a well-formed trap."""
    state, mem, env = make_hart([word if word & 3 != 3 else 0x13])
    state.csr.mtvec = BASE + 0x100
    res = step(state, mem, env)
    assert res.trap is None or isinstance(res.trap, TrapInfo)
    assert state.x[0] == 0
