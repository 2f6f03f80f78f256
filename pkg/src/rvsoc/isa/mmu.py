"""Sv39 address translation: a pure three-level page-table walk."""

from .csr import PRIV_M, PRIV_S, PRIV_U

PHYS_BITS = 56
PHYS_MASK = (1 << PHYS_BITS) - 1

ACCESS_FETCH = 0
ACCESS_LOAD = 1
ACCESS_STORE = 2

PTE_V = 1 << 0
PTE_R = 1 << 1
PTE_W = 1 << 2
PTE_X = 1 << 3
PTE_U = 1 << 4
PTE_G = 1 << 5
PTE_A = 1 << 6
PTE_D = 1 << 7


class PageFault(Exception):
    def __init__(self, access, vaddr):
        super().__init__(f"page fault ({('fetch', 'load', 'store')[access]}) at {vaddr:#x}")
        self.access = access
        self.vaddr = vaddr


class AccessFault(Exception):
    def __init__(self, access, addr):
        super().__init__(f"access fault ({('fetch', 'load', 'store')[access]}) at {addr:#x}")
        self.access = access
        self.addr = addr


def pte_permits(pte, access, priv, sum_, mxr):
    """Leaf-PTE permission check (R/W/X/U against access type and privilege)."""
    if priv == PRIV_U and not pte & PTE_U:
        return False
    if pte & PTE_U and priv == PRIV_S:
        if access == ACCESS_FETCH or not sum_:
            return False
    if access == ACCESS_FETCH:
        return bool(pte & PTE_X)
    if access == ACCESS_LOAD:
        return bool(pte & PTE_R) or (mxr and bool(pte & PTE_X))
    return bool(pte & PTE_W)


def translate(read_pte, satp, priv, sum_, mxr, vaddr, access):
    """Translate vaddr to a 56-bit physical address.

    `read_pte(paddr) -> int` supplies 8-byte page-table entries. `priv` is the
    caller-resolved effective privilege. Raises PageFault; A=0 (or D=0 on a
    store) faults rather than performing a hardware A/D update.
    """
    if priv == PRIV_M or satp >> 60 == 0:
        return vaddr & PHYS_MASK
    # Canonical check: bits 63:39 must replicate bit 38.
    upper = vaddr >> 38
    if upper != 0 and upper != 0x3FF_FFFF:
        raise PageFault(access, vaddr)
    root = ((satp >> 0) & ((1 << 44) - 1)) << 12
    vpn = ((vaddr >> 30) & 0x1FF, (vaddr >> 21) & 0x1FF, (vaddr >> 12) & 0x1FF)
    a = root
    for level in range(3):
        pte = read_pte(a + vpn[level] * 8)
        if not pte & PTE_V or (not pte & PTE_R and pte & PTE_W):
            raise PageFault(access, vaddr)
        if pte & (PTE_R | PTE_X):
            ppn = (pte >> 10) & ((1 << 44) - 1)
            if level == 0 and ppn & 0x3FFFF:
                raise PageFault(access, vaddr)  # misaligned gigapage
            if level == 1 and ppn & 0x1FF:
                raise PageFault(access, vaddr)  # misaligned megapage
            if not pte_permits(pte, access, priv, sum_, mxr):
                raise PageFault(access, vaddr)
            if not pte & PTE_A or (access == ACCESS_STORE and not pte & PTE_D):
                raise PageFault(access, vaddr)
            page_bits = 12 + 9 * (2 - level)
            pa = (ppn << 12) & ~((1 << page_bits) - 1) | (vaddr & ((1 << page_bits) - 1))
            return pa & PHYS_MASK
        a = ((pte >> 10) & ((1 << 44) - 1)) << 12
    raise PageFault(access, vaddr)


def walk_entry(read_pte, satp, vaddr):
    """Return (pte, level) of the leaf mapping vaddr, without permission
    checks; None when the walk dead-ends. Used by the TLB fill path."""
    root = ((satp >> 0) & ((1 << 44) - 1)) << 12
    vpn = ((vaddr >> 30) & 0x1FF, (vaddr >> 21) & 0x1FF, (vaddr >> 12) & 0x1FF)
    a = root
    for level in range(3):
        pte = read_pte(a + vpn[level] * 8)
        if not pte & PTE_V or (not pte & PTE_R and pte & PTE_W):
            return None
        if pte & (PTE_R | PTE_X):
            return pte, level
        a = ((pte >> 10) & ((1 << 44) - 1)) << 12
    return None
