"""TileLink substrate tests: conformance, monitor rule corpus, coverage,
endpoint and adapter behavior."""

import pytest

from rvsoc.tilelink import (Coverage, Link, Monitor, TL_C, TL_UH, TL_UL,
                            TlMessage, conformance_check)
from rvsoc.tilelink.adapter import CachedToUncached
from rvsoc.tilelink.endpoint import MemoryEndpoint, RangeStore
from rvsoc.tilelink.messages import (ARITH_ADD, CAP_TOB, CAP_TOT, ChanA, ChanB,
                                     ChanC, ChanD, GROW_NTOB, GROW_NTOT,
                                     beats_of, lanes_mask)

BASE = 0x8000_0000


def msg_a(opcode, addr=BASE, size=3, source=0, param=0, data=None, mask=None):
    return TlMessage("A", opcode, param=param, size=size, source=source,
                     address=addr, data=data, mask=mask)


# -- conformance --------------------------------------------------------------

def test_aligned_get_ok():
    m = msg_a(ChanA.Get, addr=0x1008, size=3)
    assert conformance_check(m, TL_UL) is None


def test_acquire_on_uh_level_violation():
    m = msg_a(ChanA.AcquireBlock, size=6)
    v = conformance_check(m, TL_UH)
    assert v is not None and v.rule == "level"


def test_putfull_misaligned_violation():
    m = msg_a(ChanA.PutFullData, addr=0x1002, size=2, data=bytes(4),
              mask=lanes_mask(0x1002, 2))
    v = conformance_check(m, TL_UL)
    assert v is not None and v.rule == "alignment"


def test_level_monotonicity():
    """Anything legal at TL-UL stays legal at TL-UH and TL-C."""
    candidates = [
        msg_a(ChanA.Get, size=s, addr=BASE) for s in range(4)
    ] + [
        msg_a(ChanA.PutFullData, size=3, data=bytes(8)),
        TlMessage("D", ChanD.AccessAck, size=3, source=1),
        TlMessage("D", ChanD.AccessAckData, size=3, source=1, data=bytes(8)),
    ]
    for m in candidates:
        if conformance_check(m, TL_UL) is None:
            assert conformance_check(m, TL_UH) is None
            assert conformance_check(m, TL_C) is None


def test_beats_of_block_message():
    m = msg_a(ChanA.PutFullData, size=6, data=bytes(64))
    assert beats_of(m) == 8
    assert beats_of(msg_a(ChanA.Get, size=6)) == 1  # no data beats on Get


# -- monitor rule corpus -------------------------------------------------------
# Each scripted trace must trigger exactly its intended rule and nothing else.

def fresh_monitor(level=TL_C):
    mon = Monitor(level, block_log2=6)
    link = Link("L0")
    mon.attach(link)
    return mon, link


def feed(mon, link, *msgs):
    for i, m in enumerate(msgs):
        mon.observe(link, i, m)


def rules_of(mon):
    return {v.rule for v in mon.violations}


GET = msg_a(ChanA.Get, size=3, source=1)
ACKD = TlMessage("D", ChanD.AccessAckData, size=3, source=1, data=bytes(8))


def test_trace_legal_get_ack_no_violation():
    mon, link = fresh_monitor()
    feed(mon, link, GET, ACKD)
    assert mon.violations == []


ILLEGAL_TRACES = {
    "level": lambda: (TL_UH, [msg_a(ChanA.AcquireBlock, size=6, param=GROW_NTOT)]),
    "alignment": lambda: (TL_UL, [msg_a(ChanA.Get, addr=BASE + 4, size=3)]),
    "mask": lambda: (TL_UL, [msg_a(ChanA.Get, size=3, mask=0x0F)]),
    "param": lambda: (TL_C, [TlMessage("B", ChanB.Probe, param=5, size=6, address=BASE)]),
    "beats": lambda: (TL_UL, [msg_a(ChanA.PutFullData, size=4, data=bytes(8))]),
    "denied-corrupt": lambda: (TL_UL, [
        msg_a(ChanA.Get, size=3, source=1),
        TlMessage("D", ChanD.AccessAckData, size=3, source=1, data=bytes(8), denied=True),
    ]),
    "source-reuse": lambda: (TL_UL, [
        msg_a(ChanA.Get, size=3, source=1),
        msg_a(ChanA.Get, addr=BASE + 64, size=3, source=1),
    ]),
    "orphan-response": lambda: (TL_UL, [
        TlMessage("D", ChanD.AccessAckData, size=3, source=7, data=bytes(8)),
    ]),
    "pairing": lambda: (TL_UL, [
        msg_a(ChanA.Get, size=3, source=1),
        TlMessage("D", ChanD.AccessAck, size=3, source=1),
    ]),
    "size-echo": lambda: (TL_UL, [
        msg_a(ChanA.Get, size=3, source=1),
        TlMessage("D", ChanD.AccessAckData, size=2, source=1, data=bytes(4)),
    ]),
    "sink-reuse": lambda: (TL_C, [
        msg_a(ChanA.AcquireBlock, size=6, source=1, param=GROW_NTOB),
        msg_a(ChanA.AcquireBlock, addr=BASE + 64, size=6, source=2, param=GROW_NTOB),
        TlMessage("D", ChanD.Grant, param=CAP_TOB, size=6, source=1, sink=4),
        TlMessage("D", ChanD.Grant, param=CAP_TOB, size=6, source=2, sink=4),
    ]),
    "orphan-grantack": lambda: (TL_C, [TlMessage("E", 0, sink=9)]),
    "probe-during-grant": lambda: (TL_C, [
        msg_a(ChanA.AcquireBlock, size=6, source=1, param=GROW_NTOB),
        TlMessage("D", ChanD.Grant, param=CAP_TOB, size=6, source=1, sink=0),
        TlMessage("B", ChanB.Probe, param=2, size=6, address=BASE),
    ]),
    "orphan-probeack": lambda: (TL_C, [
        TlMessage("C", ChanC.ProbeAck, param=5, size=6, address=BASE),
    ]),
    "probe-dup": lambda: (TL_C, [
        TlMessage("B", ChanB.Probe, param=2, size=6, address=BASE),
        TlMessage("B", ChanB.Probe, param=2, size=6, address=BASE),
    ]),
    "acquire-size": lambda: (TL_C, [
        msg_a(ChanA.AcquireBlock, size=3, source=1, param=GROW_NTOB),
    ]),
    "grant-param": lambda: (TL_C, [
        msg_a(ChanA.AcquireBlock, size=6, source=1, param=GROW_NTOT),
        TlMessage("D", ChanD.Grant, param=CAP_TOB, size=6, source=1, sink=0),
    ]),
    "release-size": lambda: (TL_C, [
        TlMessage("C", ChanC.Release, param=1, size=3, source=1, address=BASE),
    ]),
    "opcode": lambda: (TL_C, [TlMessage("C", 3, size=6, source=1, address=BASE)]),
    "beat-interleave": None,  # exercised via the offline trace replay below
    "liveness": None,         # exercised via check_quiescent below
}


@pytest.mark.parametrize("rule", [r for r, f in ILLEGAL_TRACES.items() if f])
def test_illegal_trace_triggers_exactly_its_rule(rule):
    level, msgs = ILLEGAL_TRACES[rule]()
    mon = Monitor(level, block_log2=6)
    link = Link("L0")
    mon.attach(link)
    feed(mon, link, *msgs)
    assert rules_of(mon) == {rule}, mon.violations


def test_liveness_rule_on_quiescence_check():
    mon, link = fresh_monitor(TL_UL)
    feed(mon, link, GET)
    mon.check_quiescent()
    assert rules_of(mon) == {"liveness"}


def test_rule_corpus_size():
    """Acceptance wants at least 15 distinct scripted illegal traces."""
    assert len(ILLEGAL_TRACES) >= 15


def test_offline_replay_matches_live_and_detects_interleave():
    lines = [
        "TL 0 L0 A 4 0 3 1 0 80000000 ff 0000000000000000",
        "TL 5 L0 D 1 0 3 1 0 0 ff 00000000deadbeef",
    ]
    mon = Monitor(TL_UL)
    mon.replay_trace(lines)
    assert mon.violations == []
    # A 16-byte put whose second beat changes the source id mid-message.
    lines = [
        "TL 0 L0 A 0 0 4 1 0 80000000 ff 1111111111111111",
        "TL 1 L0 A 0 0 4 2 0 80000000 ff 2222222222222222",
    ]
    mon = Monitor(TL_UL)
    mon.replay_trace(lines)
    assert "beat-interleave" in rules_of(mon)


# -- coverage -----------------------------------------------------------------

def test_coverage_empty_report_all_zero():
    cov = Coverage(TL_C, can_probe=True)
    assert all(v == 0 for v in cov.counts.values())
    assert cov.missing() == sorted(cov.counts)


def test_coverage_counts_acquire():
    cov = Coverage(TL_C, can_probe=True)
    cov.record(msg_a(ChanA.AcquireBlock, size=6, param=GROW_NTOT))
    assert cov.counts["chanop:A.AcquireBlock"] == 1
    assert cov.counts["grow:NtoT"] == 1
    assert cov.counts["size:6"] == 1


def test_coverage_report_text_format():
    cov = Coverage(TL_UL)
    text = cov.report_text()
    for line in text.strip().splitlines():
        point, count = line.rsplit(" ", 1)
        assert point and count == "0"


# -- endpoint -----------------------------------------------------------------

def make_endpoint(latency=2):
    link = Link("M")
    store = RangeStore([(BASE, bytearray(4096))])
    ep = MemoryEndpoint(link, store, latency=latency)
    return link, store, ep


def drive(link, agents, cycles):
    for now in range(cycles):
        for a in agents:
            a.tick(now)


def test_endpoint_read_your_write():
    link, store, ep = make_endpoint()
    link.send(0, msg_a(ChanA.PutFullData, size=3, source=0,
                       data=(0xDEADBEEF).to_bytes(8, "little")))
    done = []
    for now in range(40):
        ep.tick(now)
        d = link.d.take(now)
        if d is not None:
            done.append(d)
            if len(done) == 1:
                link.send(now, msg_a(ChanA.Get, size=3, source=0))
    assert [d.opcode for d in done] == [ChanD.AccessAck, ChanD.AccessAckData]
    assert int.from_bytes(done[1].data, "little") == 0xDEADBEEF


def test_endpoint_amo_returns_old_and_stores_sum():
    link, store, ep = make_endpoint()
    store.write(BASE + 8, (5).to_bytes(8, "little"))
    link.send(0, msg_a(ChanA.ArithmeticData, addr=BASE + 8, size=3, source=1,
                       param=ARITH_ADD, data=(7).to_bytes(8, "little")))
    got = []
    for now in range(40):
        ep.tick(now)
        d = link.d.take(now)
        if d is not None:
            got.append(d)
    assert int.from_bytes(got[0].data, "little") == 5
    assert int.from_bytes(store.read(BASE + 8, 8), "little") == 12


def test_endpoint_unmapped_denied_with_corrupt():
    link, store, ep = make_endpoint()
    mon = Monitor(TL_UH)
    mon.attach(link)
    link.send(0, msg_a(ChanA.Get, addr=0x4000_0000, size=3, source=0))
    got = []
    for now in range(40):
        ep.tick(now)
        d = link.d.take(now)
        if d is not None:
            got.append(d)
    assert got[0].denied and got[0].corrupt
    assert mon.violations == []


def test_endpoint_latency_is_fixed():
    link, _store, ep = make_endpoint(latency=7)
    assert link.send(0, msg_a(ChanA.Get, size=3, source=0))
    seen_at = None
    for now in range(40):
        ep.tick(now)
        if link.d.peek(now) is not None and seen_at is None:
            seen_at = now
    # A-channel transfer + base latency + request beat + D-channel transfer
    assert seen_at == 10


# -- adapter ------------------------------------------------------------------

def make_adapter_stack(latency=1):
    up = Link("UP")
    down = Link("DN")
    store = RangeStore([(BASE, bytearray(4096))])
    ad = CachedToUncached(up, down)
    ep = MemoryEndpoint(down, store, latency=latency)
    return up, down, store, ad, ep


def run_stack(up, agents, to_send, max_cycles=200):
    got = []
    sent = 0
    for now in range(max_cycles):
        if sent < len(to_send):
            if up.send(now, to_send[sent]):
                sent += 1
        for a in agents:
            a.tick(now)
        d = up.d.take(now)
        if d is not None:
            got.append(d)
            if d.opcode in (ChanD.Grant, ChanD.GrantData):
                up.send(now, TlMessage("E", 0, sink=d.sink))
    return got


def test_adapter_acquire_becomes_get_and_grants_trunk():
    up, down, store, ad, ep = make_adapter_stack()
    store.write(BASE, bytes(range(64)))
    downstream = []
    down.on_message.append(lambda l, c, m: downstream.append(m))
    got = run_stack(up, [ad, ep], [
        msg_a(ChanA.AcquireBlock, size=6, source=2, param=GROW_NTOT)])
    assert [m.opname for m in downstream if m.channel == "A"] == ["Get"]
    assert got[0].opcode == ChanD.GrantData and got[0].param == CAP_TOT
    assert got[0].data == bytes(range(64))


def test_adapter_acquire_ntob_grants_branch():
    up, down, store, ad, ep = make_adapter_stack()
    got = run_stack(up, [ad, ep], [
        msg_a(ChanA.AcquireBlock, size=6, source=2, param=GROW_NTOB)])
    assert got[0].param == CAP_TOB


def test_adapter_releasedata_writes_back():
    up, down, store, ad, ep = make_adapter_stack()
    payload = bytes([0xAB] * 64)
    got = run_stack(up, [ad, ep], [
        TlMessage("C", ChanC.ReleaseData, param=1, size=6, source=3,
                  address=BASE + 64, data=payload)])
    assert got[0].opcode == ChanD.ReleaseAck
    assert store.read(BASE + 64, 64) == payload


def test_adapter_uncached_get_passthrough():
    up, down, store, ad, ep = make_adapter_stack()
    store.write(BASE + 16, (0x1234).to_bytes(8, "little"))
    got = run_stack(up, [ad, ep], [msg_a(ChanA.Get, addr=BASE + 16, size=3, source=1)])
    assert got[0].opcode == ChanD.AccessAckData
    assert int.from_bytes(got[0].data, "little") == 0x1234


def test_adapter_under_monitor_is_clean():
    up, down, store, ad, ep = make_adapter_stack()
    mon_up = Monitor(TL_C)
    mon_dn = Monitor(TL_UH)
    mon_up.attach(up)
    mon_dn.attach(down)
    run_stack(up, [ad, ep], [
        msg_a(ChanA.AcquireBlock, size=6, source=0, param=GROW_NTOT),
        TlMessage("C", ChanC.ReleaseData, param=1, size=6, source=2,
                  address=BASE, data=bytes(64)),
        msg_a(ChanA.AcquirePerm, size=6, source=1, param=GROW_NTOT),
    ])
    mon_up.check_quiescent()
    mon_dn.check_quiescent()
    assert mon_up.violations == []
    assert mon_dn.violations == []
