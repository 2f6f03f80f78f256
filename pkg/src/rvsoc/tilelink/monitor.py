"""TileLink assertion monitor.

Observes messages in acceptance order on each link and checks transaction
legality: request/response pairing, source and sink lifetime rules, probe
recursion, and the static conformance rules. Violations are recorded and the
monitor keeps going, so one run reports everything it saw.

An offline mode replays a beat-level trace file (the `TL` lines emitted by
the link layer), reassembles messages, and applies the same rules.
"""

from .messages import (BEAT_BYTES, ChanA, ChanC, ChanD, GROW_BTOT, GROW_NTOT,
                       CAP_TOT, TlMessage, Violation, beats_of,
                       conformance_check, data_opcode)

_ACK_OF = {
    ChanD.AccessAck: (ChanA.PutFullData, ChanA.PutPartialData),
    ChanD.AccessAckData: (ChanA.Get, ChanA.ArithmeticData, ChanA.LogicalData),
    ChanD.HintAck: (ChanA.Intent,),
    ChanD.Grant: (ChanA.AcquireBlock, ChanA.AcquirePerm),
    ChanD.GrantData: (ChanA.AcquireBlock, ChanA.AcquirePerm),
}


class _LinkState:
    __slots__ = ("out_a", "out_c", "probes", "grants")

    def __init__(self):
        self.out_a = {}   # source -> A request
        self.out_c = {}   # source -> C release
        self.probes = {}  # block address -> B probe
        self.grants = {}  # sink -> (source, address)


class Monitor:
    """Assertion monitor for any number of links at one conformance level."""

    def __init__(self, level, block_log2=6, coverage=None, max_size=6):
        self.level = level
        self.block_log2 = block_log2
        self.coverage = coverage
        self.max_size = max_size
        self.violations = []
        self.messages = 0
        self._links = {}

    def attach(self, link):
        link.on_message.append(self.observe)
        self._links.setdefault(link.name, _LinkState())
        return link

    def _flag(self, rule, message, cycle, link):
        self.violations.append(Violation(rule, message, cycle, link))

    def observe(self, link, cycle, msg):
        """Check one accepted message; records zero or more violations."""
        name = link.name if hasattr(link, "name") else str(link)
        st = self._links.setdefault(name, _LinkState())
        self.messages += 1
        v = conformance_check(msg, self.level, self.max_size)
        if v is not None:
            self._flag(v.rule, v.message, cycle, name)
        ctx = {}
        ch = msg.channel
        if ch == "A":
            self._on_a(st, cycle, name, msg, ctx)
        elif ch == "B":
            self._on_b(st, cycle, name, msg, ctx)
        elif ch == "C":
            self._on_c(st, cycle, name, msg, ctx)
        elif ch == "D":
            self._on_d(st, cycle, name, msg, ctx)
        elif ch == "E":
            self._on_e(st, cycle, name, msg, ctx)
        if self.coverage is not None:
            self.coverage.record(msg, ctx)

    # -- per-channel rules -------------------------------------------------

    def _on_a(self, st, cycle, name, msg, ctx):
        if msg.source in st.out_a or msg.source in st.out_c:
            self._flag("source-reuse",
                       f"source {msg.source} already has an outstanding request",
                       cycle, name)
        if msg.opcode in (ChanA.AcquireBlock, ChanA.AcquirePerm):
            if msg.size != self.block_log2:
                self._flag("acquire-size",
                           f"Acquire size {msg.size} != block size {self.block_log2}",
                           cycle, name)
        st.out_a[msg.source] = msg

    def _on_b(self, st, cycle, name, msg, ctx):
        block = msg.address
        for sink, (_src, addr) in st.grants.items():
            if addr == block:
                self._flag("probe-during-grant",
                           f"Probe to block {block:#x} with un-acked Grant (sink {sink})",
                           cycle, name)
        if block in st.probes:
            self._flag("probe-dup", f"duplicate outstanding Probe to {block:#x}",
                       cycle, name)
        if msg.size != self.block_log2:
            self._flag("probe-size", f"Probe size {msg.size} != block size", cycle, name)
        for req in st.out_a.values():
            if req.opcode in (ChanA.AcquireBlock, ChanA.AcquirePerm) \
                    and req.address >> self.block_log2 == block >> self.block_log2:
                ctx["ab_race"] = True
        st.probes[block] = msg

    def _on_c(self, st, cycle, name, msg, ctx):
        if msg.opcode in (ChanC.ProbeAck, ChanC.ProbeAckData):
            probe = st.probes.pop(msg.address, None)
            if probe is None:
                self._flag("orphan-probeack",
                           f"ProbeAck for {msg.address:#x} without outstanding Probe",
                           cycle, name)
            ctx["probe_dirty"] = msg.opcode == ChanC.ProbeAckData
        elif msg.opcode in (ChanC.Release, ChanC.ReleaseData):
            if msg.source in st.out_c or msg.source in st.out_a:
                self._flag("source-reuse",
                           f"source {msg.source} already has an outstanding request",
                           cycle, name)
            if msg.size != self.block_log2:
                self._flag("release-size",
                           f"Release size {msg.size} != block size", cycle, name)
            st.out_c[msg.source] = msg
        else:
            self._flag("opcode", f"unexpected C opcode {msg.opcode}", cycle, name)

    def _on_d(self, st, cycle, name, msg, ctx):
        if msg.opcode == ChanD.ReleaseAck:
            req = st.out_c.pop(msg.source, None)
            if req is None:
                self._flag("orphan-response",
                           f"ReleaseAck for idle source {msg.source}", cycle, name)
            elif msg.size != req.size:
                self._flag("size-echo",
                           f"ReleaseAck size {msg.size} != request size {req.size}",
                           cycle, name)
            return
        req = st.out_a.get(msg.source)
        if req is None:
            self._flag("orphan-response",
                       f"{msg.opname} for idle source {msg.source}", cycle, name)
            return
        want = _ACK_OF.get(msg.opcode)
        if want is None or req.opcode not in want:
            self._flag("pairing",
                       f"{msg.opname} answers A.{req.opname}", cycle, name)
        if msg.size != req.size:
            self._flag("size-echo",
                       f"response size {msg.size} != request size {req.size}",
                       cycle, name)
        if msg.opcode in (ChanD.Grant, ChanD.GrantData):
            if req.param in (GROW_NTOT, GROW_BTOT) and msg.param != CAP_TOT \
                    and not msg.denied:
                self._flag("grant-param",
                           f"Acquire wanted Trunk, Grant capped to {msg.param}",
                           cycle, name)
            if msg.sink in st.grants:
                self._flag("sink-reuse",
                           f"sink {msg.sink} reused before GrantAck", cycle, name)
            st.grants[msg.sink] = (msg.source, req.address)
            ctx["grant_denied"] = msg.denied
        del st.out_a[msg.source]

    def _on_e(self, st, cycle, name, msg, ctx):
        if st.grants.pop(msg.sink, None) is None:
            self._flag("orphan-grantack",
                       f"GrantAck for idle sink {msg.sink}", cycle, name)

    # -- end-of-run and offline checks --------------------------------------

    def check_quiescent(self, cycle=None):
        """At end of run: nothing may be left outstanding."""
        for name, st in self._links.items():
            for src in st.out_a:
                self._flag("liveness", f"A source {src} never answered", cycle, name)
            for src in st.out_c:
                self._flag("liveness", f"Release source {src} never answered", cycle, name)
            for addr in st.probes:
                self._flag("liveness", f"Probe to {addr:#x} never acked", cycle, name)
            for sink in st.grants:
                self._flag("liveness", f"Grant sink {sink} never acked", cycle, name)

    def replay_trace(self, lines):
        """Offline mode: feed `TL`-prefixed beat lines in file order.

        Reassembles multi-beat messages (checking contiguity and constant
        header fields) and applies the live rule set.
        """
        pending = {}  # (link, channel) -> [first fields, data bytearray, beats left]
        for line in lines:
            parts = line.split()
            if not parts or parts[0] != "TL":
                continue
            cycle, name, chan = int(parts[1], 16), parts[2], parts[3]
            opcode, param, size, source, sink, addr, mask = \
                (int(p, 16) for p in parts[4:11])
            data = int(parts[11], 16).to_bytes(BEAT_BYTES, "little")
            key = (name, chan)
            header = (opcode, param, size, source, sink, addr)
            if key in pending:
                first, buf, left = pending[key]
                if header[:5] != first[:5]:
                    self._flag("beat-interleave",
                               f"header changed mid-message on {name}.{chan}",
                               cycle, name)
                buf += data
                left -= 1
                if left:
                    pending[key] = (first, buf, left)
                    continue
                del pending[key]
                opcode, param, size, source, sink, addr = first
                msg = TlMessage(chan, opcode, param, size, source, sink, addr,
                                mask, bytes(buf))
            else:
                if data_opcode(chan, opcode) and size > 3:
                    pending[key] = (header, bytearray(data), (1 << (size - 3)) - 1)
                    continue
                payload = data[:1 << size] if data_opcode(chan, opcode) else None
                msg = TlMessage(chan, opcode, param, size, source, sink, addr,
                                mask, payload)
            fake = type("L", (), {"name": name})()
            self.observe(fake, cycle, msg)
        for (name, chan), _ in pending.items():
            self._flag("beat-short", f"truncated message on {name}.{chan}", None, name)
