"""Flat-memory TL-UH endpoint: terminates Get/Put/Atomic/Intent traffic.

Replaces a downstream bus bridge with a plain memory model: fixed base
latency plus one cycle per data beat, in-order service, denied (with corrupt
data) for addresses outside the backing ranges.
"""

from collections import deque

from ..isa.amo import amo_apply
from .messages import (ARITH_FN, BEAT_BYTES, ChanA, ChanD, LOGIC_FN, TlMessage,
                       beats_of, lanes_mask)


class RangeStore:
    """Byte-addressable backing store over disjoint (base, bytearray) ranges."""

    def __init__(self, ranges):
        self.ranges = list(ranges)

    def find(self, addr, nbytes):
        for base, data in self.ranges:
            if base <= addr and addr + nbytes <= base + len(data):
                return data, addr - base
        return None, 0

    def read(self, addr, nbytes):
        data, off = self.find(addr, nbytes)
        if data is None:
            return None
        return bytes(data[off:off + nbytes])

    def write(self, addr, payload, mask=None):
        data, off = self.find(addr, len(payload))
        if data is None:
            return False
        if mask is None:
            data[off:off + len(payload)] = payload
        else:
            for i, byte in enumerate(payload):
                if (mask >> i) & 1:
                    data[off + i] = byte
        return True


class MemoryEndpoint:
    """TL-UH slave on one link, serving from a RangeStore."""

    def __init__(self, link, store, latency=20):
        self.link = link
        self.store = store
        self.latency = latency
        self._inflight = deque()  # (ready_cycle, response)
        self._retry = None

    def idle(self):
        return not self._inflight and self._retry is None

    def tick(self, now):
        # Retire due responses (in order; head-of-line blocks on backpressure).
        if self._retry is None and self._inflight and self._inflight[0][0] <= now:
            self._retry = self._inflight.popleft()[1]
        if self._retry is not None and self.link.send(now, self._retry):
            self._retry = None
        req = self.link.a.take(now)
        if req is not None:
            resp = self._serve(req)
            ready = now + self.latency + beats_of(req)
            self._inflight.append((ready, resp))

    def _serve(self, req):
        op = req.opcode
        size_bytes = 1 << req.size
        if op == ChanA.Get:
            data = self.store.read(req.address, size_bytes)
            if data is None:
                return TlMessage("D", ChanD.AccessAckData, size=req.size,
                                 source=req.source, data=bytes(size_bytes),
                                 denied=True, corrupt=True)
            return TlMessage("D", ChanD.AccessAckData, size=req.size,
                             source=req.source, data=data)
        if op in (ChanA.PutFullData, ChanA.PutPartialData):
            mask = None
            if op == ChanA.PutPartialData and req.size <= 3:
                mask = req.mask >> (req.address & (BEAT_BYTES - 1))
            ok = self.store.write(req.address, req.data, mask)
            return TlMessage("D", ChanD.AccessAck, size=req.size,
                             source=req.source, denied=not ok)
        if op in (ChanA.ArithmeticData, ChanA.LogicalData):
            if req.size not in (2, 3):
                return TlMessage("D", ChanD.AccessAckData, size=req.size,
                                 source=req.source, data=bytes(size_bytes),
                                 denied=True, corrupt=True)
            old = self.store.read(req.address, size_bytes)
            if old is None:
                return TlMessage("D", ChanD.AccessAckData, size=req.size,
                                 source=req.source, data=bytes(size_bytes),
                                 denied=True, corrupt=True)
            fn = ARITH_FN[req.param] if op == ChanA.ArithmeticData else LOGIC_FN[req.param]
            operand = int.from_bytes(req.data, "little")
            new = amo_apply(fn, int.from_bytes(old, "little"), operand, size_bytes)
            self.store.write(req.address, new.to_bytes(size_bytes, "little"))
            return TlMessage("D", ChanD.AccessAckData, size=req.size,
                             source=req.source, data=old)
        if op == ChanA.Intent:
            return TlMessage("D", ChanD.HintAck, size=req.size, source=req.source)
        # Cached opcodes must not reach a UH endpoint; deny defensively.
        return TlMessage("D", ChanD.AccessAck, size=req.size, source=req.source,
                         denied=True)
