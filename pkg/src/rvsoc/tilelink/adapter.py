"""TL-C to TL-UH adapter.

Terminates the cached protocol for a single inbound master chain when no
coherent agent exists below: Acquires become Gets (with synthesized Grants
always conferring the requested permission), ReleaseData becomes PutFullData,
clean Releases are acked locally, uncached operations pass through, and
Probes are never emitted.
"""

from collections import deque

from .messages import (CAP_TOB, CAP_TOT, ChanA, ChanC, ChanD, GROW_NTOB,
                       TlMessage)


class CachedToUncached:
    def __init__(self, up, down, sinks=16):
        self.up = up      # TL-C link, this agent is the slave side
        self.down = down  # TL-UH link, this agent is the master side
        self._free_sinks = deque(range(sinks))
        self._acquires = {}       # source -> grant param for in-flight Get
        self._releases = set()    # sources awaiting downstream write ack
        self._grants = deque()    # responses waiting for a free sink
        self._outbox_up = deque()
        self._outbox_down = deque()

    def idle(self):
        return not (self._acquires or self._releases or self._grants
                    or self._outbox_up or self._outbox_down)

    def _grant_param(self, grow):
        return CAP_TOB if grow == GROW_NTOB else CAP_TOT

    def tick(self, now):
        while self._grants and self._free_sinks:
            msg = self._grants.popleft()
            msg.sink = self._free_sinks.popleft()
            self._outbox_up.append(msg)
        while self._outbox_up and self.up.send(now, self._outbox_up[0]):
            self._outbox_up.popleft()
        while self._outbox_down and self.down.send(now, self._outbox_down[0]):
            self._outbox_down.popleft()

        msg = self.up.c.take(now)
        if msg is not None:
            if msg.opcode == ChanC.ReleaseData:
                self._releases.add(msg.source)
                self._outbox_down.append(TlMessage(
                    "A", ChanA.PutFullData, size=msg.size, source=msg.source,
                    address=msg.address, data=msg.data))
            elif msg.opcode == ChanC.Release:
                self._outbox_up.append(TlMessage(
                    "D", ChanD.ReleaseAck, size=msg.size, source=msg.source))
            # ProbeAck cannot occur: no probes are ever sent.

        msg = self.up.a.take(now)
        if msg is not None:
            if msg.opcode == ChanA.AcquireBlock:
                self._acquires[msg.source] = self._grant_param(msg.param)
                self._outbox_down.append(TlMessage(
                    "A", ChanA.Get, size=msg.size, source=msg.source,
                    address=msg.address))
            elif msg.opcode == ChanA.AcquirePerm:
                # No other cache below: permission is granted without data.
                self._grants.append(TlMessage(
                    "D", ChanD.Grant, param=self._grant_param(msg.param),
                    size=msg.size, source=msg.source))
            else:
                self._outbox_down.append(msg)

        msg = self.down.d.take(now)
        if msg is not None:
            if msg.opcode == ChanD.AccessAckData and msg.source in self._acquires:
                param = self._acquires.pop(msg.source)
                self._grants.append(TlMessage(
                    "D", ChanD.GrantData, param=param, size=msg.size,
                    source=msg.source, data=msg.data,
                    denied=msg.denied, corrupt=msg.corrupt))
            elif msg.opcode == ChanD.AccessAck and msg.source in self._releases:
                self._releases.discard(msg.source)
                self._outbox_up.append(TlMessage(
                    "D", ChanD.ReleaseAck, size=msg.size, source=msg.source))
            else:
                self._outbox_up.append(msg)

        msg = self.up.e.take(now)
        if msg is not None:
            self._free_sinks.append(msg.sink)
