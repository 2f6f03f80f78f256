"""Link layer: five channels with valid-ready semantics and beat timing.

A channel accepts at most one beat per cycle; a multi-beat message occupies
its channel for one cycle per beat and is delivered to the consumer when the
last beat has transferred. Messages never interleave within a channel.
Acceptance order is the canonical protocol order observed by monitors.
"""

from collections import deque

from .messages import BEAT_BYTES, beats_of


class Channel:
    __slots__ = ("name", "capacity", "queue", "busy_until")

    def __init__(self, name, capacity=2):
        self.name = name
        self.capacity = capacity
        self.queue = deque()  # (deliver_cycle, msg)
        self.busy_until = 0

    def ready(self, now):
        return len(self.queue) < self.capacity and now >= self.busy_until

    def offer(self, now, msg):
        """Try to accept a message this cycle; False applies backpressure."""
        if not self.ready(now):
            return False
        beats = beats_of(msg)
        self.busy_until = now + beats
        self.queue.append((now + beats, msg))
        return True

    def peek(self, now):
        if self.queue and self.queue[0][0] <= now:
            return self.queue[0][1]
        return None

    def take(self, now):
        if self.queue and self.queue[0][0] <= now:
            return self.queue.popleft()[1]
        return None

    def idle(self):
        return not self.queue


class Link:
    """One agent-to-agent TileLink link (channels A-E plus observers)."""

    __slots__ = ("name", "a", "b", "c", "d", "e", "on_message", "trace")

    def __init__(self, name, capacity=2):
        self.name = name
        self.a = Channel("A", capacity)
        self.b = Channel("B", capacity)
        self.c = Channel("C", capacity)
        self.d = Channel("D", capacity)
        self.e = Channel("E", capacity)
        self.on_message = []  # callbacks (link, cycle, msg) at acceptance
        self.trace = None     # callback (line) per beat

    def channel(self, name):
        return getattr(self, name.lower())

    def send(self, now, msg):
        """Offer on the message's channel; notifies observers on acceptance."""
        ch = self.channel(msg.channel)
        if not ch.offer(now, msg):
            return False
        for cb in self.on_message:
            cb(self, now, msg)
        if self.trace is not None:
            self._trace_beats(now, msg)
        return True

    def _trace_beats(self, now, msg):
        nbeats = beats_of(msg)
        for i in range(nbeats):
            if msg.data is not None:
                chunk = msg.data[i * BEAT_BYTES:(i + 1) * BEAT_BYTES]
                data = int.from_bytes(chunk, "little")
            else:
                data = 0
            self.trace(f"TL {now + i:x} {self.name} {msg.channel} {msg.opcode:x} "
                       f"{msg.param:x} {msg.size:x} {msg.source:x} {msg.sink:x} "
                       f"{msg.address:x} {msg.mask:x} {data:016x}")

    def idle(self):
        return (self.a.idle() and self.b.idle() and self.c.idle()
                and self.d.idle() and self.e.idle())
