"""Functional coverpoints for TileLink traffic.

A Coverage instance declares the points reachable for a given link level and
topology up front, so "every defined coverpoint hit" is a checkable property.
"""

import json

from .messages import (ChanA, ChanB, ChanC, ChanD, TL_C, TL_UH, beats_of)

_GROW_NAMES = {0: "NtoB", 1: "NtoT", 2: "BtoT"}
_CAP_NAMES = {0: "toT", 1: "toB", 2: "toN"}
_PRUNE_NAMES = {0: "TtoB", 1: "TtoN", 2: "BtoN", 3: "TtoT", 4: "BtoB", 5: "NtoN"}


class Coverage:
    def __init__(self, level, can_probe=False, max_size=6):
        self.level = level
        self.can_probe = can_probe and level >= TL_C
        self.counts = {}
        pts = ["chanop:A.Get", "chanop:A.PutFullData", "chanop:A.PutPartialData",
               "chanop:D.AccessAck", "chanop:D.AccessAckData",
               "multi-beat", "resp-denied"]
        pts += [f"size:{s}" for s in range(max_size + 1)]
        if level >= TL_UH:
            pts += ["chanop:A.ArithmeticData", "chanop:A.LogicalData",
                    "chanop:A.Intent", "chanop:D.HintAck"]
            pts += [f"arith:{n}" for n in ("MIN", "MAX", "MINU", "MAXU", "ADD")]
            pts += [f"logic:{n}" for n in ("XOR", "OR", "AND", "SWAP")]
        if level >= TL_C:
            pts += ["chanop:A.AcquireBlock", "chanop:A.AcquirePerm",
                    "chanop:C.Release", "chanop:C.ReleaseData",
                    "chanop:D.Grant", "chanop:D.GrantData", "chanop:D.ReleaseAck",
                    "chanop:E.GrantAck", "release-with-data", "grant-denied"]
            pts += [f"grow:{n}" for n in _GROW_NAMES.values()]
            pts += ["cap:toT", "cap:toB"]
            pts += [f"release:{n}" for n in ("TtoB", "TtoN", "BtoN")]
        if self.can_probe:
            pts += ["chanop:B.Probe", "chanop:C.ProbeAck", "chanop:C.ProbeAckData",
                    "probe:toB", "probe:toN", "probe-hits-dirty", "probe-hits-clean",
                    "probe-miss", "ab-race"]
            pts += [f"probeack:{n}" for n in ("TtoB", "TtoN", "BtoN", "NtoN", "BtoB")]
        for p in pts:
            self.counts[p] = 0

    def hit(self, point, n=1):
        self.counts[point] = self.counts.get(point, 0) + n

    def record(self, msg, ctx=None):
        """Count one accepted message (ctx carries monitor-derived hints)."""
        ctx = ctx or {}
        self.hit(f"chanop:{msg.channel}.{msg.opname}")
        self.hit(f"size:{msg.size}")
        if beats_of(msg) > 1:
            self.hit("multi-beat")
        if msg.denied:
            self.hit("resp-denied")
        ch, op = msg.channel, msg.opcode
        if ch == "A":
            if op == ChanA.ArithmeticData:
                self.hit(f"arith:{('MIN', 'MAX', 'MINU', 'MAXU', 'ADD')[msg.param]}")
            elif op == ChanA.LogicalData:
                self.hit(f"logic:{('XOR', 'OR', 'AND', 'SWAP')[msg.param]}")
            elif op in (ChanA.AcquireBlock, ChanA.AcquirePerm):
                self.hit(f"grow:{_GROW_NAMES.get(msg.param, msg.param)}")
        elif ch == "B" and op == ChanB.Probe:
            self.hit(f"probe:{_CAP_NAMES.get(msg.param, msg.param)}")
            if ctx.get("ab_race"):
                self.hit("ab-race")
        elif ch == "C":
            if op in (ChanC.ProbeAck, ChanC.ProbeAckData):
                self.hit(f"probeack:{_PRUNE_NAMES.get(msg.param, msg.param)}")
                if op == ChanC.ProbeAckData:
                    self.hit("probe-hits-dirty")
                elif msg.param == 5:  # NtoN: probed master had nothing
                    self.hit("probe-miss")
                else:
                    self.hit("probe-hits-clean")
            elif op in (ChanC.Release, ChanC.ReleaseData):
                self.hit(f"release:{_PRUNE_NAMES.get(msg.param, msg.param)}")
                if op == ChanC.ReleaseData:
                    self.hit("release-with-data")
        elif ch == "D" and op in (ChanD.Grant, ChanD.GrantData):
            self.hit(f"cap:{_CAP_NAMES.get(msg.param, msg.param)}")
            if ctx.get("grant_denied"):
                self.hit("grant-denied")

    def missing(self):
        return sorted(p for p, n in self.counts.items() if n == 0)

    def report_text(self):
        lines = [f"{point} {count}" for point, count in sorted(self.counts.items())]
        return "\n".join(lines) + "\n"

    def report_json(self):
        return json.dumps(dict(sorted(self.counts.items())), indent=2) + "\n"
