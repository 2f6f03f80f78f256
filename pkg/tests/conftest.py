import hypothesis
import pytest

from rvsoc.isa import AccessFault

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.load_profile("ci")


class ToyMem:
    """Flat little-endian physical memory window for ISA-level tests."""

    def __init__(self, base=0x8000_0000, size=1 << 20):
        self.base = base
        self.data = bytearray(size)

    def _off(self, paddr, width, access):
        off = paddr - self.base
        if off < 0 or off + width > len(self.data):
            raise AccessFault(access, paddr)
        return off

    def read(self, paddr, width):
        off = self._off(paddr, width, 1)
        return int.from_bytes(self.data[off:off + width], "little")

    def write(self, paddr, width, value):
        off = self._off(paddr, width, 2)
        self.data[off:off + width] = int(value).to_bytes(width, "little")


@pytest.fixture
def mem():
    return ToyMem()
