"""Minimal ELF64 reader/writer for little-endian RISC-V executables.

The reader understands just enough to load PT_LOAD segments and find the
tohost/fromhost symbols; the writer produces well-formed static executables
(with a symbol table) for the synthesized bare-metal test programs.
"""

import struct

EM_RISCV = 243
PT_LOAD = 1
SHT_NULL = 0
SHT_PROGBITS = 1
SHT_SYMTAB = 2
SHT_STRTAB = 3


class MalformedElf(Exception):
    pass


class ElfImage:
    """Parsed executable: entry point, loadable segments, symbol table."""

    def __init__(self, entry, segments, symbols):
        self.entry = entry
        self.segments = segments  # list of (paddr, bytes)
        self.symbols = symbols    # name -> address


def read_elf(data):
    """Parse ELF64 bytes; raises MalformedElf on anything unsupported."""
    if len(data) < 64 or data[:4] != b"\x7fELF":
        raise MalformedElf("not an ELF file")
    if data[4] != 2:
        raise MalformedElf("wrong ELF class (need ELF64)")
    if data[5] != 1:
        raise MalformedElf("wrong endianness (need little-endian)")
    (e_type, e_machine, _ver, entry, phoff, shoff, _flags, _ehsize,
     phentsize, phnum, shentsize, shnum, _shstrndx) = struct.unpack_from(
        "<HHIQQQIHHHHHH", data, 16)
    if e_machine != EM_RISCV:
        raise MalformedElf(f"wrong machine {e_machine} (need RISC-V)")
    if e_type not in (2, 3):
        raise MalformedElf(f"unsupported ELF type {e_type}")
    segments = []
    for i in range(phnum):
        off = phoff + i * phentsize
        if off + 56 > len(data):
            raise MalformedElf("program header out of bounds")
        p_type, _flags, p_offset, p_vaddr, p_paddr, p_filesz, p_memsz, _align = \
            struct.unpack_from("<IIQQQQQQ", data, off)
        if p_type != PT_LOAD:
            continue
        if p_offset + p_filesz > len(data):
            raise MalformedElf("segment data out of bounds")
        content = bytearray(data[p_offset:p_offset + p_filesz])
        if p_memsz > p_filesz:
            content += bytes(p_memsz - p_filesz)
        addr = p_paddr if p_paddr else p_vaddr
        segments.append((addr, bytes(content)))
    symbols = {}
    symtabs = []
    strtabs = {}
    for i in range(shnum):
        off = shoff + i * shentsize
        if off + 64 > len(data):
            raise MalformedElf("section header out of bounds")
        _name, sh_type, _flags, _addr, sh_offset, sh_size, sh_link, _info, _al, sh_entsize = \
            struct.unpack_from("<IIQQQQIIQQ", data, off)
        if sh_type == SHT_SYMTAB:
            symtabs.append((sh_offset, sh_size, sh_link, sh_entsize or 24))
        elif sh_type == SHT_STRTAB:
            strtabs[i] = (sh_offset, sh_size)
    for sh_offset, sh_size, sh_link, entsize in symtabs:
        strtab = strtabs.get(sh_link)
        if strtab is None:
            continue
        str_off, str_size = strtab
        names = data[str_off:str_off + str_size]
        for off in range(sh_offset, sh_offset + sh_size, entsize):
            st_name, _info, _other, _shndx, st_value, _size = \
                struct.unpack_from("<IBBHQQ", data, off)
            if st_name:
                end = names.find(b"\0", st_name)
                symbols[names[st_name:end].decode("latin-1")] = st_value
    return ElfImage(entry, segments, symbols)


def read_elf_file(path):
    with open(path, "rb") as f:
        return read_elf(f.read())


def write_elf(entry, segments, symbols=None):
    """Build ELF64 executable bytes.

    segments: list of (vaddr, bytes); symbols: name -> address.
    """
    symbols = symbols or {}
    phnum = len(segments)
    ehsize, phentsize, shentsize = 64, 56, 64

    offset = ehsize + phnum * phentsize
    seg_offsets = []
    blob = bytearray()
    for _vaddr, content in segments:
        pad = (-offset) % 8
        blob += bytes(pad)
        offset += pad
        seg_offsets.append(offset)
        blob += content
        offset += len(content)

    # .strtab
    strtab = bytearray(b"\0")
    sym_entries = [struct.pack("<IBBHQQ", 0, 0, 0, 0, 0, 0)]
    for name, addr in symbols.items():
        st_name = len(strtab)
        strtab += name.encode("latin-1") + b"\0"
        # global notype, absolute section
        sym_entries.append(struct.pack("<IBBHQQ", st_name, (1 << 4) | 0, 0, 0xFFF1, addr, 0))
    symtab = b"".join(sym_entries)

    pad = (-offset) % 8
    blob += bytes(pad)
    offset += pad
    symtab_off = offset
    blob += symtab
    offset += len(symtab)
    strtab_off = offset
    blob += strtab
    offset += len(strtab)

    shstrtab = b"\0.symtab\0.strtab\0.shstrtab\0"
    shstr_off = offset
    blob += shstrtab
    offset += len(shstrtab)
    pad = (-offset) % 8
    blob += bytes(pad)
    offset += pad
    shoff = offset

    def shdr(name_off, sh_type, addr, off, size, link=0, info=0, align=1, entsize=0):
        return struct.pack("<IIQQQQIIQQ", name_off, sh_type, 0, addr, off, size,
                           link, info, align, entsize)

    sections = [shdr(0, SHT_NULL, 0, 0, 0)]
    sections.append(shdr(1, SHT_SYMTAB, 0, symtab_off, len(symtab),
                         link=2, info=1, align=8, entsize=24))
    sections.append(shdr(9, SHT_STRTAB, 0, strtab_off, len(strtab)))
    sections.append(shdr(17, SHT_STRTAB, 0, shstr_off, len(shstrtab)))
    shnum = len(sections)

    ehdr = struct.pack("<4sBBBBB7xHHIQQQIHHHHHH",
                       b"\x7fELF", 2, 1, 1, 0, 0,
                       2, EM_RISCV, 1, entry, ehsize, shoff,
                       0x5,  # RVC + double-float ABI flags
                       ehsize, phentsize, phnum, shentsize, shnum, shnum - 1)
    phdrs = bytearray()
    for (vaddr, content), segoff in zip(segments, seg_offsets):
        phdrs += struct.pack("<IIQQQQQQ", PT_LOAD, 0x7, segoff, vaddr, vaddr,
                             len(content), len(content), 8)
    return bytes(ehdr + phdrs + blob + b"".join(sections))
