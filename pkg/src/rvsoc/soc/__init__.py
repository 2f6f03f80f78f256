"""Platform assembly: address map, devices, ELF loading, HTIF, and the
fully wired multicore machine."""
