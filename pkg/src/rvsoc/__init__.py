"""Cycle-approximate RV64 multicore SoC simulator with a TileLink-coherent memory
hierarchy, a lockstep functional oracle, and protocol verification tooling."""

__version__ = "0.1.0"
