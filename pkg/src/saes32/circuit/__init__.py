"""Gate-level S-box circuits with a shared nonlinear middle layer."""

from .layered import (LAYER_COUNTS, LayeredSBox, build_layered_sbox, gate_table, load_layer,
                      middle_layer, verify_layered_sbox)
from .netlist import (Gate, GateOp, Netlist, NetlistError, compose, from_gates, gate_stats,
                      truth_table)

__all__ = [
    "Gate", "GateOp", "Netlist", "NetlistError", "LayeredSBox", "LAYER_COUNTS",
    "build_layered_sbox", "compose", "from_gates", "gate_stats", "gate_table",
    "load_layer", "middle_layer", "truth_table", "verify_layered_sbox",
]
