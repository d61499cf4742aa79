"""Three-stage S-box circuits sharing one nonlinear middle layer.

Every S-box is top (8 -> 21, linear) -> middle (21 -> 18, XOR/AND)
-> bottom (18 -> 8, linear). The middle netlist object is loaded once and
shared by all three kinds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..sbox import SBoxKind, sbox_table
from .netlist import GateOp, Netlist, compose, gate_stats, truth_table

LAYER_FILES = {
    SBoxKind.AES: ("aes_top", "aes_bottom"),
    SBoxKind.AES_INV: ("aes_inv_top", "aes_inv_bottom"),
    SBoxKind.SM4: ("sm4_top", "sm4_bottom"),
}

MIDDLE_WIDTH = (21, 18)


@lru_cache(maxsize=None)
def load_layer(name: str) -> Netlist:
    text = resources.files(__package__).joinpath("layers", f"{name}.net").read_text()
    return Netlist.from_text(text)


def middle_layer() -> Netlist:
    return load_layer("middle")


@dataclass(frozen=True, eq=False)
class LayeredSBox:
    kind: SBoxKind
    top: Netlist
    middle: Netlist
    bottom: Netlist

    def __post_init__(self):
        shapes = [(n.n_inputs, n.n_outputs) for n in (self.top, self.middle, self.bottom)]
        if shapes != [(8, 21), MIDDLE_WIDTH, (18, 8)]:
            raise ValueError(f"layer shapes {shapes} do not chain 8 -> 21 -> 18 -> 8")

    def evaluate_byte(self, x: int) -> int:
        bits = [(x >> i) & 1 for i in range(8)]
        out = self.bottom.eval(self.middle.eval(self.top.eval(bits)))
        return sum(b << i for i, b in enumerate(out))

    def flatten(self) -> Netlist:
        return compose(self.top, self.middle, self.bottom)

    def truth_table(self) -> list[int]:
        return truth_table(self.flatten())

    def layers(self) -> dict[str, Netlist]:
        return {"top": self.top, "middle": self.middle, "bottom": self.bottom}

    def stats(self) -> dict[str, dict[str, int]]:
        out = {name: gate_stats(n) for name, n in self.layers().items()}
        out["total"] = gate_stats(self.flatten())
        return out

    def structure_ok(self) -> bool:
        """Outer layers XOR/XNOR only; middle XOR/AND only."""
        linear = {GateOp.XOR, GateOp.XNOR}
        return (self.top.op_set() <= linear and self.bottom.op_set() <= linear
                and self.middle.op_set() <= {GateOp.XOR, GateOp.AND})


@lru_cache(maxsize=None)
def build_layered_sbox(kind: SBoxKind | str) -> LayeredSBox:
    kind = SBoxKind(kind) if isinstance(kind, str) else kind
    top, bottom = LAYER_FILES[kind]
    return LayeredSBox(kind, load_layer(top), middle_layer(), load_layer(bottom))


def verify_layered_sbox(kind: SBoxKind | str) -> list[int]:
    """Inputs (of all 256) where the circuit and the table disagree."""
    circ = build_layered_sbox(kind)
    table = sbox_table(circ.kind)
    return [x for x, y in enumerate(circ.truth_table()) if y != table[x]]


#   Published per-layer counts: (component, layer name, xor, xnor, and, total)
LAYER_COUNTS = (
    ("Shared middle", "middle", 30, 0, 34, 64),
    ("AES top", "aes_top", 26, 0, 0, 26),
    ("AES bottom", "aes_bottom", 34, 4, 0, 38),
    ("AES^-1 top", "aes_inv_top", 16, 10, 0, 26),
    ("AES^-1 bottom", "aes_inv_bottom", 37, 0, 0, 37),
    ("SM4 top", "sm4_top", 18, 9, 0, 27),
    ("SM4 bottom", "sm4_bottom", 33, 5, 0, 38),
)


def gate_table() -> list[dict]:
    """One row per layer: measured counts next to the published ones."""
    rows = []
    for label, name, xor, xnor, and_, total in LAYER_COUNTS:
        net = load_layer(name)
        st = gate_stats(net)
        rows.append({
            "component": label,
            "layer": name,
            "inputs": net.n_inputs,
            "outputs": net.n_outputs,
            **st,
            "expected": {"xor": xor, "xnor": xnor, "and": and_, "total": total},
            "match": (st["xor"], st["xnor"], st["and"], st["total"]) == (xor, xnor, and_, total),
        })
    return rows
