"""Two-input gate netlists: parsing, evaluation and statistics.

Text format, one statement per line::

    # comment
    .inputs 8
    .outputs y0 y1 x3 ...
    t0 = XOR x0 x3
    y1 = XNOR t0 x5

Inputs are ``x0..x{n-1}``. Gate outputs are named freely (``t*`` for
temporaries, ``y*`` for layer outputs by convention) and must be assigned
exactly once, after both operands are defined. The ``.outputs`` list may
name input wires directly (a plain wire-through).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class NetlistError(ValueError):
    pass


class GateOp(enum.Enum):
    XOR = "XOR"
    XNOR = "XNOR"
    AND = "AND"

    @property
    def linear(self) -> bool:
        return self is not GateOp.AND


@dataclass(frozen=True)
class Gate:
    op: GateOp
    in_a: int
    in_b: int
    out: int


class Netlist:
    """Topologically ordered list of gates over integer wire indices.

    Wires ``0..n_inputs-1`` are inputs; gate ``i`` drives wire
    ``n_inputs + i``.
    """

    def __init__(self, n_inputs: int, gates: Sequence[Gate],
                 output_wires: Sequence[int], names: Sequence[str] | None = None):
        self.n_inputs = n_inputs
        self.gates = tuple(gates)
        self.output_wires = tuple(output_wires)
        n_wires = n_inputs + len(self.gates)
        for i, g in enumerate(self.gates):
            if g.out != n_inputs + i:
                raise NetlistError(f"gate {i} drives wire {g.out}, expected {n_inputs + i}")
            if not (0 <= g.in_a < g.out and 0 <= g.in_b < g.out):
                raise NetlistError(f"gate {i} reads a wire that is not yet defined")
        for w in self.output_wires:
            if not 0 <= w < n_wires:
                raise NetlistError(f"output wire {w} does not exist")
        if names is None:
            names = [f"x{i}" for i in range(n_inputs)] + \
                    [f"t{i}" for i in range(len(self.gates))]
        if len(names) != n_wires or len(set(names)) != n_wires:
            raise NetlistError("wire names must be unique, one per wire")
        self.names = tuple(names)

    @property
    def n_outputs(self) -> int:
        return len(self.output_wires)

    def __len__(self):
        return len(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Netlist):
            return NotImplemented
        return (self.n_inputs, self.gates, self.output_wires) == \
               (other.n_inputs, other.gates, other.output_wires)

    def __hash__(self):
        return hash((self.n_inputs, self.gates, self.output_wires))

    def __repr__(self):
        return (f"Netlist({self.n_inputs} -> {self.n_outputs}, "
                f"{len(self.gates)} gates)")

    #   --- evaluation ----------------------------------------------------

    def eval(self, inputs: Sequence[int]) -> list[int]:
        """Evaluate on a bit-vector (sequence of 0/1) of length n_inputs."""
        if len(inputs) != self.n_inputs:
            raise ValueError(f"expected {self.n_inputs} input bits, got {len(inputs)}")
        return self.eval_sliced([b & 1 for b in inputs], 1)

    def eval_sliced(self, inputs: Sequence[int], mask: int) -> list[int]:
        """Bit-sliced evaluation: each wire carries an integer of lanes.

        ``mask`` selects the live lanes (needed to complement XNOR).
        """
        if len(inputs) != self.n_inputs:
            raise ValueError(f"expected {self.n_inputs} inputs, got {len(inputs)}")
        w = list(inputs)
        for g in self.gates:
            a, b = w[g.in_a], w[g.in_b]
            if g.op is GateOp.XOR:
                w.append(a ^ b)
            elif g.op is GateOp.AND:
                w.append(a & b)
            else:
                w.append(~(a ^ b) & mask)
        return [w[i] for i in self.output_wires]

    def eval_int(self, x: int) -> int:
        """Evaluate with input bit i taken from bit i of ``x``; packs the outputs."""
        bits = self.eval([(x >> i) & 1 for i in range(self.n_inputs)])
        return sum(b << i for i, b in enumerate(bits))

    #   --- statistics ------------------------------------------------------

    def depths(self) -> list[int]:
        d = [0] * self.n_inputs
        for g in self.gates:
            d.append(max(d[g.in_a], d[g.in_b]) + 1)
        return d

    def depth(self) -> int:
        d = self.depths()
        return max((d[w] for w in self.output_wires), default=0)

    def op_set(self) -> set[GateOp]:
        return {g.op for g in self.gates}

    #   --- text form -------------------------------------------------------

    def to_text(self, header: str | None = None) -> str:
        lines = []
        if header:
            lines += [f"# {h}" if h else "#" for h in header.splitlines()]
        lines.append(f".inputs {self.n_inputs}")
        lines.append(".outputs " + " ".join(self.names[w] for w in self.output_wires))
        for g in self.gates:
            lines.append(f"{self.names[g.out]} = {g.op.value} "
                         f"{self.names[g.in_a]} {self.names[g.in_b]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Netlist":
        n_inputs = None
        outputs: list[str] | None = None
        names: list[str] = []
        index: dict[str, int] = {}
        gates: list[Gate] = []

        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith(".inputs"):
                n_inputs = int(line.split()[1])
                names = [f"x{i}" for i in range(n_inputs)]
                index = {n: i for i, n in enumerate(names)}
                continue
            if line.startswith(".outputs"):
                outputs = line.split()[1:]
                continue
            if n_inputs is None:
                raise NetlistError(f"line {lineno}: gate before .inputs")
            parts = line.replace("=", " = ").split()
            if len(parts) != 5 or parts[1] != "=":
                raise NetlistError(f"line {lineno}: expected 'OUT = OP A B'")
            out, _, op, a, b = parts
            try:
                gop = GateOp(op.upper())
            except ValueError:
                raise NetlistError(f"line {lineno}: unknown gate {op!r}") from None
            if out in index:
                raise NetlistError(f"line {lineno}: wire {out!r} assigned twice")
            for w in (a, b):
                if w not in index:
                    raise NetlistError(f"line {lineno}: wire {w!r} used before definition")
            wire = len(names)
            gates.append(Gate(gop, index[a], index[b], wire))
            names.append(out)
            index[out] = wire

        if n_inputs is None or outputs is None:
            raise NetlistError("missing .inputs or .outputs")
        missing = [o for o in outputs if o not in index]
        if missing:
            raise NetlistError(f"undefined output wires {missing}")
        return cls(n_inputs, gates, [index[o] for o in outputs], names)

    @classmethod
    def load(cls, path) -> "Netlist":
        return cls.from_text(Path(path).read_text())

    def save(self, path, header: str | None = None) -> None:
        Path(path).write_text(self.to_text(header))


def gate_stats(netlist: Netlist) -> dict[str, int]:
    """Per-type gate counts, total and longest input-to-output path."""
    counts = {op: 0 for op in GateOp}
    for g in netlist.gates:
        counts[g.op] += 1
    return {
        "xor": counts[GateOp.XOR],
        "xnor": counts[GateOp.XNOR],
        "and": counts[GateOp.AND],
        "total": len(netlist.gates),
        "depth": netlist.depth(),
    }


def compose(*stages: Netlist) -> Netlist:
    """Chain netlists output-to-input into one flat netlist."""
    first = stages[0]
    gates: list[Gate] = list(first.gates)
    names: list[str] = list(first.names)
    outs = list(first.output_wires)
    for k, st in enumerate(stages[1:], 1):
        if st.n_inputs != len(outs):
            raise NetlistError(f"stage {k} expects {st.n_inputs} inputs, gets {len(outs)}")
        remap = list(outs)
        for g in st.gates:
            wire = first.n_inputs + len(gates)
            gates.append(Gate(g.op, remap[g.in_a], remap[g.in_b], wire))
            names.append(f"s{k}_{st.names[g.out]}")
            remap.append(wire)
        outs = [remap[w] for w in st.output_wires]
    return Netlist(first.n_inputs, gates, outs, names)


def truth_table(netlist: Netlist) -> list[int]:
    """All 2^n outputs (n <= 16) packed as integers, via bit-sliced evaluation."""
    n = netlist.n_inputs
    if n > 16:
        raise ValueError("exhaustive evaluation limited to 16 inputs")
    size = 1 << n
    mask = (1 << size) - 1
    lanes = []
    for i in range(n):
        v = 0
        for x in range(size):
            if (x >> i) & 1:
                v |= 1 << x
        lanes.append(v)
    outs = netlist.eval_sliced(lanes, mask)
    return [sum(((o >> x) & 1) << j for j, o in enumerate(outs)) for x in range(size)]


def from_gates(n_inputs: int, spec: Iterable[tuple[str, str, str, str]],
               outputs: Sequence[str]) -> Netlist:
    """Build from (out, op, a, b) name tuples."""
    text = [f".inputs {n_inputs}", ".outputs " + " ".join(outputs)]
    text += [f"{o} = {op} {a} {b}" for o, op, a, b in spec]
    return Netlist.from_text("\n".join(text))
