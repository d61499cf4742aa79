"""The SAES32 / SSM4 instruction: semantics, fn codes and R-type encoding.

    rd = rs1 ^ rotl32(expand[fn[4:2]](sbox(rs2.byte[fn[1:0]])), 8 * fn[1:0])

Byte order convention: register byte i is bits [8i+7:8i], i.e. a word
loaded little-endian from memory holds memory byte i in register byte i.
The linear expansions below are laid out for that convention, so AES
columns and SM4 words are loaded with plain little-endian ``lw`` and no
byte swapping happens inside the ciphers.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

from .sbox import SBoxKind, gf256_mul, sbox_table
from .trace import ALU, LOAD_CONST, LOAD_SUBKEY, XOR, InstrTrace

MASK32 = 0xFFFFFFFF

OPCODE_CUSTOM0 = 0b0001011


class InvalidInstruction(ValueError):
    """Instruction word or fn code outside the SAES32 encoding space."""


class Op(enum.IntEnum):
    """fn[4:2] operation selector."""

    ENCSM = 0
    ENCS = 1
    DECSM = 2
    DECS = 3
    SM4_ED = 4
    SM4_KS = 5


MNEMONICS = {
    Op.ENCSM: "saes32.encsm",
    Op.ENCS: "saes32.encs",
    Op.DECSM: "saes32.decsm",
    Op.DECS: "saes32.decs",
    Op.SM4_ED: "ssm4.ed",
    Op.SM4_KS: "ssm4.ks",
}

OP_BY_MNEMONIC = {v: k for k, v in MNEMONICS.items()}

SBOX_OF = {
    Op.ENCSM: SBoxKind.AES,
    Op.ENCS: SBoxKind.AES,
    Op.DECSM: SBoxKind.AES_INV,
    Op.DECS: SBoxKind.AES_INV,
    Op.SM4_ED: SBoxKind.SM4,
    Op.SM4_KS: SBoxKind.SM4,
}


@dataclass(frozen=True)
class FnCode:
    op: Op
    byte_ix: int = 0

    def __post_init__(self):
        try:
            op = Op(self.op)
        except ValueError:
            raise InvalidInstruction(f"unused fn[4:2] selector {self.op}") from None
        object.__setattr__(self, "op", op)
        if not 0 <= self.byte_ix <= 3:
            raise InvalidInstruction(f"byte index {self.byte_ix} out of range")

    @classmethod
    def from_bits(cls, fn: int) -> "FnCode":
        if not 0 <= fn < 32:
            raise InvalidInstruction(f"fn {fn} is not a 5-bit value")
        return cls(fn >> 2, fn & 3)

    @property
    def bits(self) -> int:
        return (int(self.op) << 2) | self.byte_ix

    @property
    def mnemonic(self) -> str:
        return MNEMONICS[self.op]


def mnemonic(fn: FnCode) -> str:
    """Pseudo-instruction name for fn[4:2]; the byte index is an operand."""
    return MNEMONICS[fn.op]


def rotl32(x: int, n: int) -> int:
    n &= 31
    x &= MASK32
    return ((x << n) | (x >> (32 - n))) & MASK32


def bswap32(x: int) -> int:
    return int.from_bytes((x & MASK32).to_bytes(4, "little"), "big")


def sm4_l(x: int) -> int:
    """SM4 round linear transform L on a big-endian word."""
    return x ^ rotl32(x, 2) ^ rotl32(x, 10) ^ rotl32(x, 18) ^ rotl32(x, 24)


def sm4_l_key(x: int) -> int:
    """SM4 key-schedule linear transform L'."""
    return x ^ rotl32(x, 13) ^ rotl32(x, 23)


def expand(op: Op, s: int) -> int:
    """8 -> 32 bit linear expansion selected by fn[4:2], for byte position 0."""
    op = Op(op)
    if op in (Op.ENCS, Op.DECS):
        return s
    if op == Op.ENCSM:
        #   MixColumns column (2, 1, 1, 3) * s, row 0 in the low byte
        return (gf256_mul(s, 2) | s << 8 | s << 16 | gf256_mul(s, 3) << 24)
    if op == Op.DECSM:
        return (gf256_mul(s, 14) | gf256_mul(s, 9) << 8
                | gf256_mul(s, 13) << 16 | gf256_mul(s, 11) << 24)
    #   SM4 words are big-endian; the byte lands in the most significant
    #   logical byte, and the result is flipped to register order.
    if op == Op.SM4_ED:
        return bswap32(sm4_l(s << 24))
    return bswap32(sm4_l_key(s << 24))


class TableSBox:
    """Table-backed S-box lookup."""

    name = "table"

    def __init__(self):
        self._tables = {k: sbox_table(k).to_bytes() for k in SBoxKind}

    def __call__(self, kind: SBoxKind, x: int) -> int:
        return self._tables[kind][x]


class CircuitSBox:
    """S-box lookup by evaluating the layered gate-level circuits."""

    name = "circuit"

    def __init__(self):
        from .circuit import build_layered_sbox
        self._circuits = {k: build_layered_sbox(k) for k in SBoxKind}

    def __call__(self, kind: SBoxKind, x: int) -> int:
        return self._circuits[kind].evaluate_byte(x)


_BACKENDS: dict[str, object] = {}

BACKEND_NAMES = ("table", "circuit")

SBOX_ENV = "SAES32_SBOX"


def default_backend_name() -> str:
    name = os.environ.get(SBOX_ENV, "table")
    if name not in BACKEND_NAMES:
        raise ValueError(f"{SBOX_ENV}={name!r}; expected one of {BACKEND_NAMES}")
    return name


def get_backend(sbox=None):
    """Resolve ``"table"``, ``"circuit"``, ``None`` (env default) or a callable."""
    if sbox is None:
        sbox = default_backend_name()
    if callable(sbox):
        return sbox
    if sbox not in BACKEND_NAMES:
        raise ValueError(f"unknown S-box backend {sbox!r}")
    if sbox not in _BACKENDS:
        _BACKENDS[sbox] = TableSBox() if sbox == "table" else CircuitSBox()
    return _BACKENDS[sbox]


def saes32(rs1: int, rs2: int, fn: FnCode, sbox=None) -> int:
    """Evaluate one SAES32/SSM4 instruction on 32-bit operands."""
    lookup = get_backend(sbox)
    shift = 8 * fn.byte_ix
    s = lookup(SBOX_OF[fn.op], (rs2 >> shift) & 0xFF)
    return (rs1 ^ rotl32(expand(fn.op, s), shift)) & MASK32


def saes32_rv64(rs1: int, rs2: int, fn: FnCode, sbox=None) -> int:
    """RV64 form: operands truncated to 32 bits, result zero-extended."""
    return saes32(rs1 & MASK32, rs2 & MASK32, fn, sbox)


#   --- binary encoding -----------------------------------------------------

@dataclass(frozen=True)
class EncodedInstr:
    word: int
    rd: int
    rs1: int
    rs2: int
    fn: FnCode

    def disasm(self) -> str:
        return (f"{self.fn.mnemonic} x{self.rd}, x{self.rs1}, x{self.rs2}, "
                f"{self.fn.byte_ix}")


def _fn_of(op, byte_ix=None) -> FnCode:
    if isinstance(op, FnCode):
        if byte_ix is not None and byte_ix != op.byte_ix:
            raise ValueError("conflicting byte index")
        return op
    if isinstance(op, str):
        try:
            op = OP_BY_MNEMONIC[op]
        except KeyError:
            raise InvalidInstruction(f"unknown mnemonic {op!r}") from None
    return FnCode(op, 0 if byte_ix is None else byte_ix)


def encode(op, rd: int, rs1: int, rs2: int, byte_ix: int | None = None) -> EncodedInstr:
    """Assemble a custom-0 R-type word. ``op`` is a FnCode, Op or mnemonic."""
    fn = _fn_of(op, byte_ix)
    for name, r in (("rd", rd), ("rs1", rs1), ("rs2", rs2)):
        if not 0 <= r < 32:
            raise ValueError(f"{name}={r} is not a register index")
    word = (fn.bits << 25 | rs2 << 20 | rs1 << 15 | 0b000 << 12
            | rd << 7 | OPCODE_CUSTOM0)
    return EncodedInstr(word, rd, rs1, rs2, fn)


def decode(word: int) -> EncodedInstr:
    if not 0 <= word <= MASK32:
        raise InvalidInstruction(f"not a 32-bit word: {word:#x}")
    if word & 0x7F != OPCODE_CUSTOM0:
        raise InvalidInstruction(f"opcode {word & 0x7F:07b} is not custom-0")
    if (word >> 12) & 7:
        raise InvalidInstruction("funct3 must be 000")
    if word >> 30:
        raise InvalidInstruction("funct7[6:5] must be 00")
    fn = FnCode.from_bits((word >> 25) & 0x1F)
    return EncodedInstr(word, (word >> 7) & 0x1F, (word >> 15) & 0x1F,
                        (word >> 20) & 0x1F, fn)


def disasm(word: int) -> str:
    return decode(word).disasm()


def assemble(line: str) -> EncodedInstr:
    """Parse ``<mnemonic> xD, xS1, xS2, <byte_ix>`` back into an encoding."""
    mn, _, rest = line.strip().partition(" ")
    args = [a.strip() for a in rest.split(",")]
    if len(args) != 4:
        raise ValueError(f"expected 4 operands: {line!r}")
    regs = []
    for a in args[:3]:
        if not a.startswith("x") or not a[1:].isdigit():
            raise ValueError(f"bad register {a!r}")
        regs.append(int(a[1:]))
    return encode(mn, *regs, byte_ix=int(args[3], 0))


#   --- execution context ---------------------------------------------------

class Core:
    """Counted execution of the modeled instructions.

    Every operation the cipher routines perform goes through one of these
    methods, so the attached trace is a complete instruction census.
    """

    def __init__(self, sbox=None, trace: InstrTrace | None = None):
        self.lookup = get_backend(sbox)
        self.trace = trace

    def _rec(self, cls: str, n: int = 1) -> None:
        if self.trace is not None:
            self.trace.record(cls, n)

    def op(self, op: Op, rs1: int, rs2: int, bi: int) -> int:
        self._rec(MNEMONICS[op])
        return saes32(rs1, rs2, FnCode(op, bi), self.lookup)

    def encsm(self, rs1, rs2, bi):
        return self.op(Op.ENCSM, rs1, rs2, bi)

    def encs(self, rs1, rs2, bi):
        return self.op(Op.ENCS, rs1, rs2, bi)

    def decsm(self, rs1, rs2, bi):
        return self.op(Op.DECSM, rs1, rs2, bi)

    def decs(self, rs1, rs2, bi):
        return self.op(Op.DECS, rs1, rs2, bi)

    def _x4(self, op: Op, rs1: int, rs2: int) -> int:
        macro = self.trace is not None and self.trace.macro_aware
        if macro:
            self._rec(MNEMONICS[op] + "4")
        for bi in range(4):
            if not macro:
                self._rec(MNEMONICS[op])
            rs1 = saes32(rs1, rs2, FnCode(op, bi), self.lookup)
        return rs1

    def ssm4_ed4(self, rs1, rs2):
        """Pseudo-instruction: ssm4.ed with byte index 0, 1, 2, 3."""
        return self._x4(Op.SM4_ED, rs1, rs2)

    def ssm4_ks4(self, rs1, rs2):
        return self._x4(Op.SM4_KS, rs1, rs2)

    def xor(self, a: int, b: int) -> int:
        self._rec(XOR)
        return a ^ b

    def rotr(self, x: int, n: int) -> int:
        #   srli + slli + or on base RV32I
        self._rec(ALU, 3)
        return rotl32(x, 32 - n)

    def lw_subkey(self, words, i: int) -> int:
        self._rec(LOAD_SUBKEY)
        return words[i]

    def lw_const(self, words, i: int) -> int:
        self._rec(LOAD_CONST)
        return words[i]
