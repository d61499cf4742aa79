"""SM4-128 on the ssm4.ed / ssm4.ks instructions.

Words are held in register order (little-endian loads of the big-endian
words the standard uses); the byte flip built into the instruction's
linear expansion makes that work without any byte swapping. Four steps
make a round: each ``ssm4.ed4`` group replaces one state word, and the
input-mixing XORs are shared pairwise between steps, ten per round.
"""

from __future__ import annotations

import struct
from contextlib import nullcontext
from dataclasses import dataclass

from .isa import Core, FnCode, Op, bswap32, saes32
from .trace import InstrTrace

#   system parameter FK, big-endian words as published
FK = (0xA3B1BAC6, 0x56AA3350, 0x677D9197, 0xB27022DC)

#   CK as published
CK_TABLE = (
    0x00070E15, 0x1C232A31, 0x383F464D, 0x545B6269,
    0x70777E85, 0x8C939AA1, 0xA8AFB6BD, 0xC4CBD2D9,
    0xE0E7EEF5, 0xFC030A11, 0x181F262D, 0x343B4249,
    0x50575E65, 0x6C737A81, 0x888F969D, 0xA4ABB2B9,
    0xC0C7CED5, 0xDCE3EAF1, 0xF8FF060D, 0x141B2229,
    0x30373E45, 0x4C535A61, 0x686F767D, 0x848B9299,
    0xA0A7AEB5, 0xBCC3CAD1, 0xD8DFE6ED, 0xF4FB0209,
    0x10171E25, 0x2C333A41, 0x484F565D, 0x646B7279,
)


def ck_constants() -> tuple[int, ...]:
    """CK words from byte j of word i = 7 * (4i + j) mod 256 (8-bit adds)."""
    out = []
    b = 0
    for _ in range(32):
        w = 0
        for _ in range(4):
            w = (w << 8) | b
            b = (b + 7) & 0xFF
        out.append(w)
    return tuple(out)


#   register-order copies
_FK_REG = tuple(bswap32(x) for x in FK)
_CK_REG = tuple(bswap32(x) for x in CK_TABLE)


@dataclass(frozen=True)
class Sm4KeySchedule:
    """32 round keys in register order."""

    rk: tuple[int, ...]

    def __post_init__(self):
        if len(self.rk) != 32:
            raise ValueError("SM4 uses 32 round keys")

    def reversed(self) -> "Sm4KeySchedule":
        return Sm4KeySchedule(self.rk[::-1])

    def standard_words(self) -> tuple[int, ...]:
        """Round keys as big-endian words, as printed in the standard."""
        return tuple(bswap32(x) for x in self.rk)


def _round_ctx(trace):
    return trace.round() if trace is not None else nullcontext()


def _load(block: bytes, what: str) -> list[int]:
    if len(block) != 16:
        raise ValueError(f"SM4 {what} must be 16 bytes, got {len(block)}")
    return list(struct.unpack("<4I", block))


def _four_steps(core: Core, x: list[int], k: list[int], op) -> list[int]:
    """x[i] ^= T(x[i+1] ^ x[i+2] ^ x[i+3] ^ k[i]) for i = 0..3, ten XORs."""
    x0, x1, x2, x3 = x
    u = core.xor(x2, x3)
    t = core.xor(u, x1)
    t = core.xor(t, k[0])
    x0 = op(x0, t)
    t = core.xor(u, x0)
    t = core.xor(t, k[1])
    x1 = op(x1, t)
    u = core.xor(x0, x1)
    t = core.xor(u, x3)
    t = core.xor(t, k[2])
    x2 = op(x2, t)
    t = core.xor(u, x2)
    t = core.xor(t, k[3])
    x3 = op(x3, t)
    return [x0, x1, x2, x3]


def sm4_key_expand(key: bytes, trace: InstrTrace | None = None, sbox=None) -> Sm4KeySchedule:
    core = Core(sbox, trace)
    mk = _load(key, "key")
    whiten = trace.scope("whiten") if trace is not None else nullcontext()
    with whiten:
        k = [core.xor(m, f) for m, f in zip(mk, _FK_REG)]
    rk = []
    for blk in range(8):
        with _round_ctx(trace):
            ck = [core.lw_const(_CK_REG, 4 * blk + j) for j in range(4)]
            k = _four_steps(core, k, ck, core.ssm4_ks4)
        rk += k
    return Sm4KeySchedule(tuple(rk))


def _crypt(core: Core, rk, block: bytes, trace) -> bytes:
    x = _load(block, "block")
    for rnd in range(8):
        with _round_ctx(trace):
            k = [core.lw_subkey(rk, 4 * rnd + j) for j in range(4)]
            x = _four_steps(core, x, k, core.ssm4_ed4)
    return struct.pack("<4I", *x[::-1])


def sm4_encrypt_block(ks: Sm4KeySchedule, pt: bytes, trace: InstrTrace | None = None,
                      sbox=None) -> bytes:
    return _crypt(Core(sbox, trace), ks.rk, pt, trace)


def sm4_decrypt_block(ks: Sm4KeySchedule, ct: bytes, trace: InstrTrace | None = None,
                      sbox=None) -> bytes:
    """Same routine and instructions as encryption, round keys reversed."""
    return _crypt(Core(sbox, trace), ks.rk[::-1], ct, trace)


def sm4_encrypt(key: bytes, pt: bytes, sbox=None) -> bytes:
    return sm4_encrypt_block(sm4_key_expand(key, sbox=sbox), pt, sbox=sbox)


def sm4_decrypt(key: bytes, ct: bytes, sbox=None) -> bytes:
    return sm4_decrypt_block(sm4_key_expand(key, sbox=sbox), ct, sbox=sbox)


#   --- iterated encryption ---------------------------------------------------

def ed4_tables(sbox=None) -> list[list[int]]:
    """ssm4.ed4 decomposed per byte lane: tables[i][b] = ssm4.ed(0, b << 8i, i).

    Since the instruction is linear in rs1 and touches one byte of rs2,
    ssm4.ed4(x, t) == x ^ tables[0][t0] ^ tables[1][t1] ^ ... exactly.
    """
    return [[saes32(0, b << (8 * i), FnCode(Op.SM4_ED, i), sbox) for b in range(256)]
            for i in range(4)]


def _iterate_py(tab, rk, x, n):
    t0, t1, t2, t3 = tab
    x0, x1, x2, x3 = x
    for _ in range(n):
        for r in range(0, 32, 4):
            u = x2 ^ x3
            t = u ^ x1 ^ rk[r]
            x0 ^= t0[t & 255] ^ t1[(t >> 8) & 255] ^ t2[(t >> 16) & 255] ^ t3[t >> 24]
            t = u ^ x0 ^ rk[r + 1]
            x1 ^= t0[t & 255] ^ t1[(t >> 8) & 255] ^ t2[(t >> 16) & 255] ^ t3[t >> 24]
            u = x0 ^ x1
            t = u ^ x3 ^ rk[r + 2]
            x2 ^= t0[t & 255] ^ t1[(t >> 8) & 255] ^ t2[(t >> 16) & 255] ^ t3[t >> 24]
            t = u ^ x2 ^ rk[r + 3]
            x3 ^= t0[t & 255] ^ t1[(t >> 8) & 255] ^ t2[(t >> 16) & 255] ^ t3[t >> 24]
        x0, x1, x2, x3 = x3, x2, x1, x0
    return x0, x1, x2, x3


_kernel = None


def _compiled():
    global _kernel
    if _kernel is None:
        try:
            import numba
        except ImportError:     # pragma: no cover
            _kernel = False
        else:
            _kernel = numba.njit(cache=False)(_iterate_py)
    return _kernel


def sm4_encrypt_iterated(ks: Sm4KeySchedule, block: bytes, n: int, sbox=None,
                         compiled: bool = True) -> bytes:
    """Encrypt ``block`` n times in a row with the ed4 lane tables.

    The tables are tabulated from the instruction model; with numba
    available the loop is JIT-compiled.
    """
    tab = ed4_tables(sbox)
    x = tuple(_load(block, "block"))
    kern = _compiled() if compiled else False
    if kern:
        import numpy as np
        arr = np.array(tab, dtype=np.uint32)
        out = kern((arr[0], arr[1], arr[2], arr[3]), np.array(ks.rk, dtype=np.uint32),
                   tuple(np.uint32(v) for v in x), n)
        out = [int(v) for v in out]
    else:
        out = _iterate_py(tab, ks.rk, x, n)
    return struct.pack("<4I", *out)
