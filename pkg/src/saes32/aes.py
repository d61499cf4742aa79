"""AES-128/192/256 built only from saes32 instructions, XORs and subkey loads.

State and round keys are little-endian 32-bit words, one AES column per
word (register byte i = row i). Each round rewrites one set of four
registers into the other: the destination set is initialised with the four
round-key words, then each word takes four ``saes32.encsm`` steps, which
fold in SubBytes, ShiftRows (through the byte selection), MixColumns and
AddRoundKey. The last round uses ``saes32.encs``.
"""

from __future__ import annotations

import struct
from contextlib import nullcontext
from dataclasses import dataclass

from .isa import Core, rotl32
from .trace import InstrTrace

ROUNDS = {128: 10, 192: 12, 256: 14}


@dataclass(frozen=True)
class AesKeySchedule:
    """Round-key words in the order the block routine consumes them.

    ``inverse`` marks an equivalent-inverse-cipher schedule: reversed
    round order, InvMixColumns applied to the inner round keys.
    """

    words: tuple[int, ...]
    rounds: int
    key_size: int
    inverse: bool = False

    def __post_init__(self):
        if ROUNDS.get(self.key_size) != self.rounds:
            raise ValueError(f"AES-{self.key_size} has {ROUNDS.get(self.key_size)} rounds, "
                             f"not {self.rounds}")
        if len(self.words) != 4 * self.rounds + 4:
            raise ValueError(f"expected {4 * self.rounds + 4} subkey words")


def block_to_words(block: bytes) -> list[int]:
    if len(block) != 16:
        raise ValueError(f"block must be 16 bytes, got {len(block)}")
    return list(struct.unpack("<4I", block))


def words_to_block(words) -> bytes:
    return struct.pack("<4I", *words)


def _round_ctx(trace):
    return trace.round() if trace is not None else nullcontext()


def _key_size(key: bytes) -> int:
    if len(key) not in (16, 24, 32):
        raise ValueError(f"AES key must be 16, 24 or 32 bytes, got {len(key)}")
    return 8 * len(key)


class _KeyWords:
    """Incremental FIPS-197 key expansion on the modeled instructions."""

    def __init__(self, core: Core, key: bytes):
        self.core = core
        self.nk = len(key) // 4
        self.w = list(struct.unpack(f"<{self.nk}I", key))
        self.rcon = 1

    def next(self) -> int:
        core, nk, w = self.core, self.nk, self.w
        i = len(w)
        t = w[i - 1]
        new = w[i - nk]
        if i % nk == 0:
            t = core.rotr(t, 8)                 # RotWord
            for bi in range(4):
                new = core.encs(new, t, bi)     # ^= SubWord
            new = core.xor(new, self.rcon)      # xori, rcon is an immediate
            self.rcon = (self.rcon << 1) ^ (0x11B if self.rcon & 0x80 else 0)
        elif nk == 8 and i % 8 == 4:
            for bi in range(4):
                new = core.encs(new, t, bi)
        else:
            new = core.xor(new, t)
        w.append(new)
        return new


def aes_key_expand(key: bytes, trace: InstrTrace | None = None, sbox=None) -> AesKeySchedule:
    size = _key_size(key)
    rounds = ROUNDS[size]
    kw = _KeyWords(Core(sbox, trace), key)
    while len(kw.w) < 4 * rounds + 4:
        kw.next()
    return AesKeySchedule(tuple(kw.w), rounds, size)


def inv_mixcolumns_word(core: Core, w: int) -> int:
    """InvMixColumns of one column using only encs then decsm (decs undoes nothing)."""
    s = 0
    for bi in range(4):
        s = core.encs(s, w, bi)        # SubBytes, no mixing
    t = 0
    for bi in range(4):
        t = core.decsm(t, s, bi)       # InvSubBytes cancels, InvMixColumns remains
    return t


def aes_dec_key_expand(key_or_schedule, trace: InstrTrace | None = None,
                       sbox=None) -> AesKeySchedule:
    """Equivalent-inverse-cipher schedule."""
    ks = key_or_schedule
    if not isinstance(ks, AesKeySchedule):
        ks = aes_key_expand(ks, trace, sbox)
    if ks.inverse:
        return ks
    core = Core(sbox, trace)
    r, rk = ks.rounds, ks.words
    out = list(rk[4 * r:4 * r + 4])
    for rnd in range(r - 1, 0, -1):
        out += [inv_mixcolumns_word(core, rk[4 * rnd + j]) for j in range(4)]
    out += rk[0:4]
    return AesKeySchedule(tuple(out), r, ks.key_size, inverse=True)


def _enc_round(core: Core, rk, off: int, t: list[int], op) -> list[int]:
    u = [core.lw_subkey(rk, off + j) for j in range(4)]
    for j in range(4):
        for i in range(4):
            u[j] = op(u[j], t[(j + i) & 3], i)
    return u


def _dec_round(core: Core, rk, off: int, t: list[int], op) -> list[int]:
    u = [core.lw_subkey(rk, off + j) for j in range(4)]
    for j in range(4):
        for i in range(4):
            u[j] = op(u[j], t[(j - i) & 3], i)
    return u


def _whiten(core: Core, rk, block: bytes) -> list[int]:
    return [core.xor(x, core.lw_subkey(rk, j)) for j, x in enumerate(block_to_words(block))]


def aes_encrypt_block(ks: AesKeySchedule, pt: bytes, trace: InstrTrace | None = None,
                      sbox=None) -> bytes:
    if ks.inverse:
        raise ValueError("encryption needs the forward key schedule")
    core = Core(sbox, trace)
    rk = ks.words
    with _round_ctx(trace):
        t = _whiten(core, rk, pt)
    for rnd in range(1, ks.rounds):
        with _round_ctx(trace):
            t = _enc_round(core, rk, 4 * rnd, t, core.encsm)
    with _round_ctx(trace):
        t = _enc_round(core, rk, 4 * ks.rounds, t, core.encs)
    return words_to_block(t)


def aes_decrypt_block(ks: AesKeySchedule, ct: bytes, trace: InstrTrace | None = None,
                      sbox=None) -> bytes:
    """Decrypt; a forward schedule is converted first (not counted in ``trace``)."""
    if not ks.inverse:
        ks = aes_dec_key_expand(ks, None, sbox)
    core = Core(sbox, trace)
    rk = ks.words
    with _round_ctx(trace):
        t = _whiten(core, rk, ct)
    for rnd in range(1, ks.rounds):
        with _round_ctx(trace):
            t = _dec_round(core, rk, 4 * rnd, t, core.decsm)
    with _round_ctx(trace):
        t = _dec_round(core, rk, 4 * ks.rounds, t, core.decs)
    return words_to_block(t)


def aes_encrypt_otf(key: bytes, pt: bytes, trace: InstrTrace | None = None,
                    sbox=None) -> bytes:
    """Encrypt with round keys computed in registers as they are needed.

    No subkey is ever loaded from memory. The key words and round-constant
    immediates model fully unrolled code.
    """
    rounds = ROUNDS[_key_size(key)]
    core = Core(sbox, trace)
    kw = _KeyWords(core, key)

    def rk(i):
        while len(kw.w) <= i:
            kw.next()
        return kw.w[i]

    with _round_ctx(trace):
        t = [core.xor(x, rk(j)) for j, x in enumerate(block_to_words(pt))]
    for rnd in range(1, rounds + 1):
        op = core.encsm if rnd < rounds else core.encs
        with _round_ctx(trace):
            u = [rk(4 * rnd + j) for j in range(4)]
            for j in range(4):
                for i in range(4):
                    u[j] = op(u[j], t[(j + i) & 3], i)
            t = u
    return words_to_block(t)


def aes_encrypt(key: bytes, pt: bytes, sbox=None) -> bytes:
    return aes_encrypt_block(aes_key_expand(key, sbox=sbox), pt, sbox=sbox)


def aes_decrypt(key: bytes, ct: bytes, sbox=None) -> bytes:
    return aes_decrypt_block(aes_dec_key_expand(key, sbox=sbox), ct, sbox=sbox)


__all__ = [
    "AesKeySchedule", "ROUNDS", "aes_key_expand", "aes_dec_key_expand",
    "aes_encrypt_block", "aes_decrypt_block", "aes_encrypt_otf",
    "aes_encrypt", "aes_decrypt", "block_to_words", "words_to_block",
    "inv_mixcolumns_word", "rotl32",
]
