"""Table-level AES, AES^-1 and SM4 S-boxes, built from GF(2^8) inversion.

Both ciphers use an inversion-based ("Nyberg") S-box: a field inversion
wrapped in affine maps. The tables here are derived algebraically and are
cross-checked in the test-suite against the published tables.
"""

from __future__ import annotations

import enum
from functools import lru_cache


class SBoxKind(enum.Enum):
    AES = "aes"
    AES_INV = "aes_inv"
    SM4 = "sm4"


#   reduction polynomials, bit 8 included
AES_POLY = 0x11B    #   x^8 + x^4 + x^3 + x + 1
SM4_POLY = 0x1F5    #   x^8 + x^7 + x^6 + x^5 + x^4 + x^2 + 1

POLYS = {"aes": AES_POLY, "sm4": SM4_POLY}


class ConfigError(ValueError):
    """Unknown or invalid configuration value."""


def _poly(poly: int | str) -> int:
    if isinstance(poly, str):
        try:
            return POLYS[poly.lower()]
        except KeyError:
            raise ConfigError(f"unknown polynomial {poly!r}") from None
    if poly not in (AES_POLY, SM4_POLY):
        raise ConfigError(f"unsupported reduction polynomial 0x{poly:x}")
    return poly


def gf256_mul(a: int, b: int, poly: int | str = AES_POLY) -> int:
    """Multiply two field elements (shift-and-add)."""
    p = _poly(poly)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= p
    return r


def gf256_inv(a: int, poly: int | str = AES_POLY) -> int:
    """Multiplicative inverse via a^254; maps 0 to 0."""
    p = _poly(poly)
    #   square-and-multiply, exponent 254 = 0b11111110
    r, x = 1, a
    for bit in range(1, 8):
        x = gf256_mul(x, x, p)
        r = gf256_mul(r, x, p)
    return r


def _rotl8(x: int, n: int) -> int:
    n &= 7
    return ((x << n) | (x >> (8 - n))) & 0xFF


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def aes_affine(x: int) -> int:
    """FIPS-197 output affine map b ^ rotl(b,1..4) ^ 0x63."""
    return x ^ _rotl8(x, 1) ^ _rotl8(x, 2) ^ _rotl8(x, 3) ^ _rotl8(x, 4) ^ 0x63


def aes_affine_inv(x: int) -> int:
    return _rotl8(x, 1) ^ _rotl8(x, 3) ^ _rotl8(x, 6) ^ 0x05


def sm4_affine(x: int) -> int:
    """SM4 affine layer: circulant matrix with row 0xA7, constant 0xD3."""
    y = 0
    for i in range(8):
        y |= _parity(_rotl8(0xA7, i) & x) << i
    return y ^ 0xD3


class SBoxTable:
    """Immutable 256-entry substitution table."""

    __slots__ = ("kind", "_entries")

    def __init__(self, kind: SBoxKind, entries):
        entries = bytes(entries)
        if len(entries) != 256:
            raise ValueError("S-box table needs 256 entries")
        self.kind = kind
        self._entries = entries

    def __getitem__(self, x: int) -> int:
        return self._entries[x]

    def __len__(self) -> int:
        return 256

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, SBoxTable):
            return self._entries == other._entries
        try:
            return self._entries == bytes(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._entries)

    def __repr__(self):
        return f"SBoxTable({self.kind.name})"

    def to_bytes(self) -> bytes:
        return self._entries

    def is_bijection(self) -> bool:
        return len(set(self._entries)) == 256

    def inverse(self) -> bytes:
        inv = bytearray(256)
        for x, y in enumerate(self._entries):
            inv[y] = x
        return bytes(inv)

    def max_differential(self) -> int:
        """Largest entry of the difference distribution table (dx != 0)."""
        s = self._entries
        best = 0
        for dx in range(1, 256):
            row = [0] * 256
            for x in range(256):
                row[s[x] ^ s[x ^ dx]] += 1
            best = max(best, max(row))
        return best


@lru_cache(maxsize=None)
def build_aes_sbox() -> SBoxTable:
    return SBoxTable(SBoxKind.AES,
                     (aes_affine(gf256_inv(x, AES_POLY)) for x in range(256)))


@lru_cache(maxsize=None)
def build_aes_inv_sbox() -> SBoxTable:
    return SBoxTable(SBoxKind.AES_INV,
                     (gf256_inv(aes_affine_inv(x), AES_POLY) for x in range(256)))


@lru_cache(maxsize=None)
def build_sm4_sbox() -> SBoxTable:
    return SBoxTable(SBoxKind.SM4,
                     (sm4_affine(gf256_inv(sm4_affine(x), SM4_POLY))
                      for x in range(256)))


def sbox_table(kind: SBoxKind | str) -> SBoxTable:
    kind = SBoxKind(kind) if isinstance(kind, str) else kind
    return {
        SBoxKind.AES: build_aes_sbox,
        SBoxKind.AES_INV: build_aes_inv_sbox,
        SBoxKind.SM4: build_sm4_sbox,
    }[kind]()
