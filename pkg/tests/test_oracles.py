"""The reference oracles must agree with published vectors and an external library."""

import os

import pytest

import oracles

FIPS_PT = bytes.fromhex("00112233445566778899aabbccddeeff")
FIPS = [
    (bytes(range(16)), "69c4e0d86a7b0430d8cdb78070b4c55a"),
    (bytes(range(24)), "dda97ca4864cdfe06eaf70a0ec0d7191"),
    (bytes(range(32)), "8ea2b7ca516745bfeafc49904b496089"),
]
SM4_KEY = bytes.fromhex("0123456789abcdeffedcba9876543210")


def test_oracle_aes_sbox_spot_values():
    assert oracles.AES_SBOX[0x00] == 0x63
    assert oracles.AES_SBOX[0x53] == 0xED
    assert sorted(oracles.AES_SBOX) == list(range(256))


@pytest.mark.parametrize("key,ct", FIPS)
def test_oracle_aes_fips(key, ct):
    assert oracles.aes_encrypt(key, FIPS_PT).hex() == ct
    assert oracles.aes_decrypt(key, bytes.fromhex(ct)) == FIPS_PT


def test_oracle_sm4_standard():
    assert oracles.sm4_round_keys(SM4_KEY)[0] == 0xF12186F9
    assert oracles.sm4_encrypt(SM4_KEY, SM4_KEY).hex() == "681edf34d206965e86b3e94f536e4246"


def test_oracles_match_cryptography_library():
    ciphers = pytest.importorskip("cryptography.hazmat.primitives.ciphers")
    for _ in range(20):
        for n in (16, 24, 32):
            key, pt = os.urandom(n), os.urandom(16)
            enc = ciphers.Cipher(ciphers.algorithms.AES(key), ciphers.modes.ECB()).encryptor()
            assert oracles.aes_encrypt(key, pt) == enc.update(pt) + enc.finalize()
        key, pt = os.urandom(16), os.urandom(16)
        try:
            enc = ciphers.Cipher(ciphers.algorithms.SM4(key), ciphers.modes.ECB()).encryptor()
        except Exception:
            continue
        assert oracles.sm4_encrypt(key, pt) == enc.update(pt) + enc.finalize()
