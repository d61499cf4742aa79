import os
import random

import pytest

import oracles
from saes32.aes import (AesKeySchedule, aes_dec_key_expand, aes_decrypt, aes_decrypt_block,
                        aes_encrypt, aes_encrypt_block, aes_encrypt_otf, aes_key_expand,
                        inv_mixcolumns_word)
from saes32.isa import Core
from saes32.trace import InstrTrace

PT = bytes.fromhex("00112233445566778899aabbccddeeff")
FIPS = {16: "69c4e0d86a7b0430d8cdb78070b4c55a", 24: "dda97ca4864cdfe06eaf70a0ec0d7191",
        32: "8ea2b7ca516745bfeafc49904b496089"}


@pytest.mark.parametrize("n", [16, 24, 32])
def test_fips_vectors(n):
    key = bytes(range(n))
    ct = aes_encrypt(key, PT)
    assert ct.hex() == FIPS[n]
    assert aes_decrypt(key, ct) == PT


@pytest.mark.parametrize("n", [16, 24, 32])
def test_random_against_oracle(n):
    rng = random.Random(n)
    for _ in range(25):
        key, pt = rng.randbytes(n), rng.randbytes(16)
        ct = oracles.aes_encrypt(key, pt)
        assert aes_encrypt(key, pt) == ct
        assert aes_decrypt(key, ct) == pt
        assert aes_encrypt_otf(key, pt) == ct


def test_schedule_matches_oracle():
    for n in (16, 24, 32):
        key = os.urandom(n)
        ks = aes_key_expand(key)
        flat = b"".join(w.to_bytes(4, "little") for w in ks.words)
        assert flat == b"".join(bytes(r) for r in oracles.aes_expand(key))


def test_zero_key_decrypts_to_zero():
    z = bytes(16)
    assert aes_decrypt(z, aes_encrypt(z, z)) == z


def test_inv_mixcolumns_word():
    rng = random.Random(5)
    c = Core()
    for _ in range(100):
        col = rng.randbytes(4)
        want = bytes(oracles._mix(list(col), oracles._IMC))
        got = inv_mixcolumns_word(c, int.from_bytes(col, "little"))
        assert got.to_bytes(4, "little") == want


def test_decrypt_with_forward_schedule():
    key = os.urandom(16)
    ks = aes_key_expand(key)
    ct = aes_encrypt_block(ks, PT)
    assert aes_decrypt_block(ks, ct) == PT
    dks = aes_dec_key_expand(ks)
    assert dks.inverse and aes_dec_key_expand(dks) is dks
    assert aes_decrypt_block(dks, ct) == PT


def test_encrypt_rejects_inverse_schedule():
    with pytest.raises(ValueError):
        aes_encrypt_block(aes_dec_key_expand(bytes(16)), PT)


def test_bad_sizes():
    with pytest.raises(ValueError):
        aes_key_expand(bytes(20))
    with pytest.raises(ValueError):
        aes_encrypt(bytes(16), bytes(15))
    with pytest.raises(ValueError):
        AesKeySchedule(tuple(range(44)), 12, 128)


@pytest.mark.parametrize("bits,rounds", [(128, 10), (192, 12), (256, 14)])
def test_census(bits, rounds):
    key = bytes(bits // 8)
    tr = InstrTrace()
    aes_encrypt_block(aes_key_expand(key), PT, tr)
    assert tr.saes32 == 16 * rounds
    assert tr["saes32.encsm"] == 16 * (rounds - 1)
    assert tr["saes32.encs"] == 16
    assert tr["lw.subkey"] == 4 * (rounds + 1)
    assert tr.xor == 4
    assert all(r["saes32.encsm"] + r["saes32.encs"] == 16 for r in tr.rounds[1:])

    dt = InstrTrace()
    aes_decrypt_block(aes_dec_key_expand(key), PT, dt)
    assert dt["saes32.decsm"] == 16 * (rounds - 1)
    assert dt["saes32.decs"] == 16
    assert dt["lw.subkey"] == 4 * (rounds + 1)


def test_otf_no_loads():
    tr = InstrTrace()
    aes_encrypt_otf(bytes(range(16)), PT, tr)
    assert tr.loads == 0
    assert tr["saes32.encsm"] == 144


def test_dec_schedule_uses_only_modeled_instructions():
    tr = InstrTrace()
    aes_dec_key_expand(aes_key_expand(bytes(16)), tr)
    # 9 inner round keys x 4 words x (4 encs + 4 decsm)
    assert tr["saes32.encs"] == 144
    assert tr["saes32.decsm"] == 144
    assert set(tr.totals) == {"saes32.encs", "saes32.decsm"}


def test_circuit_backend_same_ciphertext():
    key = os.urandom(32)
    assert aes_encrypt(key, PT, sbox="circuit") == aes_encrypt(key, PT, sbox="table")
