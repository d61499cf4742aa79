"""Executable model of the SAES32 / SSM4 scalar AES and SM4 instructions."""

from .aes import (AesKeySchedule, aes_dec_key_expand, aes_decrypt_block, aes_encrypt_block,
                  aes_encrypt_otf, aes_key_expand)
from .isa import (Core, EncodedInstr, FnCode, InvalidInstruction, Op, decode, disasm, encode,
                  expand, mnemonic, saes32, saes32_rv64)
from .sm4 import (Sm4KeySchedule, ck_constants, sm4_decrypt_block, sm4_encrypt_block,
                  sm4_encrypt_iterated, sm4_key_expand)
from .trace import InstrTrace

__version__ = "0.1.0"

__all__ = [
    "AesKeySchedule", "Core", "EncodedInstr", "FnCode", "InstrTrace", "InvalidInstruction",
    "Op", "Sm4KeySchedule", "aes_dec_key_expand", "aes_decrypt_block", "aes_encrypt_block",
    "aes_encrypt_otf", "aes_key_expand", "ck_constants", "decode", "disasm", "encode", "expand",
    "mnemonic", "saes32", "saes32_rv64", "sm4_decrypt_block", "sm4_encrypt_block",
    "sm4_encrypt_iterated", "sm4_key_expand",
]
