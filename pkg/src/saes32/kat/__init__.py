"""Known-answer vectors in ``KEY=<hex> PT=<hex> CT=<hex> [ITER=<n>]`` lines."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class Vector:
    alg: str
    key: bytes
    pt: bytes
    ct: bytes
    iterations: int = 1
    line: int = 0

    @property
    def name(self) -> str:
        it = f" x{self.iterations}" if self.iterations > 1 else ""
        return f"{self.alg}-{8 * len(self.key) if self.alg == 'aes' else 128}{it}"


def parse_hex(text: str, what: str = "value") -> bytes:
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise FixtureError(f"malformed hex for {what}: {text!r}") from None


def parse_fixture(text: str, alg: str) -> list[Vector]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = {}
        for tok in line.split():
            k, sep, v = tok.partition("=")
            if not sep:
                raise FixtureError(f"line {n}: expected KEY=VALUE, got {tok!r}")
            fields[k.upper()] = v
        missing = {"KEY", "PT", "CT"} - fields.keys()
        if missing:
            raise FixtureError(f"line {n}: missing {', '.join(sorted(missing))}")
        try:
            it = int(fields.get("ITER", "1"))
        except ValueError:
            raise FixtureError(f"line {n}: bad ITER") from None
        out.append(Vector(alg, parse_hex(fields["KEY"], "KEY"), parse_hex(fields["PT"], "PT"),
                          parse_hex(fields["CT"], "CT"), it, n))
    return out


def load_fixture(path: str | Path, alg: str) -> list[Vector]:
    return parse_fixture(Path(path).read_text(), alg)


def embedded(alg: str) -> list[Vector]:
    """The vectors shipped with the package (``aes`` or ``sm4``)."""
    text = resources.files(__name__).joinpath(f"{alg}.txt").read_text()
    return parse_fixture(text, alg)


def run_vector(v: Vector, sbox=None, otf: bool = False) -> list[tuple[str, bool]]:
    """Check encryption and decryption of one vector; returns (label, ok) pairs."""
    from .. import aes, sm4
    if v.alg == "aes":
        ks = aes.aes_key_expand(v.key, sbox=sbox)
        ct = aes.aes_encrypt_block(ks, v.pt, sbox=sbox)
        res = [(f"{v.name} enc", ct == v.ct)]
        if otf:
            res.append((f"{v.name} enc-otf", aes.aes_encrypt_otf(v.key, v.pt, sbox=sbox) == v.ct))
        dks = aes.aes_dec_key_expand(ks, sbox=sbox)
        res.append((f"{v.name} dec", aes.aes_decrypt_block(dks, v.ct, sbox=sbox) == v.pt))
        return res
    ks = sm4.sm4_key_expand(v.key, sbox=sbox)
    if v.iterations > 1:
        return [(f"{v.name} enc", sm4.sm4_encrypt_iterated(ks, v.pt, v.iterations, sbox) == v.ct)]
    return [(f"{v.name} enc", sm4.sm4_encrypt_block(ks, v.pt, sbox=sbox) == v.ct),
            (f"{v.name} dec", sm4.sm4_decrypt_block(ks, v.ct, sbox=sbox) == v.pt)]
