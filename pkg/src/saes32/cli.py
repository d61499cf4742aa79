"""Command-line front end: ``saes32 <subcommand> ...``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import aes, kat, profiler, sm4
from .isa import InvalidInstruction, decode
from .sbox import ConfigError

ALGS = ("aes128", "aes192", "aes256", "sm4")


class UsageError(Exception):
    pass


def _hex(what: str, n: int | None = None):
    def conv(text: str) -> bytes:
        t = text.strip().lower().removeprefix("0x").replace("_", "")
        try:
            b = bytes.fromhex(t)
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed hex for {what}: {text!r}") from None
        if n is not None and len(b) != n:
            raise argparse.ArgumentTypeError(f"{what} must be {n} bytes, got {len(b)}")
        return b
    return conv


def _sbox_default() -> str:
    return os.environ.get("SAES32_SBOX", "table")


def _add_sbox(p):
    p.add_argument("--sbox", choices=("table", "circuit"), default=None,
                   help="S-box backend (default: $SAES32_SBOX or 'table')")


def _sbox(args) -> str:
    s = args.sbox or _sbox_default()
    if s not in ("table", "circuit"):
        raise UsageError(f"SAES32_SBOX must be 'table' or 'circuit', got {s!r}")
    return s


#   --- subcommands -------------------------------------------------------------

def cmd_kat(args, out) -> int:
    sb = _sbox(args)
    vecs = []
    try:
        if args.fixture:
            for f in args.fixture:
                alg = "sm4" if "sm4" in Path(f).name.lower() else "aes"
                vecs += kat.load_fixture(f, args.alg or alg)
        else:
            vecs = kat.embedded("aes") + kat.embedded("sm4")
    except (OSError, kat.FixtureError) as e:
        raise UsageError(str(e)) from None
    if args.quick:
        vecs = [v for v in vecs if v.iterations == 1]
    ok = True
    for v in vecs:
        for label, good in kat.run_vector(v, sbox=sb, otf=True):
            print(f"{'PASS' if good else 'FAIL'}  {label}", file=out)
            ok &= good
    print("ALL PASS" if ok else "FAILED", file=out)
    return 0 if ok else 1


def _crypt(args, out, decrypt: bool) -> int:
    sb = _sbox(args)
    if args.alg == "sm4":
        if args.otf:
            raise UsageError("--otf applies to AES only")
        if len(args.key) != 16:
            raise UsageError("SM4 key must be 16 bytes")
        fn = sm4.sm4_decrypt if decrypt else sm4.sm4_encrypt
        res = fn(args.key, args.block, sbox=sb)
    else:
        bits = int(args.alg[3:])
        if len(args.key) * 8 != bits:
            raise UsageError(f"{args.alg} key must be {bits // 8} bytes")
        if args.otf and decrypt:
            raise UsageError("on-the-fly keying is available for encryption only")
        if args.otf:
            res = aes.aes_encrypt_otf(args.key, args.block, sbox=sb)
        elif decrypt:
            res = aes.aes_decrypt(args.key, args.block, sbox=sb)
        else:
            res = aes.aes_encrypt(args.key, args.block, sbox=sb)
    print(res.hex(), file=out)
    return 0


def cmd_enc(args, out) -> int:
    return _crypt(args, out, False)


def cmd_dec(args, out) -> int:
    return _crypt(args, out, True)


def cmd_census(args, out) -> int:
    sb = _sbox(args)
    try:
        work = args.workload or list(profiler.WORKLOADS)
        cs = {w: profiler.census(w, sb, macro_aware=args.macro) for w in work}
    except ConfigError as e:
        raise UsageError(str(e)) from None
    recs = profiler.census_records(cs)
    print(profiler.format_table(recs, profiler.CENSUS_COLUMNS), file=out)

    base = {w: profiler.census(w, sb) for w in ("aes128-enc", "sm4-enc")}
    rep = profiler.compare_baseline(base)
    print("\nper-round comparison (ratio = baseline / extension)", file=out)
    print(profiler.format_table(rep.records()), file=out)
    o = profiler.otf_overhead(128, sb)
    print(f"\naes128 on-the-fly keying: {o.otf_arith} instructions, 0 subkey loads; "
          f"precomputed {o.pre_arith} + {o.pre_loads} loads; "
          f"overhead {o.ratio:.3f}x (arithmetic only {o.arith_ratio:.3f}x)", file=out)

    if args.csv:
        Path(args.csv).write_text(profiler.to_csv(recs, profiler.CENSUS_COLUMNS))
        cmp_path = Path(args.csv).with_name(Path(args.csv).stem + "_compare.csv")
        cmp_path.write_text(profiler.to_csv(rep.records()))
        print(f"wrote {args.csv} and {cmp_path}", file=out)
    if args.plot:
        from .plotting import plot_census
        print(f"wrote {plot_census(recs, args.plot)}", file=out)
    return 0


GATE_COLUMNS = ("component", "inputs", "outputs", "xor", "xnor", "and", "total", "depth",
                "expected", "match")


def cmd_gates(args, out) -> int:
    from .circuit import gate_table
    rows = gate_table()
    recs = []
    for r in rows:
        e = r["expected"]
        recs.append({**{k: r[k] for k in GATE_COLUMNS if k != "expected"},
                     "expected": f"{e['xor']}/{e['xnor']}/{e['and']}/{e['total']}",
                     "match": "yes" if r["match"] else "NO"})
    print(profiler.format_table(recs, GATE_COLUMNS), file=out)
    print("\ncounts are algebraic gate counts; depth is the longest input-to-output "
          "path in gates. FPGA LUT and standard-cell area/timing figures need a "
          "synthesis toolchain and are not reproduced.", file=out)
    if args.csv:
        Path(args.csv).write_text(profiler.to_csv(recs, GATE_COLUMNS))
        print(f"wrote {args.csv}", file=out)
    if args.plot:
        from .plotting import plot_gates
        print(f"wrote {plot_gates(rows, args.plot)}", file=out)
    return 0 if all(r["match"] for r in rows) else 1


def cmd_verify_sbox(args, out) -> int:
    from .circuit import build_layered_sbox, verify_layered_sbox
    ok = True
    for kind in ("aes", "aes_inv", "sm4"):
        bad = verify_layered_sbox(kind)
        struct_ok = build_layered_sbox(kind).structure_ok()
        good = not bad and struct_ok
        ok &= good
        detail = "256/256 inputs match" if not bad else f"{len(bad)} mismatches, first {bad[0]:#04x}"
        if not struct_ok:
            detail += ", gate-type structure violated"
        print(f"{'PASS' if good else 'FAIL'}  {kind:8s} {detail}", file=out)
    return 0 if ok else 1


def cmd_disasm(args, out) -> int:
    ok = True
    for w in args.word:
        try:
            word = int(w.removeprefix("0x").removeprefix("0X"), 16)
            if not 0 <= word < 1 << 32:
                raise ValueError
        except ValueError:
            raise UsageError(f"malformed instruction word {w!r}") from None
        try:
            print(decode(word).disasm(), file=out)
        except InvalidInstruction as e:
            print(f"{word:08x}: invalid ({e})", file=out)
            ok = False
    return 0 if ok else 1


#   --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="saes32", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True, metavar="subcommand")

    k = sub.add_parser("kat", help="run known-answer vectors")
    k.add_argument("fixture", nargs="*", help="KEY=/PT=/CT= fixture files (default: embedded)")
    k.add_argument("--alg", choices=("aes", "sm4"), help="algorithm of the fixture files")
    k.add_argument("--quick", action="store_true", help="skip iterated vectors")
    _add_sbox(k)
    k.set_defaults(func=cmd_kat)

    for name, func in (("enc", cmd_enc), ("dec", cmd_dec)):
        e = sub.add_parser(name, help=f"{'de' if name == 'dec' else 'en'}crypt one block")
        e.add_argument("--alg", choices=ALGS, required=True)
        e.add_argument("--key", type=_hex("key"), required=True)
        e.add_argument("--block", type=_hex("block", 16), required=True)
        e.add_argument("--otf", action="store_true", help="AES round keys on the fly")
        _add_sbox(e)
        e.set_defaults(func=func)

    c = sub.add_parser("census", help="instruction census and baseline comparison")
    c.add_argument("workload", nargs="*", help=f"any of {', '.join(profiler.WORKLOADS)}")
    c.add_argument("--macro", action="store_true", help="count ssm4 4-lane groups as one")
    c.add_argument("--csv", help="write the census table as CSV")
    c.add_argument("--plot", help="write a PNG bar chart")
    _add_sbox(c)
    c.set_defaults(func=cmd_census)

    g = sub.add_parser("gates", help="per-layer gate counts of the S-box circuits")
    g.add_argument("--csv")
    g.add_argument("--plot")
    g.set_defaults(func=cmd_gates)

    v = sub.add_parser("verify-sbox", help="circuit vs table on all 256 inputs")
    v.set_defaults(func=cmd_verify_sbox)

    d = sub.add_parser("disasm", help="decode instruction words (hex)")
    d.add_argument("word", nargs="+")
    d.set_defaults(func=cmd_disasm)
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"saes32 {args.cmd}: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
