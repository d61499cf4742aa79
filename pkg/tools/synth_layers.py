#!/usr/bin/env python3
"""Regenerate the layered S-box netlists in src/saes32/circuit/layers/.

The shared middle layer and the AES forward outer layers are the
Boyar-Peralta low-depth AES S-box, split so that the middle layer has a
21-bit input (one top XOR, T26 = T3 + T16, moves into the middle).

AES^-1 and SM4 reuse the same middle layer. Each is written as
S = Q o inv o P with P, Q affine and inv the AES-field inversion that the
middle layer computes; every (a, k) in GF(2^8)* x Z8 gives an equivalent
decomposition P' = a * frob^k(P), Q' = Q o frob^-k o (a *). For each one
we synthesize depth-bounded XOR/XNOR circuits for the affine outer maps
and keep the first decomposition whose layers hit the requested counts.

    python tools/synth_layers.py [--seed N] [--depth D] [--out DIR]
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from saes32.circuit.netlist import compose, from_gates, gate_stats, truth_table  # noqa: E402
from saes32.sbox import (AES_POLY, SM4_POLY, aes_affine, aes_affine_inv,  # noqa: E402
                         build_aes_inv_sbox, build_aes_sbox, build_sm4_sbox,
                         gf256_inv, gf256_mul, sm4_affine)

#   Boyar-Peralta forward AES S-box; U0 is the most significant input bit,
#   S0 the most significant output bit. '+' XOR, '#' XNOR, 'x' AND.
BP_TOP = """
T1 = U0 + U3    T2 = U0 + U5    T3 = U0 + U6    T4 = U3 + U5
T5 = U4 + U6    T6 = T1 + T5    T7 = U1 + U2    T8 = U7 + T6
T9 = U7 + T7    T10 = T6 + T7   T11 = U1 + U5   T12 = U2 + U5
T13 = T3 + T4   T14 = T6 + T11  T15 = T5 + T11  T16 = T5 + T12
T17 = T9 + T16  T18 = U3 + U7   T19 = T7 + T18  T20 = T1 + T19
T21 = U6 + U7   T22 = T7 + T21  T23 = T2 + T22  T24 = T2 + T10
T25 = T20 + T17 T27 = T1 + T12
"""
BP_MID = """
T26 = T3 + T16
M1 = T13 x T6   M2 = T23 x T8   M3 = T14 + M1   M4 = T19 x U7
M5 = M4 + M1    M6 = T3 x T16   M7 = T22 x T9   M8 = T26 + M6
M9 = T20 x T17  M10 = M9 + M6   M11 = T1 x T15  M12 = T4 x T27
M13 = M12 + M11 M14 = T2 x T10  M15 = M14 + M11 M16 = M3 + M2
M17 = M5 + T24  M18 = M8 + M7   M19 = M10 + M15 M20 = M16 + M13
M21 = M17 + M15 M22 = M18 + M13 M23 = M19 + T25 M24 = M22 + M23
M25 = M22 x M20 M26 = M21 + M25 M27 = M20 + M21 M28 = M23 + M25
M29 = M28 x M27 M30 = M26 x M24 M31 = M20 x M23 M32 = M27 x M31
M33 = M27 + M25 M34 = M21 x M22 M35 = M24 x M34 M36 = M24 + M25
M37 = M21 + M29 M38 = M32 + M33 M39 = M23 + M30 M40 = M35 + M36
M41 = M38 + M40 M42 = M37 + M39 M43 = M37 + M38 M44 = M39 + M40
M45 = M42 + M41 M46 = M44 x T6  M47 = M40 x T8  M48 = M39 x U7
M49 = M43 x T16 M50 = M38 x T9  M51 = M37 x T17 M52 = M42 x T15
M53 = M45 x T27 M54 = M41 x T10 M55 = M44 x T13 M56 = M40 x T23
M57 = M39 x T19 M58 = M43 x T3  M59 = M38 x T22 M60 = M37 x T20
M61 = M42 x T1  M62 = M45 x T4  M63 = M41 x T2
"""
BP_BOT = """
L0 = M61 + M62  L1 = M50 + M56  L2 = M46 + M48  L3 = M47 + M55
L4 = M54 + M58  L5 = M49 + M61  L6 = M62 + L5   L7 = M46 + L3
L8 = M51 + M59  L9 = M52 + M53  L10 = M53 + L4  L11 = M60 + L2
L12 = M48 + M51 L13 = M50 + L0  L14 = M52 + M61 L15 = M55 + L1
L16 = M56 + L0  L17 = M57 + L1  L18 = M58 + L8  L19 = M63 + L4
L20 = L0 + L1   L21 = L1 + L7   L22 = L3 + L12  L23 = L18 + L2
L24 = L15 + L9  L25 = L6 + L10  L26 = L7 + L9   L27 = L8 + L10
L28 = L11 + L14 L29 = L11 + L17
S0 = L6 + L24   S1 = L16 # L26  S2 = L19 # L28  S3 = L6 + L21
S4 = L20 + L22  S5 = L25 + L29  S6 = L13 # L27  S7 = L6 # L23
"""

MID_INPUTS = ["U7", "T1", "T2", "T3", "T4", "T6", "T8", "T9", "T10", "T13", "T14",
              "T15", "T16", "T17", "T19", "T20", "T22", "T23", "T24", "T25", "T27"]
MID_OUTPUTS = [f"M{i}" for i in range(46, 64)]

#   target gate counts: (total, xnor) for top and bottom
TARGETS = {
    "aes_inv": ((26, 10), (37, 0)),
    "sm4": ((27, 9), (38, 5)),
}

_OPS = {"+": "XOR", "#": "XNOR", "x": "AND"}


def _parse(text):
    toks = text.split()
    return [(toks[i], _OPS[toks[i + 3]], toks[i + 2], toks[i + 4])
            for i in range(0, len(toks), 5)]


def _rename(gates, inmap, outmap):
    names, spec, k = dict(inmap), [], 0
    for o, op, a, b in gates:
        if o in outmap:
            n = outmap[o]
        else:
            n, k = f"t{k}", k + 1
        names[o] = n
        spec.append((n, op, names[a], names[b]))
    return spec, names


def bp_layers():
    top = _parse(BP_TOP)
    spec, names = _rename(top, {f"U{j}": f"x{7 - j}" for j in range(8)},
                          {n: f"y{k}" for k, n in enumerate(MID_INPUTS)})
    t = from_gates(8, spec, [names[n] for n in MID_INPUTS])
    spec, names = _rename(_parse(BP_MID), {n: f"x{k}" for k, n in enumerate(MID_INPUTS)},
                          {n: f"y{k}" for k, n in enumerate(MID_OUTPUTS)})
    m = from_gates(21, spec, [names[n] for n in MID_OUTPUTS])
    spec, names = _rename(_parse(BP_BOT), {n: f"x{k}" for k, n in enumerate(MID_OUTPUTS)},
                          {f"S{j}": f"y{7 - j}" for j in range(8)})
    b = from_gates(18, spec, [f"y{i}" for i in range(8)])
    return t, m, b


#   --- GF(2) helpers ----------------------------------------------------------

def parity(x):
    return bin(x).count("1") & 1


def affine_of(f):
    c = f(0)
    return [f(1 << i) ^ c for i in range(8)], c


def solve_gf2(rows, rhs, n):
    """Solve sum_j c_j rows[r][j] = rhs[r]; rows are n-bit ints. Unique solution or None."""
    piv = {}
    for r, b in zip(rows, rhs):
        v = r | (b << n)
        for col, (pr) in piv.items():
            if v >> col & 1:
                v ^= pr
        low = v & ((1 << n) - 1)
        if not low:
            if v:
                return None
            continue
        col = low.bit_length() - 1
        for c2 in list(piv):
            if piv[c2] >> col & 1:
                piv[c2] ^= v
        piv[col] = v
    if len(piv) != n:
        return None
    return sum((piv[c] >> n & 1) << c for c in range(n))


def mul(a, b):
    return gf256_mul(a, b, AES_POLY)


def frob(x, k):
    for _ in range(k % 8):
        x = mul(x, x)
    return x


def sm4_isomorphism():
    """Field map from the SM4 polynomial basis into the AES field."""
    for beta in range(2, 256):
        acc, p = 0, 1
        for i in range(9):
            if SM4_POLY >> i & 1:
                acc ^= p
            p = mul(p, beta)
        if acc == 0:
            break
    pw = [1]
    for _ in range(7):
        pw.append(mul(pw[-1], beta))
    fwd = [0] * 256
    for z in range(256):
        for i in range(8):
            if z >> i & 1:
                fwd[z] ^= pw[i]
    inv = [0] * 256
    for z, y in enumerate(fwd):
        inv[y] = z
    assert all(fwd[gf256_inv(z, SM4_POLY)] == gf256_inv(fwd[z]) for z in range(256))
    return fwd, inv


def base_decomposition(kind):
    if kind == "aes_inv":
        return aes_affine_inv, (lambda w: w), build_aes_inv_sbox()
    if kind == "sm4":
        fwd, inv = sm4_isomorphism()
        return (lambda x: fwd[sm4_affine(x)]), (lambda w: sm4_affine(inv[w])), build_sm4_sbox()
    raise ValueError(kind)


def decompositions(kind):
    P0, Q0, _ = base_decomposition(kind)
    for a in range(1, 256):
        for k in range(8):
            yield (a, k), (lambda x, a=a, k=k: mul(a, frob(P0(x), k))), \
                  (lambda w, a=a, k=k: Q0(frob(mul(a, w), 8 - k)))


class LayerMaps:
    """Linear forms of the BP top outputs and of inv() over the 18 products."""

    def __init__(self, top, mid):
        cols = [top.eval_int(1 << i) for i in range(8)]
        self.forms = [sum(((cols[i] >> k) & 1) << i for i in range(8)) for k in range(21)]
        prods = [mid.eval_int(top.eval_int(u)) for u in range(256)]
        self.inv_rows = []
        for k in range(8):
            c = solve_gf2(prods, [(gf256_inv(u) >> k) & 1 for u in range(256)], 18)
            assert c is not None
            self.inv_rows.append(c)

    def outer(self, P, Q):
        pc, pconst = affine_of(P)
        top = [(sum(parity(f & pc[i]) << i for i in range(8)), parity(f & pconst))
               for f in self.forms]
        qc, qconst = affine_of(Q)
        bot = []
        for j in range(8):
            v = 0
            for k in range(8):
                if qc[k] >> j & 1:
                    v ^= self.inv_rows[k]
            bot.append((v, qconst >> j & 1))
        return top, bot


#   --- linear synthesis ----------------------------------------------------

def bp_distance_slp(targets, n, rng, depth):
    """Boyar-Peralta distance heuristic, candidates limited to ``depth``."""
    base, dep, gates = [1 << i for i in range(n)], [0] * n, []
    T = sorted({t for t in targets if t})
    while len(gates) < 80:
        dist = [255] * (1 << n)
        dist[0] = 0
        front = [0]
        d = 0
        while front:
            d += 1
            nxt = []
            for f in front:
                for b in base:
                    v = f ^ b
                    if dist[v] == 255:
                        dist[v] = d
                        nxt.append(v)
            front = nxt
        dT = [dist[t] for t in T]
        if all(x <= 1 for x in dT):
            return gates
        best, pool = None, []
        for i, j in itertools.combinations(range(len(base)), 2):
            if max(dep[i], dep[j]) >= depth:
                continue
            c = base[i] ^ base[j]
            if dist[c] <= 1:
                continue
            nd = [min(x, dist[t ^ c] + 1) - 1 for t, x in zip(T, dT)]
            key = (sum(nd), -sum(v * v for v in nd))
            if c in T:
                key = (-1, 0)
            if best is None or key < best:
                best, pool = key, [(i, j)]
            elif key == best:
                pool.append((i, j))
        if not pool:
            return None
        i, j = rng.choice(pool)
        gates.append((base[i] ^ base[j], base[i], base[j]))
        base.append(base[i] ^ base[j])
        dep.append(max(dep[i], dep[j]) + 1)
    return None


def paar_slp(targets, n, rng, depth):
    """Cancellation-free pair merging; a Kraft-sum check keeps every target within ``depth``."""
    dep = {1 << i: 0 for i in range(n)}
    lim = 1 << depth
    tg = [[1 << i for i in range(n) if t >> i & 1] for t in sorted(set(targets)) if t]
    if any(len(t) > lim for t in tg):
        return None
    gates = []

    def fits(t, a, b, nd):
        return sum(1 << dep[e] for e in t) - (1 << dep[a]) - (1 << dep[b]) + (1 << nd) <= lim

    while True:
        live = [t for t in tg if len(t) > 1]
        if not live:
            return gates
        cnt = Counter()
        for t in live:
            for a, b in itertools.combinations(t, 2):
                if fits(t, a, b, max(dep[a], dep[b]) + 1):
                    cnt[(min(a, b), max(a, b))] += 1
        top = max(cnt.values())
        pool = sorted(p for p, c in cnt.items() if c == top)
        if rng.random() < 0.5:
            md = min(max(dep[a], dep[b]) for a, b in pool)
            pool = [p for p in pool if max(dep[p[0]], dep[p[1]]) == md]
        a, b = rng.choice(pool)
        c = a ^ b
        if c in dep:
            nd = dep[c]
        else:
            nd = max(dep[a], dep[b]) + 1
            gates.append((c, a, b))
            dep[c] = nd
        for t in live:
            if a in t and b in t and fits(t, a, b, nd):
                t.remove(a)
                t.remove(b)
                t.append(c)


def assign_complements(gates, n, targets, want_xnor, rng=None):
    """Choose XOR/XNOR per gate so outputs carry the affine constants.

    Output wires have fixed polarity; internal wires are free. Returns the
    op list with exactly ``want_xnor`` XNOR gates, or None.
    """
    need = {}
    for m, c in targets:
        if need.setdefault(m, c) != c:
            return None
    if any(need.get(1 << i, 0) for i in range(n)):
        return None
    free = [k for k, (v, _, _) in enumerate(gates) if v not in need]

    def ops_for(bits):
        flag = {1 << i: 0 for i in range(n)}
        fk = dict(zip(free, bits))
        for k, (v, _, _) in enumerate(gates):
            flag[v] = need[v] if v in need else fk[k]
        return ["XNOR" if flag[v] ^ flag[a] ^ flag[b] else "XOR" for v, a, b in gates]

    if len(free) <= 12:
        tries = itertools.product((0, 1), repeat=len(free))
    else:
        rng = rng or random.Random(0)
        tries = itertools.chain([(0,) * len(free)],
                                (tuple(rng.getrandbits(1) for _ in free) for _ in range(4000)))
    for bits in tries:
        ops = ops_for(bits)
        if ops.count("XNOR") == want_xnor:
            return ops
    return None


def to_netlist(n, gates, ops, targets):
    names = {1 << i: f"x{i}" for i in range(n)}
    tgt = {}
    for k, (m, _) in enumerate(targets):
        tgt.setdefault(m, k)
    spec, tk = [], 0
    for (v, a, b), op in zip(gates, ops):
        if v in tgt:
            nm = f"y{tgt[v]}"
        else:
            nm, tk = f"t{tk}", tk + 1
        names[v] = nm
        spec.append((nm, op, names[a], names[b]))
    return from_gates(n, spec, [names[m] for m, _ in targets])


def search(kind, maps, rng, depth, log=print):
    (tt, tx), (bt, bx) = TARGETS[kind]
    cands = list(decompositions(kind))
    rng.shuffle(cands)
    for (a, k), P, Q in cands:
        topm, botm = maps.outer(P, Q)
        top = None
        for r in range(12):
            slp = bp_distance_slp if r % 2 else paar_slp
            g = slp([m for m, _ in topm], 8, rng, depth)
            if g is not None and len(g) == tt:
                ops = assign_complements(g, 8, topm, tx, rng)
                if ops is not None:
                    top = to_netlist(8, g, ops, topm)
                    break
        if top is None:
            continue
        for _ in range(40):
            g = paar_slp([m for m, _ in botm], 18, rng, depth)
            if g is not None and len(g) == bt:
                ops = assign_complements(g, 18, botm, bx, rng)
                if ops is not None:
                    log(f"{kind}: decomposition a=0x{a:02x} k={k}")
                    return top, to_netlist(18, g, ops, botm), (a, k)
    raise RuntimeError(f"no {kind} layers found")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--out", type=Path, default=ROOT / "src" / "saes32" / "circuit" / "layers")
    args = ap.parse_args(argv)

    top, mid, bot = bp_layers()
    layers = {"middle": mid, "aes_top": top, "aes_bottom": bot}
    maps = LayerMaps(top, mid)
    info = {}
    for kind in ("aes_inv", "sm4"):
        rng = random.Random(args.seed)
        t, b, ak = search(kind, maps, rng, args.depth)
        layers[f"{kind}_top"], layers[f"{kind}_bottom"] = t, b
        info[kind] = ak

    tables = {"aes": build_aes_sbox(), "aes_inv": build_aes_inv_sbox(), "sm4": build_sm4_sbox()}
    for kind, tab in tables.items():
        full = compose(layers[f"{kind}_top"], mid, layers[f"{kind}_bottom"])
        assert truth_table(full) == list(tab), kind

    args.out.mkdir(parents=True, exist_ok=True)
    for name, net in layers.items():
        st = gate_stats(net)
        if name == "middle" or name.startswith("aes_") and not name.startswith("aes_inv"):
            src = "Boyar-Peralta low-depth AES S-box"
        else:
            a, k = info[name.rsplit("_", 1)[0]]
            src = f"tools/synth_layers.py --seed {args.seed} --depth {args.depth} (a=0x{a:02x}, k={k})"
        header = (f"{name}: {net.n_inputs} -> {net.n_outputs}, {st['total']} gates "
                  f"({st['xor']} XOR, {st['xnor']} XNOR, {st['and']} AND), depth {st['depth']}\n"
                  f"source: {src}")
        net.save(args.out / f"{name}.net", header)
        print(f"{name:12s} {st}")


if __name__ == "__main__":
    main()
