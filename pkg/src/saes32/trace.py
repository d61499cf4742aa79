"""Instruction census records.

A trace is an explicit, caller-owned context: the cipher routines record
every modeled instruction they execute into it. Nothing is global.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager

#   instruction classes other than the saes32/ssm4 mnemonics
XOR = "xor"
ALU = "alu"                 #   shifts, or, add
LOAD_SUBKEY = "lw.subkey"
LOAD_CONST = "lw.const"

LOADS = (LOAD_SUBKEY, LOAD_CONST)


def is_saes32(cls: str) -> bool:
    return cls.startswith(("saes32.", "ssm4."))


def _is_arith(cls: str) -> bool:
    return cls not in LOADS


class InstrTrace:
    """Counts of executed instructions by class, with scope subtotals.

    ``macro_aware`` makes four-fold ``ssm4.ed4``/``ssm4.ks4`` groups count
    as one instruction each instead of four.
    """

    def __init__(self, macro_aware: bool = False):
        self.macro_aware = macro_aware
        self.totals: Counter = Counter()
        self.scopes: dict[str, Counter] = {}
        self.rounds: list[Counter] = []
        self._open: list[str] = []
        self._round: Counter | None = None

    def record(self, cls: str, n: int = 1) -> None:
        self.totals[cls] += n
        for name in self._open:
            self.scopes[name][cls] += n
        if self._round is not None:
            self._round[cls] += n

    @contextmanager
    def scope(self, name: str):
        self.scopes.setdefault(name, Counter())
        self._open.append(name)
        try:
            yield self
        finally:
            self._open.remove(name)

    @contextmanager
    def round(self):
        outer = self._round
        self._round = Counter()
        try:
            yield self
        finally:
            self.rounds.append(self._round)
            self._round = outer

    def __getitem__(self, cls: str) -> int:
        return self.totals[cls]

    @property
    def saes32(self) -> int:
        return sum(n for c, n in self.totals.items() if is_saes32(c))

    @property
    def xor(self) -> int:
        return self.totals[XOR]

    @property
    def loads(self) -> int:
        return sum(self.totals[c] for c in LOADS)

    @property
    def arith(self) -> int:
        return sum(n for c, n in self.totals.items() if _is_arith(c))

    @property
    def total(self) -> int:
        return sum(self.totals.values())

    def merge(self, other: "InstrTrace") -> "InstrTrace":
        """Combine two traces into a new one. Associative; the totals also commute."""
        out = InstrTrace(self.macro_aware)
        out.totals = self.totals + other.totals
        for src in (self, other):
            for name, cnt in src.scopes.items():
                out.scopes[name] = out.scopes.get(name, Counter()) + cnt
        out.rounds = [Counter(r) for r in self.rounds + other.rounds]
        return out

    def as_dict(self) -> dict:
        return dict(sorted(self.totals.items()))

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in sorted(self.totals.items()))
        return f"InstrTrace({body})"


def arith_of(counts: Counter) -> int:
    return sum(n for c, n in counts.items() if _is_arith(c))


def loads_of(counts: Counter) -> int:
    return sum(counts[c] for c in LOADS)
