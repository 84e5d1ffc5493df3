"""The 2^n partitions of an unsatisfiable formula and their colouring."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .coloring import Coloring
from .logic import LogicError, Store, Symbol, clause_symbols


def partition_name(w: int, n: int) -> str:
    """``w`` rendered as a T/F word, first control first (e.g. ``TF``)."""
    return "".join("T" if (w >> (n - 1 - j)) & 1 else "F" for j in range(n))


def partition_bits(w: int, n: int) -> tuple[bool, ...]:
    return tuple(bool((w >> (n - 1 - j)) & 1) for j in range(n))


def partition_index(bits: Iterable[bool]) -> int:
    w = 0
    for b in bits:
        w = (w << 1) | int(bool(b))
    return w


@dataclass
class PartitionSet:
    """Clause sets of the partitions, indexed by ``w`` in ``range(2**n)``.

    ``symbols[w]`` is the symbol set of partition ``w``; it may include
    symbols that vanished from the clauses by constant simplification.
    """

    store: Store
    n: int
    clauses: list[list[frozenset]]
    symbols: list[set[Symbol]]
    coloring: Coloring = field(init=False)
    membership: dict[frozenset, int] = field(init=False)

    def __post_init__(self):
        if len(self.clauses) != 1 << self.n or len(self.symbols) != 1 << self.n:
            raise LogicError("expected 2**n partitions")
        syms = [set(s) | clause_symbols(self.store, (l for c in cs for l in c))
                for s, cs in zip(self.symbols, self.clauses)]
        self.symbols = syms
        self.coloring = Coloring.from_symbol_sets(self.store, syms)
        self.membership = {}
        for w, cs in enumerate(self.clauses):
            for c in cs:
                self.membership[c] = self.membership.get(c, 0) | (1 << w)

    @property
    def num_partitions(self) -> int:
        return 1 << self.n

    @property
    def full(self) -> int:
        return self.coloring.full

    def global_symbols(self) -> set[Symbol]:
        return self.coloring.global_symbols()

    def all_clauses(self) -> list[frozenset]:
        """Distinct clauses of the conjunction, in partition order."""
        seen: set[frozenset] = set()
        out: list[frozenset] = []
        for cs in self.clauses:
            for c in cs:
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out

    def local_symbols_are_private(self) -> bool:
        """Every non-global symbol occurs in exactly one partition."""
        full = self.full
        return all(m == full or (m & (m - 1)) == 0 for m in self.coloring.symbol_masks.values())

    def name(self, w: int) -> str:
        return partition_name(w, self.n)

    def restrict(self, clause: Iterable[int], w: int) -> frozenset[int]:
        bit = 1 << w
        col = self.coloring
        return frozenset(l for l in clause if col.lit_mask(l) & bit)
