"""Partition colours of symbols, terms, literals and clauses as bitmasks.

Partition ``w`` is an integer in ``range(2**n)``; bit ``w`` of a mask says the
object fits in partition ``w``.  The most significant bit of ``w`` is the
first control signal, so ``min`` over a mask is the lexicographically least
partition vector.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .logic import Atom, AtomKind, Store, Symbol, Term


def mask_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Coloring:
    def __init__(self, store: Store, num_partitions: int, symbol_masks: Mapping[Symbol, int]):
        self.store = store
        self.num_partitions = num_partitions
        self.full = (1 << num_partitions) - 1
        self.symbol_masks = dict(symbol_masks)
        self._term_cache: dict[int, int] = {}
        self._atom_cache: dict[int, int] = {}

    @classmethod
    def from_symbol_sets(cls, store: Store, partition_symbols: list[set[Symbol]]) -> "Coloring":
        masks: dict[Symbol, int] = {}
        for w, syms in enumerate(partition_symbols):
            for s in syms:
                masks[s] = masks.get(s, 0) | (1 << w)
        return cls(store, len(partition_symbols), masks)

    def symbol_mask(self, s: Symbol) -> int:
        return self.symbol_masks.get(s, 0)

    def is_global_symbol(self, s: Symbol) -> bool:
        return self.symbol_mask(s) == self.full

    def global_symbols(self) -> set[Symbol]:
        return {s for s, m in self.symbol_masks.items() if m == self.full}

    def term_mask(self, t: Term) -> int:
        m = self._term_cache.get(t.id)
        if m is None:
            m = self.symbol_mask(t.head)
            for a in t.args:
                m &= self.term_mask(a)
            self._term_cache[t.id] = m
        return m

    def atom_mask(self, a: Atom | int) -> int:
        if isinstance(a, int):
            a = self.store.atom(a)
        m = self._atom_cache.get(a.id)
        if m is None:
            if a.kind is AtomKind.BOOL:
                m = self.symbol_mask(a.symbol)
            elif a.kind is AtomKind.PRED:
                m = self.term_mask(a.term)
            else:
                m = self.term_mask(a.lhs) & self.term_mask(a.rhs)
            self._atom_cache[a.id] = m
        return m

    def lit_mask(self, lit: int) -> int:
        return self.atom_mask(abs(lit))

    def clause_mask(self, clause: Iterable[int]) -> int:
        m = self.full
        for l in clause:
            m &= self.atom_mask(abs(l))
        return m

    def is_global_term(self, t: Term) -> bool:
        return self.term_mask(t) == self.full

    def is_global_atom(self, a: Atom | int) -> bool:
        return self.atom_mask(a) == self.full

    def is_colorable_lit(self, lit: int) -> bool:
        return self.atom_mask(abs(lit)) != 0
