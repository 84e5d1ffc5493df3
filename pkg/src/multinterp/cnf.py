"""CNF conversion: NNF distribution, falling back to polarity-aware definitions."""

from __future__ import annotations

from .logic import (Formula, Op, Store, Symbol, SymbolKind,
                    is_tautological)

DEFAULT_THRESHOLD = 64

Clause = frozenset


def _nnf(f: Formula, positive: bool):
    """NNF as nested tuples: ('lit', l) | ('and', [...]) | ('or', [...]) | ('const', b)."""
    op = f.op
    if op is Op.TRUE:
        return ("const", positive)
    if op is Op.FALSE:
        return ("const", not positive)
    if op is Op.ATOM:
        return ("lit", f.atom if positive else -f.atom)
    if op is Op.NOT:
        return _nnf(f.args[0], not positive)
    if op in (Op.AND, Op.OR):
        conj = (op is Op.AND) == positive
        return ("and" if conj else "or", [_nnf(a, positive) for a in f.args])
    a, b = f.args
    if op is Op.IMPLIES:
        if positive:
            return ("or", [_nnf(a, False), _nnf(b, True)])
        return ("and", [_nnf(a, True), _nnf(b, False)])
    # xor is the negation of iff
    iff = (op is Op.IFF) == positive
    if iff:
        return ("and", [("or", [_nnf(a, False), _nnf(b, True)]),
                        ("or", [_nnf(a, True), _nnf(b, False)])])
    return ("and", [("or", [_nnf(a, True), _nnf(b, True)]),
                    ("or", [_nnf(a, False), _nnf(b, False)])])


class _Converter:
    def __init__(self, store: Store, tag: str, threshold: int):
        self.store = store
        self.tag = tag
        self.threshold = threshold
        self.fresh: list[Symbol] = []

    def define(self, clauses: list[frozenset]) -> int:
        sym = self.store.fresh(f"def_{self.tag}", SymbolKind.BOOL)
        self.fresh.append(sym)
        d = self.store.bool_atom(sym).id
        self.extra.extend(c | {-d} for c in clauses)
        return d

    def convert(self, node) -> list[frozenset]:
        kind = node[0]
        if kind == "const":
            return [] if node[1] else [frozenset()]
        if kind == "lit":
            return [frozenset((node[1],))]
        parts = [self.convert(c) for c in node[1]]
        if kind == "and":
            return [c for p in parts for c in p]
        if any(p == [] for p in parts):
            return []
        parts = [p for p in parts if p != [frozenset()]]
        if not parts:
            return [frozenset()]
        size = 1
        for p in parts:
            size *= len(p)
        if size > self.threshold:
            parts = [p if len(p) == 1 else [frozenset((self.define(p),))] for p in parts]
        out = [frozenset()]
        for p in parts:
            out = [c | d for c in out for d in p]
        return out


def cnf_convert(store: Store, f: Formula, partition_tag: str = "",
                threshold: int = DEFAULT_THRESHOLD) -> tuple[list[frozenset], list[Symbol]]:
    """Equisatisfiable clause list for ``f`` plus the definition variables introduced.

    Definition variables are fresh Boolean symbols named after ``partition_tag``
    so they stay local to the partition they were created for.  The projection
    of the models onto the original atoms is preserved.
    """
    conv = _Converter(store, partition_tag or "g", threshold)
    conv.extra = []
    main = conv.convert(_nnf(f, True))
    seen: set[frozenset] = set()
    out: list[frozenset] = []
    for c in main + conv.extra:
        if is_tautological(c) or c in seen:
            continue
        seen.add(c)
        out.append(c)
    return out, conv.fresh
