"""Brute-force EUF satisfiability over a subterm-closed term set.

A conjunction is satisfiable iff some congruent equivalence on the terms
satisfies every literal; the quotient then is a model.
"""

from __future__ import annotations

from multinterp.logic import AtomKind, Store, Term


def set_partitions(n: int):
    """Restricted growth strings of length ``n``."""
    def go(prefix, k):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(k + 1):
            yield from go(prefix + [b], max(k, b + 1))
    yield from go([], 0)


def subterms(t: Term, out: set) -> set:
    if t not in out:
        out.add(t)
        for a in t.args:
            subterms(a, out)
    return out


def _terms_of(store: Store, lits) -> list[Term]:
    ts: set[Term] = set()
    for l in lits:
        atom = store.atoms[abs(l)]
        if atom.kind is AtomKind.EQ:
            subterms(atom.lhs, ts)
            subterms(atom.rhs, ts)
        elif atom.kind is AtomKind.PRED:
            subterms(atom.term, ts)
    return sorted(ts, key=lambda t: t.id)


def oracle_consistent(store: Store, lits) -> bool:
    lits = list(lits)
    terms = _terms_of(store, lits)
    idx = {t.id: i for i, t in enumerate(terms)}
    bools = {}
    for l in lits:
        a = store.atoms[abs(l)]
        if a.kind is AtomKind.BOOL:
            if bools.setdefault(a.id, l > 0) != (l > 0):
                return False
    for cls in set_partitions(len(terms)):
        def c(t):
            return cls[idx[t.id]]
        congruent = True
        for s in terms:
            for t in terms:
                if s.id < t.id and s.head is t.head and s.args and c(s) != c(t) and \
                        all(c(x) == c(y) for x, y in zip(s.args, t.args)):
                    congruent = False
        if not congruent:
            continue
        pred_val: dict[tuple, bool] = {}
        ok = True
        for l in lits:
            a = store.atoms[abs(l)]
            if a.kind is AtomKind.EQ:
                ok = (c(a.lhs) == c(a.rhs)) == (l > 0)
            elif a.kind is AtomKind.PRED:
                key = (a.term.head, tuple(c(x) for x in a.term.args))
                ok = pred_val.setdefault(key, l > 0) == (l > 0)
            if not ok:
                break
        if ok:
            return True
    return False
