"""Hand-built partition sets and proofs shared by several test modules."""

from __future__ import annotations

from multinterp.logic import Store, SymbolKind
from multinterp.partitions import PartitionSet
from multinterp.proof import Proof, ProofPool


def domain(store: Store, *names: str):
    return [store.term(store.declare(n, SymbolKind.DOMAIN)) for n in names]


def eq(store: Store, a, b) -> int:
    return store.eq_atom(a, b).id


def symbol_sets(store: Store, n: int, local: dict[str, int], glob: list[str]):
    """Symbol sets with ``glob`` in every partition and ``local[name]`` private."""
    sets = [{store.symbol(g) for g in glob} for _ in range(1 << n)]
    for name, w in local.items():
        sets[w].add(store.symbol(name))
    return sets


class LiteralFragment:
    """Proof fragment with the non-colourable literal ``l1 = l2``.

    Partition 1 owns ``l1``; partition 2 owns ``l2``; the rest is global.
    """

    def __init__(self):
        s = self.store = Store()
        l1, l2, zg, xg, yg, ug, vg = domain(s, "l1", "l2", "zg", "xg", "yg", "ug", "vg")
        f = s.declare("f", SymbolKind.FUNCTION, 1)
        fl1, fl2 = s.term(f, l1), s.term(f, l2)
        self.ps = PartitionSet(s, 2, [[], [], [], []],
                               symbol_sets(s, 2, {"l1": 1, "l2": 2}, ["zg", "xg", "yg", "ug", "vg", "f"]))
        self.a = eq(s, l1, l2)
        self.l1z, self.zl2, self.xy = eq(s, l1, zg), eq(s, zg, l2), eq(s, xg, yg)
        self.ff, self.uv = eq(s, fl1, fl2), eq(s, ug, vg)
        p = self.pool = ProofPool(s)
        self.n1 = p.axi(frozenset({self.l1z, self.xy}))
        self.nd = p.axi(frozenset({-self.l1z, -self.zl2, self.a}))
        self.na = p.res(self.n1, self.nd, self.l1z)
        self.nu = p.axi(frozenset({-self.a, self.ff}))
        self.n3 = p.axi(frozenset({-self.ff, -self.uv}))
        self.nna = p.res(self.nu, self.n3, self.ff)
        self.nr = p.res(self.na, self.nna, self.a)


class SplitChain:
    """Colourable chain a1 b1 cg d2 e2 fg h3 kg l1 over partitions 1, 2, 3."""

    NAMES = ["a1", "b1", "cg", "d2", "e2", "fg", "h3", "kg", "l1"]

    def __init__(self):
        s = self.store = Store()
        self.t = dict(zip(self.NAMES, domain(s, *self.NAMES)))
        local = {n: int(n[1]) for n in self.NAMES if n[1] != "g"}
        self.ps = PartitionSet(s, 2, [[], [], [], []],
                               symbol_sets(s, 2, local, [n for n in self.NAMES if n[1] == "g"]))
        self.pool = ProofPool(s)

    def e(self, x: str, y: str) -> int:
        return eq(self.store, self.t[x], self.t[y])

    def taut(self, path: list[str]) -> frozenset:
        """Chain tautology: the negated edges of ``path`` plus its end-to-end equality."""
        lits = {-self.e(x, y) for x, y in zip(path, path[1:])}
        return frozenset(lits | {self.e(path[0], path[-1])})

    @property
    def clause(self) -> frozenset:
        return self.taut(self.NAMES)


class LocalOrder:
    """Four partitions over ``a`` and ``b``: empty, ``b``, ``a`` and ``(l or not a) and (not l or not b)``.

    The first control selects ``a``/``b`` pairs; ``l`` is local to ``TT``.
    """

    def __init__(self):
        s = self.store = Store()
        self.a, self.b, self.l = (s.bool_atom(s.declare(x, SymbolKind.BOOL)).id for x in "abl")
        a, b, l = self.a, self.b, self.l
        clauses = [[], [frozenset({b})], [frozenset({a})],
                   [frozenset({l, -a}), frozenset({-l, -b})]]
        ab = {s.symbol("a"), s.symbol("b")}
        self.ps = PartitionSet(s, 2, clauses, [set(ab), set(ab), set(ab), ab | {s.symbol("l")}])
        self.pool = ProofPool(s)

    def local_first(self) -> Proof:
        """Resolve the TT-local ``l`` first, then the globals."""
        p, a, b, l = self.pool, self.a, self.b, self.l
        c1, c2 = p.hyp(frozenset({l, -a})), p.hyp(frozenset({-l, -b}))
        n = p.res(c1, c2, l)  # (not a or not b)
        n = p.res(p.hyp(frozenset({a})), n, a)  # (not b)
        return Proof(p, p.res(p.hyp(frozenset({b})), n, b))

    def not_local_first(self) -> Proof:
        """Resolve ``a`` and ``b`` into the TT clauses before ``l``."""
        p, a, b, l = self.pool, self.a, self.b, self.l
        c1, c2 = p.hyp(frozenset({l, -a})), p.hyp(frozenset({-l, -b}))
        x = p.res(p.hyp(frozenset({a})), c1, a)  # (l)
        y = p.res(p.hyp(frozenset({b})), c2, b)  # (not l)
        return Proof(p, p.res(x, y, l))
