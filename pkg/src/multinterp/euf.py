"""Congruence closure with an explicit congruence graph.

Every merge adds one edge to the graph, justified either by an equality atom
or by congruence of two applications of the same symbol.  Explanations are
shortest paths in that graph (breadth-first, ties broken by term id); the
argument paths of a congruence edge may only use edges older than the edge
itself, which keeps explanations well-founded.

Predicate applications are ordinary terms here, so ``P(x)`` and ``P(y)``
end up in one class exactly when their arguments do.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .coloring import Coloring
from .logic import Atom, AtomKind, LogicError, Store, Term


class NotConnected(LogicError):
    pass


class NoGlobalIntermediate(LogicError):
    pass


@dataclass(frozen=True)
class Step:
    """One chain edge: an equality atom, or congruence with one chain per argument."""

    atom: Atom | None = None
    args: tuple["Chain", ...] = ()

    @property
    def is_congruence(self) -> bool:
        return self.atom is None


@dataclass(frozen=True)
class Chain:
    terms: tuple[Term, ...]
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        assert len(self.terms) == len(self.steps) + 1

    @property
    def start(self) -> Term:
        return self.terms[0]

    @property
    def end(self) -> Term:
        return self.terms[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def reversed(self) -> "Chain":
        steps = tuple(
            s if not s.is_congruence else Step(args=tuple(c.reversed() for c in s.args))
            for s in reversed(self.steps))
        return Chain(tuple(reversed(self.terms)), steps)

    def sub(self, i: int, j: int) -> "Chain":
        return Chain(self.terms[i:j + 1], self.steps[i:j])

    def __add__(self, other: "Chain") -> "Chain":
        if self.end is not other.start:
            raise ValueError("chains do not meet")
        return Chain(self.terms + other.terms[1:], self.steps + other.steps)

    def __repr__(self) -> str:
        return " ~ ".join(repr(t) for t in self.terms)


def chain_literals(chain: Chain) -> set[int]:
    """Atom ids of all equality justifications, recursively through congruences."""
    out: set[int] = set()
    stack = [chain]
    while stack:
        c = stack.pop()
        for s in c.steps:
            if s.atom is not None:
                out.add(s.atom.id)
            else:
                stack.extend(s.args)
    return out


def step_literals(step: Step) -> set[int]:
    if step.atom is not None:
        return {step.atom.id}
    out: set[int] = set()
    for c in step.args:
        out |= chain_literals(c)
    return out


def implied_literals(store: Store, a: Term, b: Term) -> frozenset[int]:
    """Clause part stating that ``a`` and ``b`` are equal (or equivalent, for predicates)."""
    if a.is_predicate_app:
        if a is b:
            return frozenset((-store.pred_atom_of_term(a).id, store.pred_atom_of_term(a).id))
        return frozenset((-store.pred_atom_of_term(a).id, store.pred_atom_of_term(b).id))
    return frozenset((store.eq_atom(a, b).id,))


def chain_to_tautology(store: Store, chain: Chain) -> frozenset[int]:
    """``(OR not l for l in Lits(chain)) or start=end``; for predicate chains the
    implied part is ``not P(start) or P(end)``."""
    lits = {-l for l in chain_literals(chain)}
    return frozenset(lits) | implied_literals(store, chain.start, chain.end)


class _Edge:
    __slots__ = ("u", "v", "atom", "time")

    def __init__(self, u: Term, v: Term, atom: Atom | None, time: int):
        self.u, self.v, self.atom, self.time = u, v, atom, time


class CongruenceClosure:
    def __init__(self, store: Store):
        self.store = store
        self._parent: dict[int, int] = {}
        self._members: dict[int, list[Term]] = {}
        self._uses: dict[int, list[Term]] = {}
        self._sig: dict[tuple, Term] = {}
        self._adj: dict[int, list[_Edge]] = {}
        self.edges: list[_Edge] = []
        self._pending: deque[tuple[Term, Term, Atom | None]] = deque()
        self._cong_cache: dict[int, Step] = {}
        self.touched: set[int] = set()  # roots that absorbed another class

    # -- union-find -----------------------------------------------------
    def find(self, t: Term | int) -> int:
        x = t if isinstance(t, int) else t.id
        p = self._parent
        if x not in p:
            if isinstance(t, int):
                return x
            self.add_term(t)
            return self.find(x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def same(self, a: Term, b: Term) -> bool:
        p = self._parent
        if a.id in p and b.id in p:
            x, y = a.id, b.id
            while p[x] != x:
                x = p[x]
            while p[y] != y:
                y = p[y]
            return x == y
        return self.find(a) == self.find(b)

    def classes(self) -> list[list[Term]]:
        return [sorted(ms, key=lambda t: t.id) for r, ms in self._members.items() if self._parent[r] == r]

    # -- construction ---------------------------------------------------
    def _key(self, t: Term) -> tuple:
        return (t.head.name, tuple(self.find(a.id) for a in t.args))

    def add_term(self, t: Term) -> None:
        if t.id in self._parent:
            return
        for a in t.args:
            self.add_term(a)
        self._parent[t.id] = t.id
        self._members[t.id] = [t]
        self._uses[t.id] = []
        self._adj[t.id] = []
        if t.args:
            for a in t.args:
                self._uses[self.find(a.id)].append(t)
            key = self._key(t)
            other = self._sig.get(key)
            if other is None:
                self._sig[key] = t
            else:
                self._pending.append((other, t, None))
        self._propagate()

    def merge(self, a: Term, b: Term, atom: Atom | None) -> None:
        self.add_term(a)
        self.add_term(b)
        self._pending.append((a, b, atom))
        self._propagate()

    def assert_atom(self, atom: Atom) -> None:
        if atom.kind is AtomKind.EQ:
            self.merge(atom.lhs, atom.rhs, atom)
        elif atom.kind is AtomKind.PRED:
            self.add_term(atom.term)

    def _propagate(self) -> None:
        while self._pending:
            a, b, atom = self._pending.popleft()
            ra, rb = self.find(a.id), self.find(b.id)
            if ra == rb:
                continue
            e = _Edge(a, b, atom, len(self.edges))
            self.edges.append(e)
            self._adj[a.id].append(e)
            self._adj[b.id].append(e)
            if len(self._members[ra]) < len(self._members[rb]):
                ra, rb = rb, ra
            # rb joins ra
            self.touched.add(ra)
            self._parent[rb] = ra
            self._members[ra].extend(self._members.pop(rb))
            moved = self._uses.pop(rb)
            for p in moved:
                key = self._key(p)
                other = self._sig.get(key)
                if other is None:
                    self._sig[key] = p
                elif self.find(other.id) != self.find(p.id):
                    self._pending.append((other, p, None))
            self._uses[ra].extend(moved)

    # -- explanation ----------------------------------------------------
    def find_chain(self, a: Term, b: Term, before: int | None = None) -> Chain:
        """Shortest justified path from ``a`` to ``b`` using edges older than ``before``."""
        if a is b:
            return Chain((a,))
        if a.id not in self._adj or b.id not in self._adj:
            raise NotConnected(f"{a!r} and {b!r} are not connected")
        limit = len(self.edges) if before is None else before
        prev: dict[int, tuple[int, _Edge] | None] = {a.id: None}
        queue = deque([a])
        found = False
        while queue and not found:
            x = queue.popleft()
            nbrs = []
            for e in self._adj[x.id]:
                if e.time >= limit:
                    continue
                y = e.v if e.u is x else e.u
                nbrs.append((y.id, e.time, y, e))
            nbrs.sort(key=lambda t: (t[0], t[1]))
            for yid, _, y, e in nbrs:
                if yid in prev:
                    continue
                prev[yid] = (x.id, e)
                if y is b:
                    found = True
                    break
                queue.append(y)
        if b.id not in prev:
            raise NotConnected(f"{a!r} and {b!r} are not connected")
        terms = [b]
        steps: list[Step] = []
        cur = b.id
        while prev[cur] is not None:
            pid, e = prev[cur]
            src = self.store.terms[pid]
            steps.append(self._edge_step(e, src))
            terms.append(src)
            cur = pid
        terms.reverse()
        steps.reverse()
        return Chain(tuple(terms), tuple(steps))

    def _edge_step(self, e: _Edge, src: Term) -> Step:
        if e.atom is not None:
            return Step(atom=e.atom)
        step = self._cong_cache.get(e.time)
        if step is None:
            step = Step(args=tuple(self.find_chain(x, y, before=e.time) for x, y in zip(e.u.args, e.v.args)))
            self._cong_cache[e.time] = step
        if src is e.u:
            return step
        return Step(args=tuple(c.reversed() for c in step.args))

    def explain(self, a: Term, b: Term) -> set[int]:
        return chain_literals(self.find_chain(a, b))


def congruence_close(store: Store, literals: Iterable[int]) -> CongruenceClosure:
    """Closure of the positive equality and predicate literals."""
    cc = CongruenceClosure(store)
    for lit in literals:
        if lit > 0:
            cc.assert_atom(store.atom(lit))
    return cc


def find_chain(cc: CongruenceClosure, a: Term, b: Term) -> Chain:
    return cc.find_chain(a, b)


def is_consistent(store: Store, literals: Iterable[int]) -> bool:
    """Whether a conjunction of literals is EUF-satisfiable."""
    lits = set(literals)
    if any(-l in lits for l in lits):
        return False
    cc = CongruenceClosure(store)
    for l in lits:
        a = store.atom(l)
        if a.kind is AtomKind.EQ:
            cc.add_term(a.lhs)
            cc.add_term(a.rhs)
        elif a.kind is AtomKind.PRED:
            cc.add_term(a.term)
    for l in lits:
        if l > 0:
            cc.assert_atom(store.atom(l))
    true_preds: set[int] = set()
    false_preds: set[int] = set()
    for l in lits:
        a = store.atom(l)
        if a.kind is AtomKind.EQ and l < 0 and cc.same(a.lhs, a.rhs):
            return False
        if a.kind is AtomKind.PRED:
            (true_preds if l > 0 else false_preds).add(cc.find(a.term))
    return not (true_preds & false_preds)


def is_valid_clause(store: Store, clause: Iterable[int]) -> bool:
    return not is_consistent(store, [-l for l in clause])


# -- colourable chains ------------------------------------------------------

def step_mask(col: Coloring, u: Term, v: Term, step: Step) -> int:
    m = col.term_mask(u) & col.term_mask(v)
    for l in step_literals(step):
        m &= col.atom_mask(l)
    return m


def is_colorable_chain(col: Coloring, chain: Chain) -> bool:
    return all(step_mask(col, chain.terms[i], chain.terms[i + 1], s)
               for i, s in enumerate(chain.steps))


def make_colorable(store: Store, chain: Chain, col: Coloring) -> Chain:
    """Split congruence edges spanning partitions at global intermediate terms.

    Endpoints are preserved and so is the literal set; new application terms
    such as ``f(g)`` may be interned.
    """
    terms = [chain.terms[0]]
    steps: list[Step] = []
    for i, s in enumerate(chain.steps):
        u, v = chain.terms[i], chain.terms[i + 1]
        if not s.is_congruence:
            terms.append(v)
            steps.append(s)
            continue
        s2 = Step(args=tuple(make_colorable(store, c, col) for c in s.args))
        if step_mask(col, u, v, s2):
            terms.append(v)
            steps.append(s2)
            continue
        for w, st in _split_congruence(store, u, v, s2, col):
            terms.append(w)
            steps.append(st)
    return Chain(tuple(terms), tuple(steps))


def _split_congruence(store: Store, u: Term, v: Term, step: Step, col: Coloring) -> list[tuple[Term, Step]]:
    k = len(u.args)
    arg_chains = step.args
    glob = [[j for j, t in enumerate(c.terms) if col.is_global_term(t)] for c in arg_chains]
    # waypoints: per argument, indices into its chain
    moves: list[list[int]] = []
    first = [g[0] if g else len(c.terms) - 1 for g, c in zip(glob, arg_chains)]
    moves.append(first)
    pos = list(first)
    for i in range(k):
        for j in glob[i][1:]:
            pos = list(pos)
            pos[i] = j
            moves.append(pos)
    moves.append([len(c.terms) - 1 for c in arg_chains])

    pieces: list[tuple[list[int], list[int]]] = []
    cur = [0] * k
    for nxt in moves:
        if nxt != cur:
            pieces.append((cur, nxt))
            cur = nxt

    def app(idx: list[int]) -> Term:
        return store.term(u.head, *(c.terms[j] for c, j in zip(arg_chains, idx)))

    def piece_step(a: list[int], b: list[int]) -> Step:
        return Step(args=tuple(c.sub(i, j) for c, i, j in zip(arg_chains, a, b)))

    # greedily merge consecutive pieces while the merged edge stays colourable
    out: list[tuple[Term, Step]] = []
    start = [0] * k
    for n, (a, b) in enumerate(pieces):
        last = n == len(pieces) - 1
        end = b
        if not last:
            nb = pieces[n + 1][1]
            if step_mask(col, app(start), app(nb), piece_step(start, nb)):
                continue
        st = piece_step(start, end)
        src, dst = app(start), app(end)
        if not step_mask(col, src, dst, st):
            raise NoGlobalIntermediate(f"cannot colour congruence {u!r} ~ {v!r}")
        out.append((dst, st))
        start = end
    if out and out[-1][0] is not v:
        raise NoGlobalIntermediate("split did not reach the edge endpoint")
    return out
