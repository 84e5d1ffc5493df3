"""Proof transformations towards colourable, local-first refutations.

Every pass is a pure function ``Proof -> Proof`` over a shared
:class:`~multinterp.proof.ProofPool`.  Rewritten sub-proofs are rebuilt
bottom-up.  A node whose premise became stronger (lost the pivot) is replaced
by that premise, so clauses can only shrink on the way to the root.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .coloring import Coloring
from .euf import (Chain, CongruenceClosure, NoGlobalIntermediate, NotConnected,
                  chain_literals, chain_to_tautology, is_colorable_chain, make_colorable, step_mask)
from .logic import AtomKind
from .partitions import PartitionSet
from .proof import Proof, ProofError, ProofPool, Rule, derived_masks, leaf_mask


class MalformedProof(ProofError):
    pass


@dataclass
class TransformTrace:
    name: str
    size_before: int
    size_after: int
    handled: int = 0  # leaves cleaned / split, pivots recycled, nodes pushed
    stronger: int = 0  # rebuilt nodes whose clause shrank
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def added(self) -> int:
        return max(0, self.size_after - self.size_before)

    @property
    def removed(self) -> int:
        return max(0, self.size_before - self.size_after)

    def report(self) -> dict[str, object]:
        return {"size_before": self.size_before, "size_after": self.size_after,
                "handled": self.handled, "stronger": self.stronger,
                "seconds": round(self.seconds, 4)}


def noncolorable_literals(proof: Proof, col: Coloring) -> set[int]:
    """Atoms of the proof that are colourable in no partition."""
    out = set()
    for n in proof:
        for l in n.clause:
            if col.atom_mask(abs(l)) == 0:
                out.add(abs(l))
    return out


def _subdag(pool: ProofPool, root: int) -> list[int]:
    seen = {root}
    stack = [root]
    while stack:
        for p in pool[stack.pop()].premises:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return sorted(seen)


def replace_leaves(pool: ProofPool, root: int, mapping: dict[int, int]) -> int:
    """Rebuild the sub-proof at ``root`` with some leaves replaced."""
    if not mapping:
        return root
    new: dict[int, int] = {}
    for i in _subdag(pool, root):
        n = pool[i]
        if n.is_leaf:
            new[i] = mapping.get(i, i)
            continue
        a, b = new[n.premises[0]], new[n.premises[1]]
        new[i] = i if (a, b) == n.premises else pool.res_or_keep(a, b, n.pivot)
    return new[root]


def _rebuild(proof: Proof, at_res) -> tuple[Proof, int]:
    """Bottom-up rebuild; ``at_res(node, new_pos, new_neg)`` handles resolutions."""
    pool = proof.pool
    new: dict[int, int] = {}
    stronger = 0
    for i in proof.topo():
        n = pool[i]
        if n.is_leaf:
            new[i] = at_res(n, None, None) if n.rule is Rule.AXI else i
        else:
            new[i] = at_res(n, new[n.premises[0]], new[n.premises[1]])
        if pool[new[i]].clause != n.clause:
            stronger += 1
    return Proof(pool, new[proof.root]), stronger


# -- pass 1 ---------------------------------------------------------------------

def eliminate_literal(pool: ProofPool, pos: int, neg: int, a: int) -> tuple[int, int]:
    """Resolve ``pos`` (holding ``a``) with ``neg`` without ever resolving on ``a``.

    Returns the new node and the number of defining leaves rewritten.
    """
    if a not in pool[pos].clause:
        return pos, 0
    if -a not in pool[neg].clause:
        return neg, 0
    defs = [i for i in _subdag(pool, pos) if pool[i].is_leaf and a in pool[i].clause]
    uses = [i for i in _subdag(pool, neg) if pool[i].is_leaf and -a in pool[i].clause]
    for i in defs + uses:
        if pool[i].rule is not Rule.AXI:
            raise MalformedProof(f"non-colourable literal in non-theory leaf {i}")
    repl: dict[int, int] = {}
    for d in defs:
        implying = pool[d].clause - {a}
        m = {u: pool.axi((pool[u].clause - {-a}) | implying) for u in uses}
        repl[d] = replace_leaves(pool, neg, m)
    return replace_leaves(pool, pos, repl), len(defs)


def remove_noncolorable_literals(proof: Proof, ps: PartitionSet) -> tuple[Proof, TransformTrace]:
    """Eliminate literals that are colourable in no partition.

    Resolving nodes are handled lowest id first, so when a node ``n_r`` on a
    non-colourable pivot ``a`` is reached both of its rebuilt premises are
    already free of such resolutions.  For each defining leaf ``n_d`` of ``a``
    in the positive premise, the negative premise is rebuilt with every using
    leaf ``(not a or R)`` turned into ``(not X_d or R)``; that sub-proof then
    takes the place of ``n_d``, which replicates the resolutions on the
    implying literals ``X_d`` between ``n_d`` and ``n_r``.
    """
    t0 = time.perf_counter()
    pool, col = proof.pool, ps.coloring
    before = len(proof)
    handled = 0

    def at_res(n, a, b):
        nonlocal handled
        if a is None:
            return n.id
        if col.atom_mask(n.pivot) == 0:
            out, k = eliminate_literal(pool, a, b, n.pivot)
            handled += k
            return out
        return n.id if (a, b) == n.premises else pool.res_or_keep(a, b, n.pivot)

    out, stronger = _rebuild(proof, at_res)
    left = noncolorable_literals(out, col)
    if left:
        raise MalformedProof(f"non-colourable literals remain: {sorted(left)}")
    return out, TransformTrace("remove_noncolorable_literals", before, len(out), handled,
                               stronger, time.perf_counter() - t0)


# -- pass 2 ---------------------------------------------------------------------

def tautology_chain(pool: ProofPool, clause: frozenset) -> Chain:
    """Shortest chain from the implying literals to the implied literal."""
    store = pool.store
    pos = [l for l in clause if l > 0]
    if len(pos) != 1:
        raise MalformedProof("theory clause needs exactly one implied literal")
    implied = store.atoms[pos[0]]
    cc = CongruenceClosure(store)
    negs = [store.atoms[-l] for l in clause if l < 0]
    for x in negs:
        if x.kind is AtomKind.EQ:
            cc.add_term(x.lhs)
            cc.add_term(x.rhs)
        elif x.kind is AtomKind.PRED:
            cc.add_term(x.term)
    if implied.kind is AtomKind.EQ:
        cc.add_term(implied.lhs)
        cc.add_term(implied.rhs)
    else:
        cc.add_term(implied.term)
    for x in negs:
        if x.kind is AtomKind.EQ:
            cc.merge(x.lhs, x.rhs, x)
    try:
        if implied.kind is AtomKind.EQ:
            return cc.find_chain(implied.lhs, implied.rhs)
        if implied.kind is AtomKind.PRED:
            for x in sorted(negs, key=lambda x: x.id):
                if x.kind is AtomKind.PRED and cc.same(x.term, implied.term):
                    return cc.find_chain(x.term, implied.term)
    except NotConnected:
        pass
    raise MalformedProof(f"no chain justifies {store.clause_str(clause)}")


class _Splitter:
    def __init__(self, pool: ProofPool, col: Coloring):
        self.pool, self.col, self.store = pool, col, pool.store

    def _edge_mask(self, chain: Chain, i: int) -> int:
        return step_mask(self.col, chain.terms[i], chain.terms[i + 1], chain.steps[i])

    def eq_node(self, chain: Chain) -> int | None:
        """Node for ``not Lits(chain) or start=end`` from colourable leaves;
        None when the chain is the implied equality itself."""
        store, pool, col = self.store, self.pool, self.col
        if len(chain) == 1 and chain.steps[0].atom is not None \
                and chain.steps[0].atom is store.eq_atom(chain.start, chain.end):
            return None
        taut = chain_to_tautology(store, chain)
        if col.clause_mask(taut):
            return pool.axi(taut)
        glob = [i for i, t in enumerate(chain.terms) if col.is_global_term(t)]
        if not glob:
            raise MalformedProof(f"chain {chain!r} has no global term")
        last = len(chain.terms) - 1
        if glob[0] != 0 or glob[-1] != last:
            p, q = glob[0], glob[-1]
            inner = self.eq_node(chain.sub(p, q)) if p != q else None
            lits = {-l for l in chain_literals(chain.sub(0, p)) | chain_literals(chain.sub(q, last))}
            if p != q:
                lits.add(-store.eq_atom(chain.terms[p], chain.terms[q]).id)
            outer = pool.axi(lits | {store.eq_atom(chain.start, chain.end).id})
            if col.clause_mask(pool[outer].clause) == 0:
                raise MalformedProof("local chain ends belong to different partitions")
            if inner is None:
                return outer
            return pool.res(outer, inner, store.eq_atom(chain.terms[p], chain.terms[q]).id)
        # both ends global: cut at the last global term before the colour changes
        mask = col.full
        k = None
        for i in range(len(chain)):
            m = mask & self._edge_mask(chain, i)
            if m == 0:
                k = max(j for j in glob if j <= i)
                break
            mask = m
        if k is None or k == 0:
            raise MalformedProof("cannot segment chain")
        shortcut = store.eq_atom(chain.terms[k], chain.end)
        left = pool.axi({-l for l in chain_literals(chain.sub(0, k))}
                        | {-shortcut.id, store.eq_atom(chain.start, chain.end).id})
        right = self.eq_node(chain.sub(k, last))
        if right is None:
            return left
        return pool.res(left, right, shortcut.id)

    def pred_node(self, chain: Chain) -> int:
        """``not Lits or not P(start) or P(end)`` through per-edge implications."""
        store, pool = self.store, self.pool
        acc = None
        for i, s in enumerate(chain.steps):
            u, v = chain.terms[i], chain.terms[i + 1]
            pu, pv = store.pred_atom_of_term(u).id, store.pred_atom_of_term(v).id
            lits = {-l for l in chain_literals(Chain((u, v), (s,)))}
            node = pool.axi(lits | {-pu, pv})
            if self.col.clause_mask(pool[node].clause) == 0:
                raise MalformedProof("predicate edge is not colourable")
            acc = node if acc is None else pool.res(acc, node, pu)
        if acc is None:
            raise MalformedProof("empty predicate chain")
        return acc

    def split(self, clause: frozenset) -> int:
        chain = tautology_chain(self.pool, clause)
        try:
            chain = make_colorable(self.store, chain, self.col)
        except NoGlobalIntermediate as exc:
            raise MalformedProof(str(exc)) from None
        if not is_colorable_chain(self.col, chain):
            raise MalformedProof("chain could not be coloured")
        if chain.start.is_predicate_app:
            return self.pred_node(chain)
        node = self.eq_node(chain)
        if node is None:
            return self.pool.axi(chain_to_tautology(self.store, chain))
        return node


def split_noncolorable_tautologies(proof: Proof, ps: PartitionSet) -> tuple[Proof, TransformTrace]:
    t0 = time.perf_counter()
    pool, col = proof.pool, ps.coloring
    before = len(proof)
    bad = noncolorable_literals(proof, col)
    if bad:
        raise MalformedProof("splitting needs a proof without non-colourable literals")
    sp = _Splitter(pool, col)
    handled = 0

    def at_res(n, a, b):
        nonlocal handled
        if a is None:
            if col.clause_mask(n.clause):
                return n.id
            handled += 1
            new = sp.split(n.clause)
            if not pool[new].clause <= n.clause:
                raise MalformedProof(f"split of leaf {n.id} does not entail it")
            return new
        return n.id if (a, b) == n.premises else pool.res_or_keep(a, b, n.pivot)

    out, stronger = _rebuild(proof, at_res)
    return out, TransformTrace("split_noncolorable_tautologies", before, len(out), handled,
                               stronger, time.perf_counter() - t0)


# -- pass 3 ---------------------------------------------------------------------

def remove_redundancies(proof: Proof, ps: PartitionSet | None = None) -> tuple[Proof, TransformTrace]:
    """Recycle pivots with intersection.

    ``safe(n)`` holds literals certainly resolved away below ``n`` on every
    path to the root.  A resolution whose pivot literal is already safe is
    replaced by the premise containing it.
    """
    t0 = time.perf_counter()
    pool = proof.pool
    before = len(proof)
    order = proof.topo()
    safe: dict[int, frozenset | None] = {i: None for i in order}
    safe[proof.root] = frozenset()
    keep: dict[int, int | None] = {}  # node -> premise replacing it, if any
    handled = 0
    for i in reversed(order):
        s = safe[i]
        if s is None:  # unreachable after earlier cuts
            continue
        n = pool[i]
        if n.is_leaf:
            continue
        pos, neg = n.premises
        x = n.pivot
        if x in s:
            keep[i] = pos
            contrib = {pos: s}
            handled += 1
        elif -x in s:
            keep[i] = neg
            contrib = {neg: s}
            handled += 1
        else:
            contrib = {pos: s | {x}, neg: s | {-x}}
        for p, c in contrib.items():
            safe[p] = c if safe[p] is None else safe[p] & c
    new: dict[int, int] = {}
    stronger = 0
    for i in order:
        if safe[i] is None:
            continue
        n = pool[i]
        if n.is_leaf:
            new[i] = i
        elif i in keep:
            new[i] = new[keep[i]]
        else:
            a, b = new[n.premises[0]], new[n.premises[1]]
            new[i] = i if (a, b) == n.premises else pool.res_or_keep(a, b, n.pivot)
        if pool[new[i]].clause != n.clause:
            stronger += 1
    out = Proof(pool, new[proof.root])
    return out, TransformTrace("remove_redundancies", before, len(out), handled, stronger,
                               time.perf_counter() - t0)


# -- pass 4 ---------------------------------------------------------------------

def reorder_local_first(proof: Proof, ps: PartitionSet) -> tuple[Proof, TransformTrace]:
    """Push local-pivot resolutions above global-pivot ones.

    A local pivot ``l`` resolved between premises with disjoint partition
    masks is moved into the premise that mixes partitions, which must end in
    a global pivot ``g``; depending on whether one or both premises of that
    node carry ``l`` this is the first or the second swap rule.
    """
    t0 = time.perf_counter()
    pool, col = proof.pool, ps.coloring
    before = len(proof)
    d = derived_masks(proof, ps)
    memo: dict[tuple[int, int, int], int] = {}
    pushes = 0

    def mask(i: int) -> int:
        m = d.get(i)
        if m is None:
            n = pool[i]
            if n.is_leaf:
                m = leaf_mask(ps, n)
            else:
                m = mask(n.premises[0]) & mask(n.premises[1])
            d[i] = m
        return m

    def has(i: int, lit: int) -> bool:
        return lit in pool[i].clause

    def push(p: int, x: int, lam: int) -> int:
        """Resolve the occurrence of atom ``lam`` in ``p`` against ``x``."""
        nonlocal pushes
        key = (p, x, lam)
        hit = memo.get(key)
        if hit is not None:
            return hit
        cp = pool[p].clause
        lit = lam if lam in cp else -lam if -lam in cp else None
        if lit is None:
            res = p
        elif -lit not in pool[x].clause:
            res = x
        elif mask(p) & mask(x):
            res = pool.res(p, x, lam)
        else:
            n = pool[p]
            if n.is_leaf or not col.is_global_atom(n.pivot):
                if mask(p) == 0:
                    raise MalformedProof(f"cannot reorder local pivot {lam} at node {p}")
                res = push(x, p, lam)
            else:
                pushes += 1
                a, b = n.premises
                a2 = push(a, x, lam) if has(a, lit) else a
                b2 = push(b, x, lam) if has(b, lit) else b
                res = pool.res_or_keep(a2, b2, n.pivot)
        memo[key] = res
        return res

    def at_res(n, a, b):
        if a is None:
            return n.id
        if not col.is_global_atom(n.pivot):
            if n.pivot not in pool[a].clause:
                return a
            if -n.pivot not in pool[b].clause:
                return b
            if mask(a) & mask(b) == 0:
                return push(a, b, n.pivot)
            return pool.res(a, b, n.pivot)
        return n.id if (a, b) == n.premises else pool.res_or_keep(a, b, n.pivot)

    out, stronger = _rebuild(proof, at_res)
    return out, TransformTrace("reorder_local_first", before, len(out), pushes, stronger,
                               time.perf_counter() - t0)


# -- driver -----------------------------------------------------------------------

def make_local_first(proof: Proof, ps: PartitionSet, redundancy: bool = True) -> tuple[Proof, list[TransformTrace]]:
    traces = []
    for fn in (remove_noncolorable_literals, split_noncolorable_tautologies,
               remove_redundancies, reorder_local_first):
        if fn is remove_redundancies and not redundancy:
            continue
        proof, tr = fn(proof, ps)
        traces.append(tr)
    return proof, traces
