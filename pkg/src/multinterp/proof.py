"""Resolution proofs over EUF clauses.

A :class:`ProofPool` owns immutable nodes; a :class:`Proof` is a root id in a
pool.  Transformations add nodes to the pool and return a new root, so
unchanged sub-DAGs are shared between the input and output proofs.

Resolution nodes store the premise containing the pivot positively first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .coloring import lowest
from .euf import is_valid_clause
from .logic import Store
from .partitions import PartitionSet


class ProofError(Exception):
    pass


class Rule(enum.Enum):
    HYP = "hyp"
    AXI = "axi"
    RES = "res"
    LOCAL = "local"  # collapsed single-partition sub-proof


@dataclass(frozen=True, eq=False)
class ProofNode:
    id: int
    rule: Rule
    clause: frozenset
    premises: tuple[int, ...] = ()
    pivot: int = 0
    partition: int | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.premises


def resolve_clauses(pos: frozenset, neg: frozenset, pivot: int) -> frozenset:
    if pivot not in pos or -pivot not in neg:
        raise ProofError(f"pivot {pivot} does not occur with opposite signs")
    return (pos - {pivot}) | (neg - {-pivot})


class ProofPool:
    def __init__(self, store: Store):
        self.store = store
        self.nodes: list[ProofNode] = []
        self._leaf_table: dict[tuple, int] = {}
        self._res_table: dict[tuple, int] = {}

    def __getitem__(self, i: int) -> ProofNode:
        return self.nodes[i]

    def _add(self, **kw) -> int:
        n = ProofNode(id=len(self.nodes), **kw)
        self.nodes.append(n)
        return n.id

    def leaf(self, rule: Rule, clause: Iterable[int], partition: int | None = None) -> int:
        clause = frozenset(clause)
        key = (rule, clause, partition)
        i = self._leaf_table.get(key)
        if i is None:
            i = self._add(rule=rule, clause=clause, partition=partition)
            self._leaf_table[key] = i
        return i

    def hyp(self, clause: Iterable[int]) -> int:
        return self.leaf(Rule.HYP, clause)

    def axi(self, clause: Iterable[int]) -> int:
        return self.leaf(Rule.AXI, clause)

    def res(self, a: int, b: int, pivot: int) -> int:
        """Resolve on atom ``abs(pivot)``; premise order is normalised."""
        pivot = abs(pivot)
        ca, cb = self.nodes[a].clause, self.nodes[b].clause
        if pivot in ca and -pivot in cb:
            pos, neg = a, b
        elif pivot in cb and -pivot in ca:
            pos, neg = b, a
        else:
            raise ProofError(f"cannot resolve nodes {a} and {b} on {pivot}")
        key = (pos, neg, pivot)
        i = self._res_table.get(key)
        if i is None:
            clause = resolve_clauses(self.nodes[pos].clause, self.nodes[neg].clause, pivot)
            i = self._add(rule=Rule.RES, clause=clause, premises=(pos, neg), pivot=pivot)
            self._res_table[key] = i
        return i

    def res_or_keep(self, a: int, b: int, pivot: int) -> int:
        """Resolution that tolerates a missing pivot by keeping the premise
        lacking it (its clause is then a subset of the intended resolvent)."""
        pivot = abs(pivot)
        ca, cb = self.nodes[a].clause, self.nodes[b].clause
        a_has = pivot in ca or -pivot in ca
        b_has = pivot in cb or -pivot in cb
        if a_has and b_has and ((pivot in ca and -pivot in cb) or (pivot in cb and -pivot in ca)):
            return self.res(a, b, pivot)
        if not a_has and not b_has:
            return a if len(ca) <= len(cb) else b
        if not a_has:
            return a
        if not b_has:
            return b
        raise ProofError(f"premises {a} and {b} carry {pivot} with the same sign")

    def local(self, clause: Iterable[int], partition: int) -> int:
        return self.leaf(Rule.LOCAL, clause, partition)


@dataclass
class Proof:
    pool: ProofPool
    root: int

    @property
    def store(self) -> Store:
        return self.pool.store

    def node(self, i: int) -> ProofNode:
        return self.pool.nodes[i]

    @property
    def root_node(self) -> ProofNode:
        return self.pool.nodes[self.root]

    def topo(self) -> list[int]:
        """Reachable node ids, premises before conclusions (ascending ids)."""
        seen = {self.root}
        stack = [self.root]
        nodes = self.pool.nodes
        while stack:
            i = stack.pop()
            for p in nodes[i].premises:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return sorted(seen)

    def __len__(self) -> int:
        return len(self.topo())

    def __iter__(self) -> Iterator[ProofNode]:
        return (self.pool.nodes[i] for i in self.topo())

    def leaves(self) -> list[ProofNode]:
        return [n for n in self if n.is_leaf]

    def parents(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {i: [] for i in self.topo()}
        for i in out:
            for p in self.pool.nodes[i].premises:
                out[p].append(i)
        return out


# -- checking -----------------------------------------------------------------

@dataclass
class CheckReport:
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, node: int, msg: str) -> None:
        self.errors.append((node, msg))

    def __str__(self) -> str:
        if self.ok:
            return "proof accepted"
        return "\n".join(f"node {i}: {m}" for i, m in self.errors)


def check_proof(proof: Proof, formula: Iterable[frozenset], allow_local: bool = False) -> CheckReport:
    """Check the structural and semantic conditions of an unsatisfiability proof."""
    store = proof.store
    rep = CheckReport()
    clauses = {frozenset(c) for c in formula}
    known = {abs(l) for c in clauses for l in c}
    nodes = proof.pool.nodes
    order = proof.topo()
    if nodes[proof.root].clause:
        rep.add(proof.root, "root clause is not empty")
    pending: list[tuple[int, frozenset, int]] = []
    for i in order:
        n = nodes[i]
        if n.rule is Rule.HYP:
            if n.premises:
                rep.add(i, "hypothesis with premises")
            if n.clause not in clauses:
                rep.add(i, "hypothesis clause is not in the formula")
        elif n.rule is Rule.AXI:
            if n.premises:
                rep.add(i, "axiom with premises")
            pos = [l for l in n.clause if l > 0]
            if len(pos) != 1:
                rep.add(i, "theory clause must have exactly one implied (positive) literal")
            elif not is_valid_clause(store, n.clause):
                rep.add(i, "theory clause is not EUF-valid")
            else:
                pending.append((i, frozenset(-l for l in n.clause if l < 0), pos[0]))
        elif n.rule is Rule.RES:
            if len(n.premises) != 2 or n.premises[0] == n.premises[1]:
                rep.add(i, "resolution needs two distinct premises")
                continue
            a, b = n.premises
            if a >= i or b >= i:
                rep.add(i, "premise is not older than its conclusion")
                continue
            ca, cb = nodes[a].clause, nodes[b].clause
            if n.pivot not in ca or -n.pivot not in cb:
                rep.add(i, f"pivot {store.lit_str(n.pivot)} missing from a premise")
            elif resolve_clauses(ca, cb, n.pivot) != n.clause:
                rep.add(i, "resolvent does not match the premises")
        elif n.rule is Rule.LOCAL:
            if not allow_local:
                rep.add(i, "collapsed local leaf in a full proof")
    # some order must introduce every new implied literal after its implying ones
    progress = True
    while pending and progress:
        progress = False
        rest = []
        for i, implying, implied in pending:
            if implying <= known:
                known.add(implied)
                progress = True
            else:
                rest.append((i, implying, implied))
        pending = rest
    for i, _, _ in pending:
        rep.add(i, "theory clause uses literals never introduced before")
    return rep


# -- partition attributes -------------------------------------------------------

def leaf_mask(ps: PartitionSet, n: ProofNode) -> int:
    """Partitions a leaf may be attributed to."""
    if n.rule is Rule.HYP:
        return ps.membership.get(n.clause, 0)
    if n.rule is Rule.LOCAL:
        return 1 << n.partition
    return ps.coloring.clause_mask(n.clause)


def derived_masks(proof: Proof, ps: PartitionSet) -> dict[int, int]:
    """For each node, the set of partitions all its leaves can be attributed to.

    Zero means the node mixes partitions.  Global-only theory leaves get the
    full mask, which acts as a wildcard in the intersection.
    """
    out: dict[int, int] = {}
    nodes = proof.pool.nodes
    for i in proof.topo():
        n = nodes[i]
        if n.is_leaf:
            out[i] = leaf_mask(ps, n)
        else:
            out[i] = out[n.premises[0]] & out[n.premises[1]]
    return out


def is_colorable(proof: Proof, ps: PartitionSet) -> tuple[bool, int | None]:
    col = ps.coloring
    for n in proof:
        if n.is_leaf and n.rule is not Rule.LOCAL and col.clause_mask(n.clause) == 0:
            return False, n.id
    return True, None


def is_local_first(proof: Proof, ps: PartitionSet) -> tuple[bool, int | None]:
    ok, bad = is_colorable(proof, ps)
    if not ok:
        raise ProofError(f"proof is not colourable (leaf {bad})")
    d = derived_masks(proof, ps)
    col = ps.coloring
    for i in proof.topo():
        n = proof.pool.nodes[i]
        if n.rule is Rule.RES and not col.is_global_atom(n.pivot):
            a, b = n.premises
            if d[a] & d[b] == 0:
                return False, i
    return True, None


def prune_local_subtrees(proof: Proof, ps: PartitionSet) -> Proof:
    """Collapse maximal single-partition resolution sub-proofs into LOCAL leaves."""
    d = derived_masks(proof, ps)
    pool = proof.pool
    nodes = pool.nodes
    new: dict[int, int] = {}
    for i in proof.topo():
        n = nodes[i]
        if n.is_leaf:
            new[i] = i
        elif d[i]:
            new[i] = pool.local(n.clause, lowest(d[i]))
        else:
            a, b = (new[p] for p in n.premises)
            new[i] = i if (a, b) == n.premises else pool.res(a, b, n.pivot)
    return Proof(pool, new[proof.root])


# -- text format ----------------------------------------------------------------

def proof_to_text(proof: Proof) -> str:
    """One node per line: ``k rule clause [premise premise pivot] [w]``.

    Nodes are renumbered 0.. in topological order, so the text is canonical.
    """
    store = proof.store
    num: dict[int, int] = {}
    lines = []
    for n in proof:
        k = num[n.id] = len(num)
        parts = [str(k), n.rule.value, store.clause_str(n.clause)]
        if n.rule is Rule.RES:
            parts += [str(num[n.premises[0]]), str(num[n.premises[1]]), store.lit_str(n.pivot)]
        if n.rule is Rule.LOCAL:
            parts.append(str(n.partition))
        lines.append(" ".join(parts))
    lines.append(f"root {num[proof.root]}")
    return "\n".join(lines) + "\n"


def proof_from_text(store: Store, text: str, pool: ProofPool | None = None) -> Proof:
    from .sexpr import ParseError, parse_clause, parse_literal, read_all

    pool = pool or ProofPool(store)
    ids: dict[int, int] = {}
    root = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        items = read_all(line)
        if items[0] == "root":
            if len(items) != 2:
                raise ParseError(f"line {lineno}: bad root line")
            root = ids.get(int(items[1]))
            if root is None:
                raise ParseError(f"line {lineno}: unknown root node")
            continue
        try:
            nid, rule = int(items[0]), Rule(items[1])
            clause = parse_clause(store, items[2])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if rule is Rule.RES:
            if len(items) != 6:
                raise ParseError(f"line {lineno}: resolution needs premises and a pivot")
            try:
                a, b = ids[int(items[3])], ids[int(items[4])]
            except (KeyError, ValueError):
                raise ParseError(f"line {lineno}: unknown premise") from None
            pivot = parse_literal(store, items[5])
            i = pool._add(rule=rule, clause=clause, premises=(a, b), pivot=abs(pivot))
        elif rule is Rule.LOCAL:
            if len(items) != 4:
                raise ParseError(f"line {lineno}: local leaf needs a partition")
            i = pool._add(rule=rule, clause=clause, partition=int(items[3]))
        else:
            if len(items) != 3:
                raise ParseError(f"line {lineno}: trailing fields")
            i = pool._add(rule=rule, clause=clause)
        ids[nid] = i
    if root is None:
        raise ParseError("missing root line")
    return Proof(pool, root)


def proof_to_dot(proof: Proof, ps: PartitionSet | None = None) -> str:
    """Graphviz rendering; with ``ps`` nodes are labelled by their derived mask."""
    store = proof.store
    d = derived_masks(proof, ps) if ps is not None else {}
    lines = ["digraph proof {", "  rankdir=BT;"]
    for n in proof:
        label = store.clause_str(n.clause).replace('"', "'")
        if n.id in d:
            label += f"\\nD={d[n.id]:b}"
        shape = "box" if n.is_leaf else "ellipse"
        lines.append(f'  n{n.id} [shape={shape},label="{n.id}: {label}"];')
        if n.rule is Rule.RES:
            for p in n.premises:
                lines.append(f"  n{p} -> n{n.id};")
    lines.append("}")
    return "\n".join(lines) + "\n"
