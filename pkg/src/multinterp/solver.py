"""Proof-producing CDCL solver for CNF over EUF.

Theory reasoning is congruence closure checked after every unit-propagation
fixpoint.  Conflicts and theory propagations are justified by theory clauses
built from shortest congruence-graph chains.  With ``split_congruences`` the
explanation is decomposed the way proof-producing SMT solvers do it: every
congruence edge ``f(a)=f(b)`` gets its own congruence clause, and argument
equalities that are not input atoms get their own transitivity clause.  This
introduces new atoms, each defined before it is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .euf import Chain, CongruenceClosure, Step, chain_literals, chain_to_tautology, is_consistent
from .logic import Atom, AtomKind, Store, Term
from .proof import Proof, ProofPool


class ResourceLimit(Exception):
    pass


@dataclass
class SolveResult:
    sat: bool
    model: dict[int, bool] | None = None
    proof: Proof | None = None
    stats: dict[str, int] = field(default_factory=dict)


@dataclass
class SolverConfig:
    step_budget: int = 2_000_000
    split_congruences: bool = True


class Solver:
    def __init__(self, store: Store, clauses: Iterable[Iterable[int]],
                 config: SolverConfig | None = None, pool: ProofPool | None = None):
        self.store = store
        self.config = config or SolverConfig()
        self.pool = pool or ProofPool(store)
        self.clauses: list[frozenset] = []
        self.nodes: list[int] = []
        self.occ: dict[int, list[int]] = {}
        self.input_clauses: list[frozenset] = []
        seen = set()
        for c in clauses:
            c = frozenset(c)
            if c in seen:
                continue
            seen.add(c)
            self.input_clauses.append(c)
        self.atoms = sorted({abs(l) for c in self.input_clauses for l in c})
        self.theory_atoms = [a for a in self.atoms if store.atoms[a].kind is not AtomKind.BOOL]
        self.value: dict[int, bool] = {}
        self.level: dict[int, int] = {}
        self.reason: dict[int, int | None] = {}
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.steps = 0
        self.stats = {"decisions": 0, "conflicts": 0, "theory_conflicts": 0, "theory_props": 0}
        self._cc: CongruenceClosure | None = None
        self._cc_pos = 0
        self._checked = 0  # trail prefix known to be theory-consistent
        self._term_atoms: dict[int, list[int]] = {}
        self._pred_of_term: dict[int, Atom] = {}
        for a in self.theory_atoms:
            atom = store.atoms[a]
            if atom.kind is AtomKind.EQ:
                for t in {atom.lhs.id, atom.rhs.id}:
                    self._term_atoms.setdefault(t, []).append(a)
            else:
                self._term_atoms.setdefault(atom.term.id, []).append(a)
                self._pred_of_term[atom.term.id] = atom
        self.activity = {a: 0.0 for a in self.atoms}
        self.phase = {a: False for a in self.atoms}
        self._inc = 1.0
        self._is_theory = {a: store.atoms[a].kind is not AtomKind.BOOL for a in self.atoms}

    # -- clause database --------------------------------------------------------
    def _add_clause(self, clause: frozenset, node: int) -> int:
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.nodes.append(node)
        for l in clause:
            self.occ.setdefault(l, []).append(idx)
        return idx

    def _lit_value(self, lit: int) -> bool | None:
        v = self.value.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def _assign(self, lit: int, reason: int | None) -> None:
        a = abs(lit)
        self.value[a] = lit > 0
        self.level[a] = len(self.trail_lim)
        self.reason[a] = reason
        self.trail.append(lit)

    def _backjump(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        cut = self.trail_lim[lvl]
        for lit in self.trail[cut:]:
            a = abs(lit)
            self.phase[a] = self.value[a]
            del self.value[a]
            del self.level[a]
            del self.reason[a]
        del self.trail[cut:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))
        if self._cc_pos > len(self.trail):
            self._cc = None
        self._checked = min(self._checked, len(self.trail))

    # -- propagation --------------------------------------------------------------
    def _bcp(self) -> int | None:
        """Unit propagation; returns the proof node of a falsified clause."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            for idx in self.occ.get(-lit, ()):
                clause = self.clauses[idx]
                unassigned = 0
                last = 0
                sat = False
                for l in clause:
                    v = self._lit_value(l)
                    if v is None:
                        unassigned += 1
                        last = l
                        if unassigned > 1:
                            break
                    elif v:
                        sat = True
                        break
                if sat or unassigned > 1:
                    continue
                if unassigned == 0:
                    return self.nodes[idx]
                self._assign(last, self.nodes[idx])
        return None

    # -- theory ---------------------------------------------------------------------
    def _closure(self) -> tuple[CongruenceClosure, bool]:
        """Closure of the trail's positive equalities; flag is True when rebuilt."""
        rebuilt = False
        if self._cc is None:
            cc = CongruenceClosure(self.store)
            for a in self.theory_atoms:
                atom = self.store.atoms[a]
                if atom.kind is AtomKind.EQ:
                    cc.add_term(atom.lhs)
                    cc.add_term(atom.rhs)
                else:
                    cc.add_term(atom.term)
            self._cc = cc
            self._cc_pos = 0
            rebuilt = True
        cc = self._cc
        while self._cc_pos < len(self.trail):
            lit = self.trail[self._cc_pos]
            self._cc_pos += 1
            atom = self.store.atoms[abs(lit)]
            if lit > 0 and atom.kind is AtomKind.EQ:
                cc.merge(atom.lhs, atom.rhs, atom)
        return cc, rebuilt

    def _candidates(self, cc: CongruenceClosure, rebuilt: bool) -> list[int]:
        """Theory atoms whose status may have changed since the last clean check."""
        if rebuilt:
            cc.touched.clear()
            return self.theory_atoms
        cand = {abs(l) for l in self.trail[self._checked:] if self._is_theory[abs(l)]}
        roots = {cc.find(r) for r in cc.touched}
        cc.touched.clear()
        for r in roots:
            for t in cc._members[r]:
                cand.update(self._term_atoms.get(t.id, ()))
        return sorted(cand)

    def _theory(self) -> tuple[str, int] | None:
        """Check the trail; return ('conflict', node) or ('prop', count) or None."""
        store = self.store
        if not any(self._is_theory[abs(l)] for l in self.trail[self._checked:]):
            self._checked = len(self.trail)
            return None
        cc, rebuilt = self._closure()
        cand = self._candidates(cc, rebuilt)
        value = self.value
        pred_classes: dict[int, tuple[list[Atom], list[Atom], list[Atom]]] = {}
        for a in cand:
            atom = store.atoms[a]
            if atom.kind is AtomKind.EQ:
                if value.get(a) is False and cc.same(atom.lhs, atom.rhs):
                    self.stats["theory_conflicts"] += 1
                    return "conflict", self._eq_node(cc.find_chain(atom.lhs, atom.rhs))
            else:
                r = cc.find(atom.term)
                if r not in pred_classes:
                    pos, neg, free = [], [], []
                    for t in cc._members[r]:
                        p = self._pred_of_term.get(t.id)
                        if p is not None:
                            v = value.get(p.id)
                            (free if v is None else pos if v else neg).append(p)
                    pred_classes[r] = (pos, neg, free)
        for r in sorted(pred_classes):
            pos, neg, _ = pred_classes[r]
            if pos and neg:
                self.stats["theory_conflicts"] += 1
                p, q = min(pos, key=lambda x: x.id), min(neg, key=lambda x: x.id)
                return "conflict", self._pred_node(cc.find_chain(p.term, q.term))
        count = 0
        for a in cand:
            atom = store.atoms[a]
            if atom.kind is AtomKind.EQ and a not in value and cc.same(atom.lhs, atom.rhs):
                self._assign(a, self._eq_node(cc.find_chain(atom.lhs, atom.rhs)))
                count += 1
        for r in sorted(pred_classes):
            pos, neg, free = pred_classes[r]
            for atom in sorted(free, key=lambda x: x.id):
                if pos:
                    p = min(pos, key=lambda x: x.id)
                    self._assign(atom.id, self._pred_node(cc.find_chain(p.term, atom.term)))
                    count += 1
                elif neg:
                    q = min(neg, key=lambda x: x.id)
                    self._assign(-atom.id, self._pred_node(cc.find_chain(atom.term, q.term)))
                    count += 1
        if count:
            self.stats["theory_props"] += count
            return "prop", count
        self._checked = len(self.trail)
        return None

    # -- explanations -------------------------------------------------------------------
    def _eq_node(self, chain: Chain) -> int:
        """Node with clause ``not Lits(chain) or start=end``."""
        node = self._eq_node_opt(chain)
        if node is None:  # only reachable for chains a=b justified by a=b itself
            raise AssertionError("trivial explanation requested")
        return node

    def _eq_node_opt(self, chain: Chain) -> int | None:
        store, pool = self.store, self.pool
        target = chain_to_tautology(store, chain)
        if not self.config.split_congruences:
            return pool.axi(target)
        a, b = chain.start, chain.end
        goal = store.eq_atom(a, b)
        if len(chain) == 0:
            return pool.axi([goal.id])
        if len(chain) == 1:
            step = chain.steps[0]
            if step.atom is not None:
                return None if step.atom is goal else pool.axi(target)
            return self._cong_node(a, b, step)
        edge_atoms = []
        for i, s in enumerate(chain.steps):
            edge_atoms.append(s.atom if s.atom is not None
                              else store.eq_atom(chain.terms[i], chain.terms[i + 1]))
        node = pool.axi([-e.id for e in edge_atoms] + [goal.id])
        done = set()
        for i, s in enumerate(chain.steps):
            e = edge_atoms[i]
            if s.atom is not None or e.id in done:
                continue
            done.add(e.id)
            sub = self._cong_node(chain.terms[i], chain.terms[i + 1], s)
            if -e.id not in pool[node].clause or e.id not in pool[sub].clause:
                return pool.axi(target)
            node = pool.res(sub, node, e.id)
        return node if pool[node].clause == target else pool.axi(target)

    def _cong_node(self, u: Term, v: Term, step: Step) -> int:
        store = self.store
        implied = store.eq_atom(u, v)
        return self._args_node(step, [implied.id], u, v)

    def _args_node(self, step: Step, head: list[int], u: Term, v: Term) -> int:
        store, pool = self.store, self.pool
        arg_atoms = [store.eq_atom(c.start, c.end) for c in step.args if c.start is not c.end]
        node = pool.axi([-x.id for x in arg_atoms] + head)
        target = frozenset({-l for l in chain_literals(Chain((u, v), (step,)))} | set(head))
        for c in step.args:
            if c.start is c.end:
                continue
            sub = self._eq_node_opt(c)
            if sub is None:
                continue
            x = store.eq_atom(c.start, c.end).id
            if -x not in pool[node].clause or x not in pool[sub].clause:
                return pool.axi(target)
            node = pool.res(sub, node, x)
        return node if pool[node].clause == target else pool.axi(target)

    def _pred_node(self, chain: Chain) -> int:
        """Node with clause ``not Lits(chain) or not P(start) or P(end)``."""
        store, pool = self.store, self.pool
        target = chain_to_tautology(store, chain)
        if not self.config.split_congruences or len(chain) == 0:
            return pool.axi(target)
        acc = None
        for i, s in enumerate(chain.steps):
            u, v = chain.terms[i], chain.terms[i + 1]
            head = [-store.pred_atom_of_term(u).id, store.pred_atom_of_term(v).id]
            node = self._args_node(s, head, u, v)
            if acc is None:
                acc = node
            else:
                p = store.pred_atom_of_term(u).id
                if p not in pool[acc].clause or -p not in pool[node].clause:
                    return pool.axi(target)
                acc = pool.res(acc, node, p)
        return acc if pool[acc].clause == target else pool.axi(target)

    # -- search -------------------------------------------------------------------------
    def _analyze(self, conflict: int) -> tuple[int, int]:
        """First-UIP learning; returns (learned node, backjump level)."""
        pool = self.pool
        cur = len(self.trail_lim)
        node = conflict
        idx = len(self.trail) - 1
        while True:
            clause = pool[node].clause
            at_level = [l for l in clause if self.level[abs(l)] == cur]
            if cur == 0:
                if not clause:
                    return node, -1
            elif len(at_level) <= 1:
                break
            # resolve with the reason of the latest trail literal in the clause
            while idx >= 0 and -self.trail[idx] not in clause:
                idx -= 1
            lit = self.trail[idx]
            r = self.reason[abs(lit)]
            if r is None:
                break
            self._bump(abs(lit))
            node = pool.res(node, r, abs(lit))
            idx -= 1
        clause = pool[node].clause
        for l in clause:
            self._bump(abs(l))
        self._inc /= 0.95
        levels = sorted({self.level[abs(l)] for l in clause}, reverse=True)
        back = levels[1] if len(levels) > 1 else 0
        return node, back

    def _bump(self, a: int) -> None:
        act = self.activity
        if a in act:
            act[a] += self._inc
            if act[a] > 1e100:
                for k in act:
                    act[k] *= 1e-100
                self._inc *= 1e-100

    def _decide(self) -> int | None:
        """Most active unassigned atom, lowest id on ties, with its saved phase."""
        best, best_act = None, -1.0
        act, value = self.activity, self.value
        for a in self.atoms:
            if a not in value and act[a] > best_act:
                best, best_act = a, act[a]
        if best is None:
            return None
        return best if self.phase[best] else -best

    def solve(self) -> SolveResult:
        pool = self.pool
        for c in self.input_clauses:
            node = pool.hyp(c)
            if not c:
                return SolveResult(False, proof=Proof(pool, node), stats=self.stats)
            self._add_clause(c, node)
        for c, node in zip(list(self.clauses), list(self.nodes)):
            if len(c) == 1:
                (l,) = c
                v = self._lit_value(l)
                if v is None:
                    self._assign(l, node)
                elif not v:
                    root = pool.res(node, self.reason[abs(l)], abs(l))
                    return SolveResult(False, proof=Proof(pool, root), stats=self.stats)
        while True:
            self.steps += 1
            if self.steps > self.config.step_budget:
                raise ResourceLimit(f"step budget {self.config.step_budget} exhausted")
            conflict = self._bcp()
            if conflict is None:
                th = self._theory()
                if th is not None and th[0] == "prop":
                    continue
                if th is not None:
                    conflict = th[1]
            if conflict is not None:
                self.stats["conflicts"] += 1
                top = max((self.level[abs(l)] for l in pool[conflict].clause), default=0)
                self._backjump(top)
                learned, back = self._analyze(conflict)
                if back < 0:
                    return SolveResult(False, proof=Proof(pool, learned), stats=self.stats)
                self._backjump(back)
                clause = pool[learned].clause
                self._add_clause(clause, learned)
                unit = [l for l in clause if self._lit_value(l) is None]
                if len(unit) == 1:
                    self._assign(unit[0], learned)
                continue
            a = self._decide()
            if a is None:
                model = dict(self.value)
                return SolveResult(True, model=model, stats=self.stats)
            self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._assign(a, None)


def solve(store: Store, clauses: Iterable[Iterable[int]], config: SolverConfig | None = None,
          pool: ProofPool | None = None) -> SolveResult:
    return Solver(store, clauses, config, pool).solve()


def check_model(store: Store, clauses: Iterable[Iterable[int]], model: dict[int, bool]) -> bool:
    clauses = [frozenset(c) for c in clauses]
    for c in clauses:
        if not any(model.get(abs(l)) == (l > 0) for l in c):
            return False
    lits = [a if v else -a for a, v in model.items()
            if store.atoms[a].kind is not AtomKind.BOOL]
    return is_consistent(store, lits)
