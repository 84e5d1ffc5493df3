"""Witness synthesis for forall-inputs exists-controls forall-outputs EUF specifications."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

from .cnf import cnf_convert
from .coloring import lowest
from .logic import (And, Const, Formula, LogicError, Not, Store, Symbol, SymbolKind, TRUE,
                    Var, formula_size, rename, simplify as simplify_formula,
                    substitute_bools, symbols_of)
from .partitions import PartitionSet, partition_bits, partition_name
from .proof import Proof, Rule, check_proof, derived_masks, prune_local_subtrees
from .solver import SolverConfig, solve
from .transform import TransformTrace, make_local_first
from .interpolation import n_interpolate

HARD_CAP = 12
WARN_ABOVE = 8


class Unrealizable(Exception):
    def __init__(self, counterexample: list[str]):
        super().__init__("specification is unrealizable; inputs: " + ", ".join(counterexample))
        self.counterexample = counterexample


@dataclass
class SynthesisProblem:
    store: Store
    inputs: list[Symbol]
    controls: list[Symbol]
    outputs: list[Symbol]
    valid: Formula
    axioms: list[Formula] = field(default_factory=list)

    def __post_init__(self):
        for c in self.controls:
            if c.kind is not SymbolKind.BOOL:
                raise LogicError(f"control {c.name} must be Boolean")
        if set(self.controls) & (set(self.inputs) | set(self.outputs)):
            raise LogicError("controls must be distinct from inputs and outputs")

    @property
    def n(self) -> int:
        return len(self.controls)

    def premise(self) -> Formula:
        return And(*self.axioms) if self.axioms else TRUE


@dataclass
class SynthesisConfig:
    step_budget: int = 2_000_000
    max_n: int = HARD_CAP
    simplify: bool = True
    check_proofs: bool = True


def expand_and_negate(problem: SynthesisProblem, simplify: bool = True,
                      max_n: int = HARD_CAP) -> PartitionSet:
    """Partition ``w`` is ``axioms and not valid`` with controls fixed to ``w``
    and every output renamed to a partition-private copy."""
    n = problem.n
    if n > min(max_n, HARD_CAP):
        raise LogicError(f"{n} controls exceed the cap of {min(max_n, HARD_CAP)}")
    if n > WARN_ABOVE:
        warnings.warn(f"{n} controls: 2^{n} partitions", RuntimeWarning)
    store = problem.store
    body = And(problem.premise(), Not(problem.valid, simplify=False), simplify=False)
    clauses, symbols = [], []
    controls = set(problem.controls)
    for w in range(1 << n):
        word = partition_name(w, n)
        mapping = {}
        for o in problem.outputs:
            name = f"{o.name}@{word}"
            mapping[o] = store.symbols.get(name) or store.declare(name, o.kind, o.arity)
        f = rename(store, body, mapping)
        consts = {c: Const(b) for c, b in zip(problem.controls, partition_bits(w, n))}
        f = substitute_bools(store, f, consts, simplify=False)
        symbols.append(symbols_of(store, f) - controls)
        if simplify:
            f = simplify_formula(f)
        cs, _ = cnf_convert(store, f, word)
        clauses.append(cs)
    return PartitionSet(store, n, clauses, symbols)


# -- circuits --------------------------------------------------------------------

@dataclass(frozen=True)
class MuxLeaf:
    partition: int


@dataclass(frozen=True)
class Mux:
    selector: int  # atom id
    then: "MuxNode"  # selector true
    other: "MuxNode"


MuxNode = MuxLeaf | Mux


@dataclass
class MuxCircuit:
    """One multiplexer tree shared by all witnesses; leaves carry constant vectors."""

    root: MuxNode
    n: int
    store: Store

    def evaluate(self, value) -> tuple[bool, ...]:
        node = self.root
        get = value if callable(value) else value.__getitem__
        while isinstance(node, Mux):
            node = node.then if get(node.selector) else node.other
        return partition_bits(node.partition, self.n)

    def selectors(self) -> set[int]:
        return {m.selector for m in self.mux_nodes()}

    def formulas(self, simplify: bool = True) -> tuple[Formula, ...]:
        from .interpolation import mux
        memo: dict[int, tuple[Formula, ...]] = {}

        def go(x: MuxNode) -> tuple[Formula, ...]:
            r = memo.get(id(x))
            if r is None:
                if isinstance(x, MuxLeaf):
                    r = tuple(Const(b) for b in partition_bits(x.partition, self.n))
                else:
                    t, o = go(x.then), go(x.other)
                    r = tuple(mux(Var(x.selector), a, b, simplify) for a, b in zip(t, o))
                memo[id(x)] = r
            return r
        return go(self.root)

    def size(self) -> int:
        return len(self.mux_nodes())

    def mux_nodes(self) -> list[Mux]:
        out, stack, seen = [], [self.root], set()
        while stack:
            x = stack.pop()
            if id(x) in seen or not isinstance(x, Mux):
                continue
            seen.add(id(x))
            out.append(x)
            stack += [x.then, x.other]
        return out

    def to_dot(self) -> str:
        ids: dict[int, str] = {}
        lines = ["digraph mux {"]

        def name(x: MuxNode) -> str:
            k = ids.get(id(x))
            if k is None:
                k = ids[id(x)] = f"m{len(ids)}"
                if isinstance(x, MuxLeaf):
                    lines.append(f'  {k} [shape=box,label="{partition_name(x.partition, self.n)}"];')
                else:
                    label = self.store.lit_str(x.selector).replace('"', "'")
                    lines.append(f'  {k} [label="{label}"];')
                    lines.append(f"  {k} -> {name(x.then)} [label=1];")
                    lines.append(f"  {k} -> {name(x.other)} [label=0,style=dashed];")
            return k
        name(self.root)
        lines.append("}")
        return "\n".join(lines) + "\n"


def extract_circuit(proof: Proof, ps: PartitionSet) -> MuxCircuit:
    """Mux per global-pivot resolution; single-partition nodes become constant leaves."""
    d = derived_masks(proof, ps)
    nodes: dict[int, MuxNode] = {}
    for n in proof:
        if d[n.id]:
            nodes[n.id] = MuxLeaf(lowest(d[n.id]))
        elif n.rule is not Rule.RES or not ps.coloring.is_global_atom(n.pivot):
            raise LogicError(f"node {n.id} is neither local nor a global resolution")
        else:
            pos, neg = n.premises
            nodes[n.id] = Mux(n.pivot, nodes[neg], nodes[pos])
    return MuxCircuit(nodes[proof.root], ps.n, ps.store)


# -- verification -------------------------------------------------------------------

@dataclass
class Verification:
    ok: bool
    counterexample: list[str] | None = None


def verify_witnesses(problem: SynthesisProblem, witnesses: tuple[Formula, ...] | list[Formula],
                     step_budget: int | None = None) -> Verification:
    """Back-substitute the witnesses and check ``axioms -> valid`` is EUF-valid."""
    store = problem.store
    if len(witnesses) != problem.n:
        raise LogicError("one witness per control expected")
    banned = set(problem.controls) | set(problem.outputs)
    for f in witnesses:
        if symbols_of(store, f) & banned:
            return Verification(False, ["witness mentions a control or output"])
    sub = substitute_bools(store, problem.valid, dict(zip(problem.controls, witnesses)))
    f = And(problem.premise(), Not(sub))
    clauses, _ = cnf_convert(store, f, "verify")
    cfg = SolverConfig(step_budget=step_budget) if step_budget else SolverConfig()
    res = solve(store, clauses, cfg)
    if not res.sat:
        return Verification(True)
    return Verification(False, _counterexample(problem, res.model))


def _counterexample(problem: SynthesisProblem, model: dict[int, bool]) -> list[str]:
    """Model literals over the problem's own non-control, non-output symbols."""
    store = problem.store
    allowed = set(problem.inputs) | symbols_of(store, problem.valid)
    for a in problem.axioms:
        allowed |= symbols_of(store, a)
    allowed -= set(problem.controls) | set(problem.outputs)
    out = []
    for a in sorted(model):
        syms = symbols_of(store, a)
        if syms and syms <= allowed:
            out.append(store.lit_str(a if model[a] else -a))
    return out


# -- pipeline -------------------------------------------------------------------------

@dataclass
class SynthesisResult:
    witnesses: tuple[Formula, ...]
    circuit: MuxCircuit
    verified: bool
    partitions: PartitionSet
    proof: Proof
    transformed: Proof
    pruned: Proof
    traces: list[TransformTrace]
    report: dict[str, object]


def synthesize(problem: SynthesisProblem, config: SynthesisConfig | None = None) -> SynthesisResult:
    cfg = config or SynthesisConfig()
    t0 = time.perf_counter()
    ps = expand_and_negate(problem, cfg.simplify, cfg.max_n)
    if not ps.local_symbols_are_private():
        raise LogicError("a local symbol occurs in several partitions")
    formula = ps.all_clauses()
    res = solve(problem.store, formula, SolverConfig(step_budget=cfg.step_budget))
    if res.sat:
        raise Unrealizable(_counterexample(problem, res.model))
    proof = res.proof
    t_solve = time.perf_counter() - t0
    if cfg.check_proofs:
        rep = check_proof(proof, formula)
        if not rep.ok:
            raise LogicError(f"solver proof rejected: {rep}")
    transformed, traces = make_local_first(proof, ps)
    if cfg.check_proofs:
        rep = check_proof(transformed, formula)
        if not rep.ok:
            raise LogicError(f"transformed proof rejected: {rep}")
    pruned = prune_local_subtrees(transformed, ps)
    ni = n_interpolate(pruned, ps, cfg.simplify)
    circuit = extract_circuit(pruned, ps)
    witnesses = ni.root
    verdict = verify_witnesses(problem, witnesses)
    report: dict[str, object] = {
        "controls": problem.n,
        "partitions": ps.num_partitions,
        "clauses": len(formula),
        "proof_size": len(proof),
        "transformed_size": len(transformed),
        "pruned_size": len(pruned),
        "leaves_to_clean": traces[0].handled,
        "leaves_to_split": traces[1].handled,
        "reorder_seconds": round(traces[-1].seconds, 4),
        "mux_count": circuit.size(),
        "witness_size": sum(formula_size(f) for f in witnesses),
        "solve_seconds": round(t_solve, 4),
        "seconds": round(time.perf_counter() - t0, 4),
        "verified": verdict.ok,
        "conflicts": res.stats.get("conflicts", 0),
    }
    return SynthesisResult(witnesses, circuit, verdict.ok, ps, proof, transformed, pruned,
                           traces, report)
