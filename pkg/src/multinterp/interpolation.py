"""Two-partition (Pudlák) and 2^n-partition interpolation over resolution proofs.

Annotations are formulas over global symbols.  For an n-interpolation
annotation ``I`` of clause ``C`` and partition ``w`` the defining condition is
``phi_w -> C|w or OR_j (I_j xor w_j)``; it is checked with the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import cnf_convert
from .coloring import lowest
from .logic import (FALSE, TRUE, And, Const, Formula, Iff, LogicError, Not, Or, Var,
                    atom_symbols, restrict, symbols_of)
from .partitions import PartitionSet, partition_bits
from .proof import Proof, Rule, derived_masks
from .solver import SolverConfig, solve


class InterpolationError(LogicError):
    pass


def mux(sel: Formula, then: Formula, other: Formula, simplify: bool = True) -> Formula:
    """``sel ? then : other`` written as ``(sel or other) and (not sel or then)``.

    At a resolution on ``sel`` the premise containing ``sel`` positively
    supplies ``other``.
    """
    return And(Or(sel, other, simplify=simplify), Or(Not(sel, simplify=simplify), then,
                                                     simplify=simplify), simplify=simplify)


# -- Pudlák ---------------------------------------------------------------------

def _symbols_fit(ps: PartitionSet, atom: int, side: int) -> bool:
    col = ps.coloring
    return all(col.symbol_mask(s) & side for s in atom_symbols(ps.store.atoms[atom]))


def pudlak_interpolate(proof: Proof, ps: PartitionSet, a_side: int,
                       simplify: bool = True) -> tuple[Formula, dict[int, Formula]]:
    """Interpolant between the partitions in mask ``a_side`` and the rest.

    The proof must be colourable with respect to that split.
    """
    b_side = ps.full & ~a_side
    if not a_side or not b_side:
        raise InterpolationError("both sides of the split must be non-empty")
    ann: dict[int, Formula] = {}
    for n in proof:
        if n.rule is Rule.HYP:
            m = ps.membership.get(n.clause, 0)
            if not m:
                raise InterpolationError(f"hypothesis {n.id} not in any partition")
            ann[n.id] = FALSE if m & a_side else TRUE
        elif n.rule is Rule.LOCAL:
            ann[n.id] = FALSE if (1 << n.partition) & a_side else TRUE
        elif n.rule is Rule.AXI:
            if all(_symbols_fit(ps, abs(l), a_side) for l in n.clause):
                ann[n.id] = FALSE
            elif all(_symbols_fit(ps, abs(l), b_side) for l in n.clause):
                ann[n.id] = TRUE
            else:
                raise InterpolationError(f"theory leaf {n.id} is not colourable for the split")
        else:
            pos, neg = n.premises
            ic, id_ = ann[pos], ann[neg]
            in_a, in_b = _symbols_fit(ps, n.pivot, a_side), _symbols_fit(ps, n.pivot, b_side)
            if in_a and in_b:
                ann[n.id] = mux(Var(n.pivot), id_, ic, simplify)
            elif in_a:
                ann[n.id] = Or(ic, id_, simplify=simplify)
            elif in_b:
                ann[n.id] = And(ic, id_, simplify=simplify)
            else:
                raise InterpolationError(f"pivot of node {n.id} fits neither side")
    return ann[proof.root], ann


# -- n-interpolation -----------------------------------------------------------------

@dataclass
class NInterpolation:
    root: tuple[Formula, ...]
    annotations: dict[int, tuple[Formula, ...]]


def constant_vector(w: int, n: int) -> tuple[Formula, ...]:
    return tuple(Const(b) for b in partition_bits(w, n))


def n_interpolate(proof: Proof, ps: PartitionSet, simplify: bool = True) -> NInterpolation:
    """Annotate a colourable, local-first proof with n-partial interpolants."""
    d = derived_masks(proof, ps)
    col = ps.coloring
    n = ps.n
    ann: dict[int, tuple[Formula, ...]] = {}
    for node in proof:
        i = node.id
        if d[i]:
            ann[i] = constant_vector(lowest(d[i]), n)
            continue
        if node.is_leaf:
            raise InterpolationError(f"leaf {i} belongs to no partition")
        if not col.is_global_atom(node.pivot):
            raise InterpolationError(f"local pivot at mixed node {i}: proof is not local-first")
        pos, neg = node.premises
        sel = Var(node.pivot)
        ann[i] = tuple(mux(sel, y, x, simplify) for x, y in zip(ann[pos], ann[neg]))
    return NInterpolation(ann[proof.root], ann)


# -- semantic checks -------------------------------------------------------------------

def _satisfiable(ps: PartitionSet, clauses: list[frozenset], extra: list[Formula],
                 tag: str, budget: int | None) -> bool:
    store = ps.store
    cls = list(clauses)
    for k, f in enumerate(extra):
        c, _ = cnf_convert(store, f, f"{tag}{k}")
        cls.extend(c)
    cfg = SolverConfig(step_budget=budget) if budget else SolverConfig()
    return solve(store, cls, cfg).sat


def check_n_partial(ps: PartitionSet, clause: frozenset, vec: tuple[Formula, ...],
                    budget: int | None = None) -> bool:
    """Whether ``vec`` is an n-partial interpolant for ``clause``."""
    store = ps.store
    g = ps.global_symbols()
    for f in vec:
        if not symbols_of(store, f) <= g:
            return False
    for w in range(ps.num_partitions):
        bits = partition_bits(w, ps.n)
        neg_c = [frozenset((-l,)) for l in ps.restrict(clause, w)]
        same = [f if b else Not(f) for f, b in zip(vec, bits)]
        if _satisfiable(ps, ps.clauses[w] + neg_c, same, f"chk{w}_", budget):
            return False
    return True


def check_partial(ps: PartitionSet, a_side: int, clause: frozenset, f: Formula,
                  budget: int | None = None) -> bool:
    """Two-sided partial-interpolant condition for the split ``a_side``."""
    store = ps.store
    b_side = ps.full & ~a_side
    sym_a = set().union(*(ps.symbols[w] for w in range(ps.num_partitions) if a_side >> w & 1))
    sym_b = set().union(*(ps.symbols[w] for w in range(ps.num_partitions) if b_side >> w & 1))
    if not symbols_of(store, f) <= (sym_a & sym_b):
        return False
    for side, syms, goal in ((a_side, sym_a, Not(f)), (b_side, sym_b, f)):
        cls = [c for w in range(ps.num_partitions) if side >> w & 1 for c in ps.clauses[w]]
        neg_c = [frozenset((-l,)) for l in restrict(store, clause, syms)]
        if _satisfiable(ps, cls + neg_c, [goal], "pchk_", budget):
            return False
    return True


def equivalent(ps_or_store, f: Formula, g: Formula) -> bool:
    """Validity of ``f <-> g`` in EUF, decided by the solver."""
    store = getattr(ps_or_store, "store", ps_or_store)
    clauses, _ = cnf_convert(store, Not(Iff(f, g)), "eqv")
    return not solve(store, clauses).sat
