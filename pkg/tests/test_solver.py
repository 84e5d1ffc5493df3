import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinterp.logic import AtomKind, SymbolKind
from multinterp.proof import check_proof
from multinterp.solver import ResourceLimit, SolverConfig, check_model, solve

from euf_oracle import oracle_consistent
from strategies import bool_store, brute_sat
from test_euf import ATOMS as EUF_ATOMS, STORE as EUF_STORE

B_STORE, B_ATOMS = bool_store()


def clause_lists(atoms, max_clauses=10):
    lit = st.sampled_from(atoms).flatmap(lambda a: st.sampled_from([a, -a]))
    return st.lists(st.frozensets(lit, min_size=1, max_size=3), min_size=1, max_size=max_clauses)


def euf_brute_sat(store, clauses) -> bool:
    atoms = sorted({abs(l) for c in clauses for l in c})
    for bits in itertools.product([False, True], repeat=len(atoms)):
        m = dict(zip(atoms, bits))
        if all(any(m[abs(l)] == (l > 0) for l in c) for c in clauses):
            lits = [a if m[a] else -a for a in atoms if store.atoms[a].kind is not AtomKind.BOOL]
            if oracle_consistent(store, lits):
                return True
    return False


@settings(max_examples=200, deadline=None)
@given(clause_lists(B_ATOMS, 14))
def test_boolean_verdict_matches_truth_tables(clauses):
    res = solve(B_STORE, clauses)
    assert res.sat == brute_sat(clauses)
    if res.sat:
        assert check_model(B_STORE, clauses, res.model)
    else:
        assert check_proof(res.proof, clauses).ok


@settings(max_examples=120, deadline=None)
@given(clause_lists(EUF_ATOMS[:12], 8))
def test_euf_verdict_matches_oracle(clauses):
    res = solve(EUF_STORE, clauses)
    assert res.sat == euf_brute_sat(EUF_STORE, clauses)
    if res.sat:
        assert check_model(EUF_STORE, clauses, res.model)
    else:
        rep = check_proof(res.proof, clauses)
        assert rep.ok, str(rep)


def test_empty_clause_is_refuted_immediately():
    res = solve(B_STORE, [frozenset()])
    assert not res.sat
    assert res.proof.pool[res.proof.root].clause == frozenset()


def test_pigeonhole_hits_step_budget():
    s, _ = bool_store()
    v = {(i, j): s.bool_atom(s.declare(f"x{i}{j}", SymbolKind.BOOL)).id
         for i in range(6) for j in range(5)}
    cls = [frozenset(v[i, j] for j in range(5)) for i in range(6)]
    cls += [frozenset((-v[i, j], -v[k, j])) for j in range(5)
            for i in range(6) for k in range(i + 1, 6)]
    with pytest.raises(ResourceLimit):
        solve(s, cls, SolverConfig(step_budget=200))


def test_solver_is_deterministic():
    cls = [frozenset({B_ATOMS[0], B_ATOMS[1]}), frozenset({-B_ATOMS[0]}), frozenset({-B_ATOMS[1], B_ATOMS[2]})]
    assert solve(B_STORE, cls).model == solve(B_STORE, cls).model
