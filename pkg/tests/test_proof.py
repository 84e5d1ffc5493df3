import pytest

from multinterp.generators import generate
from multinterp.logic import Store, SymbolKind
from multinterp.proof import (Proof, ProofError, ProofPool, Rule, check_proof, derived_masks,
                              is_colorable, is_local_first, proof_from_text, proof_to_text,
                              prune_local_subtrees)
from multinterp.sexpr import ParseError
from multinterp.solver import solve
from multinterp.synthesis import expand_and_negate

from fixtures import LocalOrder, LiteralFragment


def small_refutation():
    s = Store()
    p, q = (s.bool_atom(s.declare(x, SymbolKind.BOOL)).id for x in "pq")
    cls = [frozenset({p, q}), frozenset({-p, q}), frozenset({-q})]
    pool = ProofPool(s)
    h = [pool.hyp(c) for c in cls]
    r = pool.res(h[0], h[1], p)
    return Proof(pool, pool.res(r, h[2], q)), cls, (p, q)


def test_valid_proof_is_accepted():
    proof, cls, _ = small_refutation()
    assert check_proof(proof, cls).ok


def test_hypothesis_outside_formula_is_rejected():
    proof, cls, _ = small_refutation()
    rep = check_proof(proof, cls[1:])
    assert not rep.ok
    assert any("not in the formula" in m for _, m in rep.errors)


def test_tampered_pivot_is_rejected_with_node_id():
    proof, cls, (p, q) = small_refutation()
    lines = proof_to_text(proof).splitlines()
    k = next(i for i, l in enumerate(lines) if " res " in l)
    lines[k] = lines[k].rsplit(" ", 1)[0] + " q"
    bad = proof_from_text(proof.store, "\n".join(lines))
    rep = check_proof(bad, cls)
    assert not rep.ok
    node_ids = {i for i, _ in rep.errors}
    assert any(bad.pool[i].rule is Rule.RES for i in node_ids)


def test_invalid_theory_leaf_is_rejected():
    s = Store()
    x, y = (s.term(s.declare(n, SymbolKind.DOMAIN)) for n in "xy")
    e = s.eq_atom(x, y).id
    pool = ProofPool(s)
    leaf = pool.axi(frozenset({e}))
    root = pool.res(leaf, pool.hyp(frozenset({-e})), e)
    rep = check_proof(Proof(pool, root), [frozenset({-e})])
    assert any(i == leaf for i, _ in rep.errors)


def test_text_round_trip_of_solver_proof():
    ps = expand_and_negate(generate("illu", 2))
    res = solve(ps.store, ps.all_clauses())
    text = proof_to_text(res.proof)
    again = proof_from_text(ps.store, text)
    assert proof_to_text(again) == text
    assert check_proof(again, ps.all_clauses()).ok


@pytest.mark.parametrize("cut", [10, 40, -3])
def test_truncated_proof_text_fails_to_parse(cut):
    proof, _, _ = small_refutation()
    text = proof_to_text(proof)
    with pytest.raises(ParseError):
        proof_from_text(proof.store, text[:cut])


def test_fragment_defining_leaf_is_not_colorable():
    fx = LiteralFragment()
    ok, bad = is_colorable(Proof(fx.pool, fx.nr), fx.ps)
    assert not ok
    assert bad in (fx.nd, fx.nu, fx.n3)
    ok, bad = is_colorable(Proof(fx.pool, fx.nd), fx.ps)
    assert (ok, bad) == (False, fx.nd)


def test_local_first_detection_on_local_order_proofs():
    ax = LocalOrder()
    assert is_local_first(ax.local_first(), ax.ps) == (True, None)
    ok, bad = is_local_first(ax.not_local_first(), ax.ps)
    assert not ok and bad == ax.not_local_first().root


def test_derived_masks_and_pruning():
    ax = LocalOrder()
    proof = ax.local_first()
    d = derived_masks(proof, ax.ps)
    assert d[proof.root] == 0
    pruned = prune_local_subtrees(proof, ax.ps)
    locals_ = [n for n in pruned if n.rule is Rule.LOCAL]
    assert [n.partition for n in locals_] == [3]
    assert sum(n.rule is Rule.HYP for n in pruned) == 2
    assert check_proof(pruned, ax.ps.all_clauses(), allow_local=True).ok
    assert not check_proof(pruned, ax.ps.all_clauses()).ok


def test_local_first_needs_colorable_proof():
    fx = LiteralFragment()
    with pytest.raises(ProofError):
        is_local_first(Proof(fx.pool, fx.nr), fx.ps)
