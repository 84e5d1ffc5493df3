import pytest

from multinterp.proof import Proof, check_proof, is_colorable, is_local_first
from multinterp.transform import (_Splitter, eliminate_literal, noncolorable_literals,
                                  reorder_local_first)

from corpus import staged_fixtures, staged_random
from fixtures import LocalOrder, LiteralFragment, SplitChain


def all_staged():
    return staged_fixtures() + staged_random(60)


@pytest.mark.parametrize("k", range(5))
def test_every_stage_passes_the_checker(k):
    for s in all_staged():
        rep = check_proof(s.proofs[k], s.formula)
        assert rep.ok, (s.name, k, str(rep))


def test_pass_postconditions():
    for s in all_staged():
        _, p1, p2, p3, p4 = s.proofs
        assert not noncolorable_literals(p1, s.ps.coloring), s.name
        assert is_colorable(p2, s.ps)[0], s.name
        assert len(p3) <= len(p2), s.name
        assert is_local_first(p4, s.ps)[0], s.name


def test_random_corpus_exercises_cleaning_and_splitting():
    runs = staged_random(60)
    assert any(s.traces[0].handled for s in runs)
    assert any(s.traces[1].handled for s in runs)


def test_literal_elimination_golden():
    fx = LiteralFragment()
    pool, st = fx.pool, fx.store
    root, count = eliminate_literal(pool, fx.na, fx.nna, fx.a)
    assert count == 1
    n2 = pool[root]
    assert n2.clause == frozenset({fx.xy, -fx.zl2, -fx.uv})
    assert n2.clause == pool[fx.nr].clause
    first = pool[n2.premises[0]], pool[n2.premises[1]]
    assert fx.n1 in n2.premises and n2.pivot == fx.l1z
    n_neg = next(n for n in first if n.id != fx.n1)
    assert n_neg.clause == frozenset({-fx.l1z, -fx.zl2, -fx.uv})
    assert fx.n3 in n_neg.premises
    nu = pool[next(i for i in n_neg.premises if i != fx.n3)]
    assert nu.clause == frozenset({-fx.l1z, -fx.zl2, fx.ff}), st.clause_str(nu.clause)
    assert fx.a not in {abs(l) for n in Proof(pool, root) for l in n.clause}


def test_chain_split_golden():
    fx = SplitChain()
    root = _Splitter(fx.pool, fx.ps.coloring).split(fx.clause)
    n5 = fx.pool[root]
    assert n5.clause == fx.clause
    n3, n4 = (fx.pool[i] for i in n5.premises)
    if n4.is_leaf is False:
        n3, n4 = n4, n3
    assert n4.clause == fx.taut(["a1", "b1", "cg", "kg", "l1"])
    n1, n2 = (fx.pool[i] for i in n3.premises)
    if n1.clause != fx.taut(["cg", "d2", "e2", "fg", "kg"]):
        n1, n2 = n2, n1
    assert n1.clause == fx.taut(["cg", "d2", "e2", "fg", "kg"])
    assert n2.clause == fx.taut(["fg", "h3", "kg"])
    assert n3.clause == fx.taut(["cg", "d2", "e2", "fg", "h3", "kg"])
    for leaf in (n1, n2, n4):
        assert leaf.is_leaf and fx.ps.coloring.clause_mask(leaf.clause)


def test_reorder_makes_local_order_proof_local_first():
    ax = LocalOrder()
    proof = ax.not_local_first()
    out, trace = reorder_local_first(proof, ax.ps)
    assert check_proof(out, ax.ps.all_clauses()).ok
    assert is_local_first(out, ax.ps) == (True, None)
    assert trace.handled >= 1
