import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinterp.coloring import Coloring
from multinterp.euf import (CongruenceClosure, NotConnected, chain_literals, chain_to_tautology,
                            congruence_close, is_colorable_chain, is_consistent, is_valid_clause,
                            make_colorable)
from multinterp.logic import Store, SymbolKind

from euf_oracle import oracle_consistent
from fixtures import SplitChain, domain, symbol_sets


def small_store():
    s = Store()
    x, y, z = domain(s, "x", "y", "z")
    f = s.declare("f", SymbolKind.FUNCTION, 1)
    g = s.declare("g", SymbolKind.FUNCTION, 2)
    s.declare("P", SymbolKind.PREDICATE, 1)
    terms = [x, y, z, s.term(f, x), s.term(f, y), s.term(g, x, y), s.term(g, y, x)]
    atoms = [s.eq_atom(a, b).id for i, a in enumerate(terms) for b in terms[i + 1:]]
    atoms += [s.pred_atom("P", t).id for t in terms[:5]]
    return s, atoms


STORE, ATOMS = small_store()
literal_sets = st.lists(st.sampled_from(ATOMS).flatmap(lambda a: st.sampled_from([a, -a])),
                        min_size=1, max_size=6)


@settings(max_examples=200, deadline=None)
@given(literal_sets)
def test_consistency_matches_oracle(lits):
    assert is_consistent(STORE, lits) == oracle_consistent(STORE, lits)


@settings(max_examples=150, deadline=None)
@given(literal_sets)
def test_chain_explanations_are_sound(lits):
    pos = [l for l in lits if l > 0 and STORE.atoms[l].lhs is not None]
    cc = congruence_close(STORE, pos)
    for l in pos:
        a = STORE.atoms[l]
        chain = cc.find_chain(a.lhs, a.rhs)
        assert chain_literals(chain) <= set(pos)
        taut = chain_to_tautology(STORE, chain)
        assert not oracle_consistent(STORE, [-x for x in taut])


def test_congruence_merges_applications():
    s = Store()
    x, y = domain(s, "x", "y")
    f = s.declare("f", SymbolKind.FUNCTION, 1)
    cc = congruence_close(s, [s.eq_atom(x, y).id])
    fx, fy = s.term(f, x), s.term(f, y)
    cc.add_term(fx)
    cc.add_term(fy)
    assert cc.same(fx, fy)
    assert is_valid_clause(s, [-s.eq_atom(x, y).id, s.eq_atom(fx, fy).id])
    assert not is_valid_clause(s, [s.eq_atom(fx, fy).id])


def test_unconnected_terms_raise():
    s = Store()
    x, y = domain(s, "x", "y")
    cc = CongruenceClosure(s)
    cc.add_term(x)
    cc.add_term(y)
    with pytest.raises(NotConnected):
        cc.find_chain(x, y)


def test_split_chain_is_recovered_from_its_equalities():
    fx = SplitChain()
    cc = CongruenceClosure(fx.store)
    for x, y in zip(SplitChain.NAMES, SplitChain.NAMES[1:]):
        cc.assert_atom(fx.store.atoms[fx.e(x, y)])
    chain = cc.find_chain(fx.t["a1"], fx.t["l1"])
    assert [repr(t) for t in chain.terms] == SplitChain.NAMES
    assert len(chain) == 8
    assert is_colorable_chain(fx.ps.coloring, chain)


def test_make_colorable_inserts_global_intermediate():
    s = Store()
    l1, l2, zg = domain(s, "l1", "l2", "zg")
    f = s.declare("f", SymbolKind.FUNCTION, 1)
    col = Coloring.from_symbol_sets(s, symbol_sets(s, 2, {"l1": 1, "l2": 2}, ["zg", "f"]))
    cc = congruence_close(s, [s.eq_atom(l1, zg).id, s.eq_atom(zg, l2).id])
    a, b = s.term(f, l1), s.term(f, l2)
    cc.add_term(a)
    cc.add_term(b)
    chain = cc.find_chain(a, b)
    assert not is_colorable_chain(col, chain)
    fixed = make_colorable(s, chain, col)
    assert is_colorable_chain(col, fixed)
    assert (fixed.start, fixed.end) == (a, b)
    assert chain_literals(fixed) == chain_literals(chain)
    assert s.term(f, zg) in fixed.terms
