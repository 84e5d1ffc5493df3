import pytest

from multinterp.interpolation import (InterpolationError, check_n_partial, check_partial,
                                      equivalent, mux, n_interpolate, pudlak_interpolate)
from multinterp.logic import FALSE, TRUE, Not, Or, Var
from multinterp.proof import Proof

from corpus import staged_fixtures, staged_random
from fixtures import LocalOrder
from strategies import assignments, bool_store, truth_table

STORE, ATOMS = bool_store()


def test_mux_truth_table():
    s, t, e = (Var(a) for a in ATOMS[:3])
    f = mux(s, t, e)
    for v, out in zip(assignments(ATOMS[:3]), truth_table(f, ATOMS[:3])):
        assert out == (v[ATOMS[1]] if v[ATOMS[0]] else v[ATOMS[2]])


def test_local_order_n_interpolant():
    ax = LocalOrder()
    ni = n_interpolate(ax.local_first(), ax.ps)
    a, b = Var(ax.a), Var(ax.b)
    assert equivalent(ax.store, ni.root[0], b)
    assert equivalent(ax.store, ni.root[1], Or(Not(b), a))


def test_n_interpolation_rejects_non_local_first():
    ax = LocalOrder()
    with pytest.raises(InterpolationError):
        n_interpolate(ax.not_local_first(), ax.ps)


def test_pudlak_on_local_order_splits():
    ax = LocalOrder()
    proof = ax.not_local_first()
    a, b = Var(ax.a), Var(ax.b)
    first, _ = pudlak_interpolate(proof, ax.ps, 0b0011)  # FF, FT against TF, TT
    second, _ = pudlak_interpolate(proof, ax.ps, 0b0101)  # FF, TF against FT, TT
    assert equivalent(ax.store, first, b)
    assert equivalent(ax.store, second, a)


@pytest.mark.parametrize("which", ["fixtures", "random"])
def test_every_node_annotation_is_n_partial(which):
    runs = staged_fixtures() if which == "fixtures" else staged_random(25)
    for s in runs:
        proof = s.proofs[-1]
        ni = n_interpolate(proof, s.ps)
        for n in proof:
            assert check_n_partial(s.ps, n.clause, ni.annotations[n.id]), (s.name, n.id)


def test_pudlak_annotations_are_partial_interpolants():
    for s in staged_fixtures():
        if s.ps.n != 2:
            continue
        proof = s.proofs[-1]
        for side in (0b0011, 0b0101):
            try:
                _, ann = pudlak_interpolate(proof, s.ps, side)
            except InterpolationError:
                continue
            for n in proof:
                assert check_partial(s.ps, side, n.clause, ann[n.id]), (s.name, side, n.id)


def test_wrong_annotation_fails_the_check():
    ax = LocalOrder()
    proof = ax.local_first()
    assert not check_n_partial(ax.ps, proof.pool[proof.root].clause, (TRUE, TRUE))
    assert not check_n_partial(ax.ps, proof.pool[proof.root].clause, (FALSE, Var(ax.l)))


def test_empty_split_is_rejected():
    ax = LocalOrder()
    with pytest.raises(InterpolationError):
        pudlak_interpolate(Proof(ax.pool, ax.local_first().root), ax.ps, 0b1111)
