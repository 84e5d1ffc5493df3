from hypothesis import given
from hypothesis import strategies as st

from multinterp.coloring import lowest, mask_bits
from multinterp.partitions import partition_bits, partition_index, partition_name

from fixtures import LiteralFragment


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_partition_encoding_round_trip(nw):
    n, w = nw
    bits = partition_bits(w, n)
    assert partition_index(bits) == w
    assert partition_name(w, n) == "".join("T" if b else "F" for b in bits)


def test_first_control_is_most_significant():
    assert partition_name(0b10, 2) == "TF"
    assert partition_bits(0b01, 2) == (False, True)


@given(st.integers(1, 1 << 16))
def test_mask_helpers(m):
    bits = list(mask_bits(m))
    assert sum(1 << b for b in bits) == m
    assert lowest(m) == min(bits)


def test_fragment_coloring():
    fx = LiteralFragment()
    col = fx.ps.coloring
    assert col.atom_mask(fx.a) == 0
    assert col.atom_mask(fx.l1z) == 0b0010
    assert col.atom_mask(fx.zl2) == 0b0100
    assert col.is_global_atom(fx.xy)
    assert col.clause_mask(fx.pool[fx.n1].clause) == 0b0010
    assert fx.ps.local_symbols_are_private()
