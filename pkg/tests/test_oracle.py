"""Linear-algebra cohomology against the enumeration oracle."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from locoh.cohomology import GaloisModule, h1_loc
from locoh.errors import OracleCapExceeded
from locoh.groups import closure
from locoh.oracle import brute_force_h1
from locoh.ring import make_ring
from locoh.samples import nontrivial_local_pool, random_module
from locoh.scan import ScanSpec, enumerate_subgroups

F3, F5 = make_ring(3), make_ring(5)


def _same(G, M=None, **caps):
    a, b = h1_loc(G, M), brute_force_h1(G, M, **caps)
    assert (a.z1_order, a.b1_order, a.h1_invariants, a.h1loc_invariants) == \
        (b.z1_order, b.b1_order, b.h1_invariants, b.h1loc_invariants)
    return b


def test_oracle_examples():
    r = brute_force_h1(closure(F5, []))
    assert (r.z1_order, r.h1_invariants, r.h1loc_invariants) == (1, [], [])
    r = brute_force_h1(closure(F3, [[[1, 1], [0, 1]]]), literal=True)
    assert (r.h1_invariants, r.h1loc_invariants) == ([3], [])
    r = brute_force_h1(closure(F3, [[[2, 0], [0, 2]]]), literal=True)
    assert r.h1_invariants == []


def test_literal_and_pruned_enumeration_agree():
    for G in enumerate_subgroups(ScanSpec(3, max_order=4)):
        a, b = brute_force_h1(G), brute_force_h1(G, literal=True)
        assert (a.z1_order, a.h1_invariants, a.h1loc_invariants) == (b.z1_order, b.h1_invariants, b.h1loc_invariants)


def test_oracle_caps():
    with pytest.raises(OracleCapExceeded):
        brute_force_h1(closure(F5, [[[1, 1], [0, 1]], [[2, 0], [0, 1]]]))
    with pytest.raises(OracleCapExceeded):
        brute_force_h1(closure(make_ring(3, 3), [[[1, 1], [0, 1]]]))


@pytest.mark.parametrize("G", [G for G in nontrivial_local_pool() if len(G) <= 9],
                         ids=lambda G: f"order{len(G)}-mod{G.spec.modulus}-b{G.spec.b}")
def test_nonzero_local_classes_agree(G):
    assert _same(G, max_group=9).h1loc_invariants


def test_sl2_f4_with_raised_caps():
    G = nontrivial_local_pool()[-1]
    assert len(G) == 60 and G.spec.q == 4
    assert _same(G, max_group=60).h1loc_invariants == [2, 2]


SMALL = [G for p in (2, 3, 5) for G in enumerate_subgroups(ScanSpec(p, max_order=8))]


@given(st.sampled_from(SMALL), st.integers(0, 2 ** 32))
def test_random_modules_agree(G, seed):
    _, M = random_module(G, np.random.default_rng(seed))
    _same(G, M)
