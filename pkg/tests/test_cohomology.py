import numpy as np
import pytest
from hypothesis import given, strategies as st

from locoh.cohomology import CocycleSystem, GaloisModule, h1, h1_loc, p_torsion_order, witness_tables
from locoh.errors import CapExceeded, SpecMismatch
from locoh.groups import closure
from locoh.ring import make_ring
from locoh.samples import (borel_lift_samples, conjugated_module, det_twisted_module, dual_module,
                           nontrivial_local_pool, random_invertible, scalar_lift_samples)
from locoh.scan import ScanSpec, enumerate_subgroups

F3, F5 = make_ring(3), make_ring(5)
U = [[1, 1], [0, 1]]


def _trivial_action(G, rank=2):
    return GaloisModule(G, G.spec.p, G.spec.n, np.broadcast_to(np.eye(rank, dtype=np.int64), (len(G), rank, rank)))


def test_trivial_group():
    r = h1_loc(closure(F5, []))
    assert (r.z1_order, r.b1_order, r.h1_invariants, r.h1loc_invariants) == (1, 1, [], [])


def test_unipotent_over_f3(kernel_path):
    r = h1_loc(closure(F3, [U]))
    assert (r.z1_order, r.b1_order, r.h1_invariants, r.h1loc_invariants) == (9, 3, [3], [])


def test_minus_identity_over_f5(kernel_path):
    r = h1(closure(F5, [[[4, 0], [0, 4]]]))
    assert (r.z1_order, r.b1_order, r.h1_invariants) == (25, 25, [])


def test_trivial_action_has_no_coboundaries():
    G = closure(F3, [U])
    r = h1(G, _trivial_action(G))
    assert r.b1_order == 1
    assert r.h1_invariants == [3, 3]  # Hom(Z/3, F_3^2)


def test_borel_over_f5_golden(kernel_path):
    # the same values come out of brute_force_h1 with the group cap raised to 20
    r = h1_loc(closure(F5, [U, [[2, 0], [0, 3]]]))
    assert (r.z1_order, r.b1_order, r.h1_invariants, r.h1loc_invariants) == (25, 25, [], [])


@pytest.mark.parametrize("G", nontrivial_local_pool(), ids=lambda G: f"order{len(G)}-mod{G.spec.modulus}-b{G.spec.b}")
def test_nonzero_local_classes_have_local_witnesses(G):
    r = h1_loc(G)
    assert r.h1loc_invariants
    tables = witness_tables(G)
    assert len(tables) == len(r.h1loc_invariants)
    for t in tables:
        assert t.check_identity() and t.is_local()


def test_unknown_cap():
    G = closure(F5, [U, [[2, 0], [0, 3]]])
    with pytest.raises(CapExceeded):
        h1(G, cap=30)


def test_direct_sum_needs_same_group():
    G, H = closure(F5, [U]), closure(F5, [U])
    with pytest.raises(SpecMismatch):
        GaloisModule.natural(G).direct_sum(GaloisModule.natural(H))


SCANNED = [G for p in (2, 3, 5) for G in enumerate_subgroups(ScanSpec(p)) if len(G) <= 120]
POOL = SCANNED + nontrivial_local_pool()


@given(st.sampled_from(POOL))
def test_cocycle_basis_and_inclusions(G):
    sys_ = CocycleSystem(GaloisModule.natural(G))
    for row in sys_.cocycles.rows:
        assert sys_.table(row).check_identity()
    Z, B, Zloc = sys_.cocycles, sys_.coboundaries, sys_.local_cocycles()
    assert B.issubset(Zloc) and Zloc.issubset(Z)
    assert Zloc == sys_.local_cocycles("all")


@given(st.sampled_from(POOL))
def test_report_invariants(G):
    r = h1_loc(G)
    assert r.z1_order == r.b1_order * r.h1_order
    top_loc = sorted(r.h1loc_invariants, reverse=True)
    top = sorted(r.h1_invariants, reverse=True)
    assert len(top_loc) <= len(top) and all(a <= b for a, b in zip(top_loc, top))


@given(st.sampled_from(POOL))
def test_coprime_order_vanishing(G):
    if len(G) % G.spec.p:
        assert h1(G).h1_invariants == []


@given(st.sampled_from(POOL), st.integers(0, 2 ** 32))
def test_conjugation_invariance(G, seed):
    h = random_invertible(G.spec, np.random.default_rng(seed))
    a, b = h1_loc(G), h1_loc(G, conjugated_module(G, h))
    assert (a.h1_invariants, a.h1loc_invariants) == (b.h1_invariants, b.h1loc_invariants)


@given(st.sampled_from(POOL), st.sampled_from(["natural", "dual", "twist"]), st.sampled_from(["natural", "dual"]))
def test_direct_sum_splits(G, k1, k2):
    build = {"natural": GaloisModule.natural, "dual": dual_module, "twist": lambda G: det_twisted_module(G, 1)}
    M1, M2 = build[k1](G), build[k2](G)
    parts = h1_loc(G, M1).h1loc_invariants + h1_loc(G, M2).h1loc_invariants
    assert h1_loc(G, M1.direct_sum(M2)).h1loc_invariants == sorted(parts)


def test_cyclic_vanishing_over_rings():
    for spec, g in ((make_ring(5, 2), [[1, 1], [0, 1]]), (make_ring(2, 3), [[1, 2], [3, 5]]),
                    (make_ring(3, 1, 2), [[[0, 1], [1, 0]], [[0, 0], [1, 0]]])):
        assert h1_loc(closure(spec, [g])).h1loc_invariants == []


def test_scalar_vanishing_on_lifts():
    for G in scalar_lift_samples(6, seed=3):
        assert h1(G).h1_invariants == []


def test_torsion_embedding_on_borel_lifts():
    for G in borel_lift_samples(12, seed=5):
        M = GaloisModule.natural(G)
        assert h1(G, M.torsion(1)).h1_order == p_torsion_order(h1(G, M).h1_invariants, G.spec.p)
