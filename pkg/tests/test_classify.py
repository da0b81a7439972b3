import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locoh.classify import (classify, conjugacy_conditions, eigenvalue_one_index, eigenvalues, is_borel,
                            borel_certificate, scalar_indices)
from locoh.errors import NonIntegralIndex
from locoh.groups import GroupElement, closure
from locoh.ring import make_ring, mult_order, mulmod
from locoh.samples import random_invertible
from locoh.scan import ScanSpec, enumerate_subgroups

F3, F5, F25 = make_ring(3), make_ring(5), make_ring(5, 1, 2)
U = [[1, 1], [0, 1]]
SCAN5 = enumerate_subgroups(ScanSpec(5))


def _primitive(spec):
    return next(x for x in spec.elements() if x.is_unit() and mult_order(x) == spec.q - 1)


def _diag(spec, a, b):
    z = [0] * spec.b
    return GroupElement(spec, [[list(a.coeffs), z], [z, list(b.coeffs)]])


def test_cyclic_rotation():
    G = closure(F5, [[[0, 4], [1, 0]]])
    r = classify(G)
    assert r.order == 4 and r.projective_order == 2 and r.projective_type == "cyclic"
    assert r.contains_nontrivial_scalar
    # eigenvalues 2 and 3; the line of the smaller one comes first
    assert r.borel and r.eigenvector == [[1], [3]]
    g = G.generator_elements()[0]
    v = np.array([[1], [3]])
    assert (mulmod(np.array(g.tolist())[:, :, 0], v, 5) % 5 == (2 * v) % 5).all()


def test_exceptional_types():
    SL3 = closure(F3, [U, [[1, 0], [1, 1]]])
    r = classify(SL3)
    assert (r.order, r.projective_order, r.projective_type) == (24, 12, "A4")
    assert not r.borel
    GL3 = closure(F3, [U, [[1, 0], [1, 1]], [[2, 0], [0, 1]]])
    assert classify(GL3).projective_type == "S4"
    SL5 = closure(F5, [U, [[1, 0], [1, 1]]])
    r = classify(SL5)
    assert (r.projective_order, r.projective_type) == (60, "A5")


def test_full_borel():
    B = closure(F5, [U, [[2, 0], [0, 1]], [[1, 0], [0, 2]]])
    r = classify(B)
    assert r.order == 80 and r.contains_nontrivial_scalar and r.scalar_count == 4
    assert r.projective_type == "p-Borel" and r.borel and r.eigenvector == [[1], [0]]
    assert r.sylow["order"] == 5 and r.sylow["unique"]


def test_certificate_examples():
    c = borel_certificate(closure(F5, [U, [[2, 0], [0, 1]]]))
    assert c.passed and c.sylow_order == 5 and c.g_det_order == 4
    assert not borel_certificate(closure(F5, [U, [[1, 0], [1, 1]]])).passed
    c = borel_certificate(closure(F5, [U, [[2, 0], [0, 3]]]))
    assert not c.passed and "det" in c.reason
    assert not borel_certificate(closure(F3, [U])).passed


def test_certificate_attached_only_for_full_det():
    assert classify(closure(F5, [U, [[2, 0], [0, 1]]])).borel_certificate is not None
    assert classify(closure(F5, [U])).borel_certificate is None


def test_eigenvalue_index_examples():
    e = eigenvalue_one_index(GroupElement(F5, [[2, 0], [0, 1]]))
    assert (e.order, e.i, e.has_eigenvalue_one_at_i, e.c) == (4, 1, True, 1)
    assert e.gcd_bound_applies and e.gcd_bound_ok
    e = eigenvalue_one_index(GroupElement(F5, [[2, 0], [0, 3]]))
    assert (e.i, e.has_eigenvalue_one_at_i, e.c) == (1, False, None)
    with pytest.raises(NonIntegralIndex):
        eigenvalue_one_index(GroupElement(F5, U))


def test_eigenvalue_index_f25():
    w = _primitive(F25)
    g = _diag(F25, w, w ** 5)
    assert g.order == 24 and mult_order(g.det()) == 4
    e = eigenvalue_one_index(g)
    assert (e.i, e.gcd_i_pminus1) == (6, 2)
    assert e.gcd_bound_applies and e.gcd_bound_ok
    # direct: g^k has eigenvalue 1 iff w^k = 1 or w^5k = 1
    powers = [k for k in range(1, 24) if (w ** k) == F25.one() or (w ** (5 * k)) == F25.one()]
    assert e.c == (powers[0] if powers else None) and e.c is None
    assert e.has_eigenvalue_one_at_i == (w ** 6 == F25.one())


def test_conjugacy_conditions_examples():
    two, three, one = F5.element([2]), F5.element([3]), F5.one()
    r = conjugacy_conditions(two, three)
    assert r.conditions == [False] * 4 and not r.bound_checked
    r = conjugacy_conditions(two, one)
    assert r.conditions[0] and not r.bound_checked
    w = _primitive(F25)
    lam = w ** 3
    assert mult_order(lam) == 8
    r = conjugacy_conditions(lam, lam)
    # l1 mu2 = 1 and 1 is not conjugate to lam
    assert r.conditions == [False] * 4 and r.min_order == 8


def test_conjugacy_conditions_frobenius():
    w = _primitive(F25)
    lam = w ** 3
    # l2 = lam^5 is the Frobenius image of lam; l1 mu2 = lam^-4 has order 2
    r = conjugacy_conditions(lam, lam ** 5, d=1)
    expected = []
    orbit = lambda x: {tuple((x ** (5 ** j)).coeffs) for j in range(2)}
    l1, l2 = lam, lam ** 5
    m1, m2 = l1 ** -1, l2 ** -1
    for a, b in [(l1, l1 * m2), (l1, l2 * m1), (l2, l1 * m2), (l2, l2 * m1)]:
        expected.append(tuple(b.coeffs) in orbit(a))
    assert r.conditions == expected


@settings(max_examples=30)
@given(st.integers(0, len(SCAN5) - 1), st.integers(0, 10_000))
def test_conjugation_invariance(k, seed):
    G = SCAN5[k]
    h = random_invertible(F5, np.random.default_rng(seed))[:, :, 0]
    hinv = np.array((GroupElement(F5, h.reshape(2, 2, 1)) ** -1).tolist())[:, :, 0]
    gens = [mulmod(mulmod(h, np.array(g.tolist())[:, :, 0], 5), hinv, 5) for g in G.generator_elements()]
    H = closure(F5, gens)
    a, b = classify(G).to_dict(), classify(H).to_dict()
    for key in ("order", "contains_nontrivial_scalar", "projective_order", "projective_type", "borel",
                "sylow", "det_image_order"):
        assert a[key] == b[key]
    assert bool(is_borel(G)) == bool(is_borel(H))


@pytest.mark.parametrize("G", SCAN5, ids=lambda G: str(len(G)))
def test_structural_invariants(G):
    r = classify(G)
    assert r.projective_order * len(scalar_indices(G)) == len(G)
    if r.borel:
        # every element has split characteristic polynomial and fixes the line
        v = np.array(r.eigenvector)[:, 0]
        for i in range(len(G)):
            g = G.element(i)
            assert eigenvalues(g) is not None
            w = mulmod(np.array(g.tolist())[:, :, 0], v.reshape(2, 1), 5)[:, 0]
            assert (w[0] * v[1] - w[1] * v[0]) % 5 == 0
