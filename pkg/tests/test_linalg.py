from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from locoh.errors import NoSolution
from locoh.linalg import (cokernel_invariants, howell, howell_form, image_basis, kernel, kernel_basis,
                          quotient_structure, solve_linear)
from locoh.ring import MatrixRect, make_ring

Z4, Z9 = make_ring(2, 2), make_ring(3, 2)


def _all_solutions(M, v):
    return set(solve_linear(M, v).all_solutions())


def test_kernel_examples(kernel_path):
    K = kernel(MatrixRect(Z4, [[2]]))
    assert K.order == 2 and K.contains([2]) and not K.contains([1])
    assert kernel(MatrixRect(Z9, np.eye(3, dtype=np.int64))).order == 1


def test_cokernel_example(kernel_path):
    assert cokernel_invariants(MatrixRect(Z4, [[2, 0], [0, 1]])) == [2]


def test_solve_examples(kernel_path):
    assert _all_solutions(MatrixRect(Z4, [[2]]), [2]) == {(1,), (3,)}
    with pytest.raises(NoSolution):
        solve_linear(MatrixRect(Z4, [[2]]), [1])
    assert _all_solutions(MatrixRect(Z4, [[1, 1], [0, 2]]), [0, 2]) == {(1, 3), (3, 1)}


def _span(A, m):
    """Every vector in the row span, by enumeration."""
    out = set()
    for c in product(range(m), repeat=A.shape[0]):
        out.add(tuple(int(t) for t in (np.array(c) @ A) % m))
    return out


matrices = st.tuples(st.sampled_from([(2, 2), (3, 2)]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32))


@given(matrices)
def test_howell_membership_matches_enumeration(args):
    (p, n), rows, cols, seed = args
    m = p ** n
    A = np.random.default_rng(seed).integers(0, m, size=(rows, cols))
    span = _span(A, m)
    H = howell(A, p, n)
    assert H.order == len(span)
    for v in product(range(m), repeat=cols):
        assert H.contains(v) == (v in span)


@given(matrices)
def test_kernel_vectors_are_killed(args):
    (p, n), rows, cols, seed = args
    m = p ** n
    A = np.random.default_rng(seed).integers(0, m, size=(rows, cols))
    K = kernel_basis(A, p, n)
    for row in K.rows:
        assert not ((A @ row) % m).any()
    brute = sum(1 for v in product(range(m), repeat=cols) if not ((A @ np.array(v)) % m).any())
    assert K.order == brute


@given(matrices)
def test_solutions_are_complete(args):
    (p, n), rows, cols, seed = args
    m = p ** n
    rng = np.random.default_rng(seed)
    A = rng.integers(0, m, size=(rows, cols))
    v = rng.integers(0, m, size=rows)
    brute = {x for x in product(range(m), repeat=cols) if not ((A @ np.array(x) - v) % m).any()}
    try:
        got = set(solve_linear(MatrixRect(make_ring(p, n), A), v).all_solutions())
    except NoSolution:
        got = set()
    assert got == brute


@given(st.integers(0, 2 ** 32))
def test_quotient_invariants_multiply_to_index(seed):
    rng = np.random.default_rng(seed)
    big = howell(rng.integers(0, 9, size=(3, 4)), 3, 2)
    if not len(big):
        return
    # a subgroup: random combinations of the basis rows
    sub = howell(rng.integers(0, 9, size=(2, len(big))) @ big.rows % 9, 3, 2)
    q = quotient_structure(big, sub)
    assert int(np.prod(q.invariants, dtype=np.int64)) * sub.order == big.order
    assert q.invariants == sorted(q.invariants)


def test_howell_form_is_canonical(kernel_path):
    A = np.array([[2, 1, 0], [0, 2, 2], [2, 3, 2]])
    B = np.array([[0, 2, 2], [2, 1, 0]])
    Ha, Hb = howell(A, 2, 2), howell(B, 2, 2)
    assert np.array_equal(Ha.rows, Hb.rows)
    assert Ha == Hb
    assert howell_form(MatrixRect(Z4, A)) == Ha
    assert image_basis(A.T, 2, 2) == Ha
