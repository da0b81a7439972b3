import numpy as np
import pytest
from hypothesis import given, strategies as st

from locoh.errors import CompositeModulus, NotAUnit, ReduciblePolynomial, SpecMismatch
from locoh.ring import (MatrixRect, frobenius, make_ring, mult_order, restrict_scalars, ring_mul,
                        smallest_irreducible, unit_inverse)

SPECS = [make_ring(5), make_ring(2, 2), make_ring(3, 2), make_ring(3, 1, 2), make_ring(2, 1, 3), make_ring(2, 2, 2),
         make_ring(5, 2, 2)]


def test_make_ring_defaults():
    assert make_ring(3).poly == (0, 1)
    assert make_ring(3, 1, 2).poly == (1, 0, 1)


def test_make_ring_errors():
    with pytest.raises(ReduciblePolynomial):
        make_ring(3, 1, 2, [0, 1, 1])
    with pytest.raises(CompositeModulus):
        make_ring(6)


def test_smallest_irreducible_is_lexicographic():
    # x^2 + 1 has no root mod 3; nothing smaller (constant term first) is irreducible
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert smallest_irreducible(2, 2) == (1, 1, 1)


def test_multiplication_examples():
    F9 = make_ring(3, 1, 2)
    x = F9.gen()
    assert x * x == F9.element(2)
    Z4 = make_ring(2, 2)
    assert ring_mul(Z4.element(2), Z4.element(2)) == Z4.zero()
    with pytest.raises(SpecMismatch):
        ring_mul(Z4.one(), F9.one())


def test_inverse_examples():
    Z4 = make_ring(2, 2)
    assert unit_inverse(Z4.element(3)) == Z4.element(3)
    with pytest.raises(NotAUnit):
        unit_inverse(Z4.element(2))
    F9 = make_ring(3, 1, 2)
    assert unit_inverse(F9.gen()) == F9.element([0, 2])


def test_orders_and_frobenius():
    F9 = make_ring(3, 1, 2)
    x = F9.gen()
    assert mult_order(x) == 4
    assert mult_order(F9.one()) == 1
    assert mult_order(make_ring(5).element(2)) == 4
    assert frobenius(x) == F9.element([0, 2])
    assert frobenius(F9.element(2)) == F9.element(2)


@st.composite
def triples(draw):
    spec = draw(st.sampled_from(SPECS))
    coeffs = st.lists(st.integers(0, spec.modulus - 1), min_size=spec.b, max_size=spec.b)
    return spec, [spec.element(draw(coeffs)) for _ in range(3)]


@given(triples())
def test_ring_axioms(t):
    spec, (a, b, c) = t
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a * spec.one() == a


@given(triples())
def test_inverse_property(t):
    spec, (a, _, _) = t
    if a.is_unit():
        assert unit_inverse(a) * a == spec.one()
    else:
        with pytest.raises(NotAUnit):
            unit_inverse(a)


@given(triples())
def test_frobenius_is_a_field_automorphism(t):
    spec, (a, b, _) = t
    if spec.n != 1:
        return
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    y = a
    for _ in range(spec.b):
        y = frobenius(y)
    assert y == a


def test_restrict_scalars_examples():
    F9 = make_ring(3, 1, 2)
    assert np.array_equal(restrict_scalars(MatrixRect.identity(F9, 2)).as_int_array(), np.eye(4, dtype=np.int64))
    x = F9.gen()
    R = restrict_scalars(MatrixRect.from_elements(F9, [[x, F9.zero()], [F9.zero(), x]])).as_int_array()
    block = np.array([[0, 2], [1, 0]])
    assert np.array_equal(R[:2, :2], block) and np.array_equal(R[2:, 2:], block)
    assert not R[:2, 2:].any() and not R[2:, :2].any()


@given(st.sampled_from(SPECS), st.integers(0, 2 ** 32))
def test_restrict_scalars_is_multiplicative(spec, seed):
    rng = np.random.default_rng(seed)
    A = MatrixRect(spec, rng.integers(0, spec.modulus, size=(2, 2, spec.b)))
    B = MatrixRect(spec, rng.integers(0, spec.modulus, size=(2, 2, spec.b)))
    lhs = restrict_scalars(A @ B)
    rhs = restrict_scalars(A) @ restrict_scalars(B)
    assert lhs == rhs
    if A.is_invertible():
        R = restrict_scalars(A).as_int_array()
        assert _det_mod(R, spec.p) != 0


def _det_mod(R, p):
    R = R.copy() % p
    k = len(R)
    det = 1
    for c in range(k):
        piv = next((r for r in range(c, k) if R[r, c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            R[[c, piv]] = R[[piv, c]]
            det = -det
        det = det * int(R[c, c]) % p
        inv = pow(int(R[c, c]), -1, p)
        for r in range(c + 1, k):
            R[r] = (R[r] - R[r, c] * inv * R[c]) % p
    return det % p
