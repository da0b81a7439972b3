from itertools import product
from math import gcd

import pytest
from hypothesis import given, strategies as st

from locoh.criteria import (IsogenyBoundInput, constant_C, euclid_bound, euclid_oracle, exponent_ceiling,
                            exponent_interval, index_gcd_check, isogeny_criterion, isogeny_threshold)
from locoh.errors import InvalidNorm


def test_constant_c_exact_cases():
    assert [constant_C(d) for d in (1, 2, 3, 4)] == [4, 1024, 2 ** 82, 2 ** 626]


def test_exponent_ceilings():
    # d = 5..8: E = (d+1)^(2 log2 d), certified ceilings
    assert [exponent_ceiling(d) for d in range(1, 9)] == [1, 9, 81, 625, 4108, 23394, 117649, 531441]


def test_exponent_interval_contains_ceiling():
    iv = exponent_interval(5)
    assert 4107 < iv.a and iv.b <= 4108


def test_euclid_bound_examples():
    assert euclid_bound(2, 2) == 1024
    assert euclid_bound(1, 2) == 4
    assert euclid_bound(3, 2) == 2 * 2 ** 81


def _brute(p, d, N, top):
    best, arg = 0, None
    r = range(-N + 1, N)
    for A, B, C, D in product(r, repeat=4):
        for a in range(top + 1):
            for b in range(top + 1):
                x, y = A * p ** a - B, C * p ** b - D
                if x and y and gcd(x, y) > best:
                    best, arg = gcd(x, y), (A, B, C, D, a, b)
    return best, arg


def test_euclid_oracle_golden(kernel_path):
    r = euclid_oracle(5, 2, 2)
    assert r.max_gcd == 6 and r.ok and r.bound == 1024
    i = r.instance
    assert (i.A, i.B, i.C, i.D, i.a, i.b) == (-1, 1, -1, 1, 1, 1)
    assert i.value == 6


@pytest.mark.parametrize("p,d,N", [(5, 2, 2), (7, 2, 3), (5, 3, 2), (3, 1, 3)])
def test_euclid_oracle_matches_python(kernel_path, p, d, N):
    r = euclid_oracle(p, d, N)
    best, arg = _brute(p, d, N, d - 1)
    assert r.max_gcd == best
    i = r.instance
    assert (i.A, i.B, i.C, i.D, i.a, i.b) == arg


def test_euclid_single_instances():
    from locoh.criteria import EuclidInstance
    assert EuclidInstance(5, 2, 2, 1, 1, 1, 1, 1, 1).value == 4
    assert EuclidInstance(5, 2, 2, 1, 0, 1, 1, 0, 0).value == 1


def test_euclid_inclusive_exponents_break_d1():
    # allowing a = b = d fails already at d = 1
    r = euclid_oracle(7, 1, 2, inclusive=True)
    assert r.max_gcd == 8 and r.bound == 4 and not r.ok
    assert euclid_oracle(7, 1, 2).ok


def test_index_gcd_examples():
    assert index_gcd_check(5, 2).value == 2 and index_gcd_check(5, 2).ok
    assert index_gcd_check(3, 1).value == 1
    assert index_gcd_check(7, 3).value == 3 and index_gcd_check(7, 3).ok


def test_thresholds():
    assert isogeny_threshold(1, 2).exact == 25
    assert isogeny_threshold(2, 2).exact == (1 + 2 ** 512) ** 4
    assert isogeny_threshold(1, 3).exact == 100


def test_threshold_lower_bound_for_large_d():
    t = isogeny_threshold(3, 2)
    assert t.exact is None
    assert t.log2_lower == 2 ** 82 * 3
    assert not t.exceeded_by(2 ** 1000)


@pytest.mark.parametrize("norm,ok", [(29, True), (23, False), (25, False)])
def test_criterion_examples(norm, ok):
    p = {29: 29, 23: 23, 25: 5}[norm]
    rep = isogeny_criterion(IsogenyBoundInput(1, p, 2, norm))
    assert rep.passed is ok
    c7 = next(c for c in rep.conditions if c.id == 7)
    assert c7.status == ("pass" if ok else "fail")


def test_criterion_condition3_and_assertions():
    rep = isogeny_criterion(IsogenyBoundInput(2, 5, 2, 5 ** 2000))
    assert next(c for c in rep.conditions if c.id == 3).status == "fail"
    rep = isogeny_criterion(IsogenyBoundInput(1, 29, 2, 29, asserted={1: True, 2: True, 4: True, 5: True}))
    assert not rep.passed and "6" in rep.verdict
    rep = isogeny_criterion(IsogenyBoundInput(1, 29, 2, 29, principally_polarized=True))
    assert rep.passed and "Sha" in rep.verdict


def test_criterion_input_errors():
    with pytest.raises(InvalidNorm):
        IsogenyBoundInput(1, 5, 2, 24)
    with pytest.raises(ValueError):
        IsogenyBoundInput(1, 6, 2, 36)
    with pytest.raises(ValueError):
        IsogenyBoundInput(1, 5, 1, 25)


@given(st.integers(1, 2), st.sampled_from([5, 7, 11, 13, 29, 31]), st.integers(2, 5), st.integers(1, 40))
def test_criterion_monotone_in_norm(d, p, lam, k):
    a = isogeny_criterion(IsogenyBoundInput(d, p, lam, p ** k))
    b = isogeny_criterion(IsogenyBoundInput(d, p, lam, p ** (k + 1)))
    assert not (a.passed and not b.passed)


def test_constant_c_monotone():
    values = [exponent_ceiling(d) for d in range(1, 12)]
    assert values == sorted(values)
