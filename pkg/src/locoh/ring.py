"""Residue rings Z/p^n and Galois rings GR(p^n, b), plus 2x2-style matrices over them.

A Galois ring is modelled as (Z/p^n)[x]/(f) with f monic of degree b and
irreducible mod p.  Elements carry their coefficient vector on the basis
1, x, ..., x^(b-1).  Multiplication goes through the b x b matrix of
"multiply by a" on that basis, which is also what ``restrict_scalars`` uses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import CompositeModulus, NotAUnit, ReduciblePolynomial, SpecMismatch

MAX_MODULUS = 2 ** 31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def factorize(m: int) -> dict[int, int]:
    """Trial-division factorisation; inputs here are group orders of desk size."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def mulmod(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """``A @ B mod m`` for int64 arrays, exact even when int64 accumulation would overflow."""
    inner = A.shape[-1]
    if (m - 1) ** 2 * max(inner, 1) < 2 ** 63:
        return np.matmul(A, B) % m
    out = np.matmul(A.astype(object), B.astype(object)) % m
    return out.astype(np.int64)


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = [c % p for c in a]
    a = _ptrim(a)
    f = _ptrim([c % p for c in f])
    inv = pow(f[-1], -1, p)
    while len(a) >= len(f):
        c = a[-1] * inv % p
        shift = len(a) - len(f)
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        a = _ptrim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pgcd(a, b, p):
    a, b = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible_mod_p(poly, p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Degree <= 3 uses an exhaustive root search.  Higher degrees use Ben-Or's
    test: gcd(x^(p^k) - x, f) = 1 for every k <= deg/2.
    """
    f = _ptrim([c % p for c in poly])
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if deg <= 3:
        for r in range(p):
            if sum(c * pow(r, i, p) for i, c in enumerate(f)) % p == 0:
                return False
        return True
    xpow = [0, 1]
    for _ in range(deg // 2):
        xpow = _ppowmod(xpow, p, f, p)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, b: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree b (low degree compared first)."""
    if b == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=b):
        poly = tuple(low) + (1,)
        if is_irreducible_mod_p(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# ring spec and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    """Galois ring GR(p^n, b) = (Z/p^n)[x]/(poly); ``poly`` includes the leading 1."""

    p: int
    n: int
    b: int
    poly: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise CompositeModulus(f"{self.p} is not prime")
        if self.n < 1 or self.b < 1:
            raise ValueError("level n and degree b must be >= 1")
        if self.p ** self.n > MAX_MODULUS:
            raise ValueError(f"modulus {self.p}^{self.n} exceeds 2^31")
        poly = tuple(int(c) % self.p ** self.n for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if len(poly) != self.b + 1 or poly[-1] != 1:
            raise ValueError(f"defining polynomial must be monic of degree {self.b}")
        if self.b == 1 and poly != (0, 1):
            raise ValueError("for b = 1 the defining polynomial must be x")
        if not is_irreducible_mod_p(poly, self.p):
            raise ReduciblePolynomial(f"{list(poly)} is reducible mod {self.p}")

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    @property
    def q(self) -> int:
        return self.p ** self.b

    @property
    def base(self) -> "RingSpec":
        """The scalar ring Z/p^n underneath."""
        if self.b == 1:
            return self
        return RingSpec(self.p, self.n, 1, (0, 1))

    @property
    def unit_group_order(self) -> int:
        return self.p ** (self.b * (self.n - 1)) * (self.q - 1)

    @cached_property
    def _companion_powers(self) -> np.ndarray:
        b, m = self.b, self.modulus
        C = np.zeros((b, b), dtype=np.int64)
        for j in range(b - 1):
            C[j + 1, j] = 1
        C[:, b - 1] = [(-c) % m for c in self.poly[:b]]
        powers = np.empty((b, b, b), dtype=np.int64)
        powers[0] = np.eye(b, dtype=np.int64)
        for k in range(1, b):
            powers[k] = mulmod(powers[k - 1], C, m)
        return powers

    def mult_matrix(self, coeffs) -> np.ndarray:
        """b x b matrix of multiplication by the element with these coefficients."""
        c = np.asarray(coeffs, dtype=np.int64).reshape(self.b) % self.modulus
        P = self._companion_powers
        if (self.modulus - 1) ** 2 * self.b < 2 ** 63:
            return np.tensordot(c, P, axes=1) % self.modulus
        return (np.tensordot(c.astype(object), P.astype(object), axes=1) % self.modulus).astype(np.int64)

    def element(self, coeffs) -> "RingElement":
        if isinstance(coeffs, (int, np.integer)):
            coeffs = [int(coeffs)] + [0] * (self.b - 1)
        coeffs = tuple(int(c) % self.modulus for c in coeffs)
        if len(coeffs) != self.b:
            raise ValueError(f"expected {self.b} coefficients, got {len(coeffs)}")
        return RingElement(self, coeffs)

    def zero(self) -> "RingElement":
        return self.element(0)

    def one(self) -> "RingElement":
        return self.element(1)

    def gen(self) -> "RingElement":
        """The class of x (equal to 0 in Z/p^n when b = 1)."""
        if self.b == 1:
            return self.zero()
        return self.element([0, 1] + [0] * (self.b - 2))

    def elements(self):
        """Every element, in coefficient-lexicographic order."""
        for coeffs in itertools.product(range(self.modulus), repeat=self.b):
            yield RingElement(self, tuple(coeffs))

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "b": self.b, "poly": list(self.poly)}


def make_ring(p: int, n: int = 1, b: int = 1, poly=None) -> RingSpec:
    """Build GR(p^n, b); without ``poly`` the smallest monic irreducible is used."""
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    if poly is None:
        poly = smallest_irreducible(p, b)
    return RingSpec(p, n, b, tuple(poly))


@dataclass(frozen=True)
class RingElement:
    spec: RingSpec
    coeffs: tuple[int, ...]

    def _check(self, other) -> "RingElement":
        if isinstance(other, (int, np.integer)):
            return self.spec.element(int(other))
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.spec != self.spec:
            raise SpecMismatch("ring elements live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        m = self.spec.modulus
        return RingElement(self.spec, tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        m = self.spec.modulus
        return RingElement(self.spec, tuple((-a) % m for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return ring_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return unit_inverse(self) ** (-e)
        result, base = self.spec.one(), self
        while e:
            if e & 1:
                result = ring_mul(result, base)
            base = ring_mul(base, base)
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(c % self.spec.p for c in self.coeffs)

    def in_prime_subring(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.in_prime_subring():
            raise ValueError("element is not in Z/p^n")
        return self.coeffs[0]

    def __repr__(self):
        if self.spec.b == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}"))
        return " + ".join(terms) if terms else "0"


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    if a.spec != b.spec:
        raise SpecMismatch("ring elements live in different rings")
    spec = a.spec
    if spec.b == 1:
        return RingElement(spec, ((a.coeffs[0] * b.coeffs[0]) % spec.modulus,))
    prodv = mulmod(spec.mult_matrix(a.coeffs), np.array(b.coeffs, dtype=np.int64), spec.modulus)
    return RingElement(spec, tuple(int(c) for c in prodv))


def unit_inverse(a: RingElement) -> RingElement:
    if not a.is_unit():
        raise NotAUnit(f"{a!r} is not a unit (it vanishes mod p)")
    return a ** (a.spec.unit_group_order - 1)


def mult_order(a: RingElement) -> int:
    if not a.is_unit():
        raise NotAUnit(f"{a!r} is not a unit")
    order = a.spec.unit_group_order
    one = a.spec.one()
    for ell in factorize(order):
        while order % ell == 0 and a ** (order // ell) == one:
            order //= ell
    return order


def frobenius(a: RingElement) -> RingElement:
    """x -> x^p; a ring automorphism of F_q when n = 1."""
    return a ** a.spec.p


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MatrixRect:
    """Matrix over a RingSpec stored as an int64 array of shape (rows, cols, b)."""

    spec: RingSpec
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.int64)
        if data.ndim == 2 and self.spec.b == 1:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] != self.spec.b:
            raise ValueError(f"matrix data must have shape (rows, cols, {self.spec.b})")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("matrix dimensions must be positive")
        self.data = data % self.spec.modulus

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_elements(cls, spec: RingSpec, grid) -> "MatrixRect":
        arr = np.array([[spec.element(e).coeffs if not isinstance(e, RingElement) else e.coeffs
                         for e in row] for row in grid], dtype=np.int64)
        return cls(spec, arr)

    @classmethod
    def identity(cls, spec: RingSpec, size: int) -> "MatrixRect":
        arr = np.zeros((size, size, spec.b), dtype=np.int64)
        for i in range(size):
            arr[i, i, 0] = 1
        return cls(spec, arr)

    def entry(self, i: int, j: int) -> RingElement:
        return RingElement(self.spec, tuple(int(c) for c in self.data[i, j]))

    def as_int_array(self) -> np.ndarray:
        """Entries as a 2-d integer array; only defined over Z/p^n (b = 1)."""
        if self.spec.b != 1:
            raise SpecMismatch("integer view requires b = 1")
        return self.data[:, :, 0].copy()

    def __matmul__(self, other: "MatrixRect") -> "MatrixRect":
        if other.spec != self.spec:
            raise SpecMismatch("matrices live over different rings")
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if self.spec.b == 1:
            return MatrixRect(self.spec, mulmod(self.as_int_array(), other.as_int_array(), self.spec.modulus))
        base = restrict_matrix(self) @ restrict_matrix(other)
        return unrestrict_matrix(base, self.spec, self.rows, other.cols)

    def __eq__(self, other):
        return (isinstance(other, MatrixRect) and other.spec == self.spec
                and np.array_equal(other.data, self.data))

    def __hash__(self):
        return hash((self.spec, self.data.tobytes()))

    def det(self) -> RingElement:
        if self.rows != 2 or self.cols != 2:
            raise ValueError("det implemented for 2x2 matrices only")
        return self.entry(0, 0) * self.entry(1, 1) - self.entry(0, 1) * self.entry(1, 0)

    def is_invertible(self) -> bool:
        return self.det().is_unit()

    def tolist(self) -> list:
        return self.data.tolist()


def restrict_matrix(M: MatrixRect) -> MatrixRect:
    """Any rows x cols matrix over GR(p^n, b) as (rows*b) x (cols*b) over Z/p^n."""
    spec = M.spec
    b = spec.b
    out = np.zeros((M.rows * b, M.cols * b), dtype=np.int64)
    for i in range(M.rows):
        for j in range(M.cols):
            out[i * b:(i + 1) * b, j * b:(j + 1) * b] = spec.mult_matrix(M.data[i, j])
    return MatrixRect(spec.base, out)


def unrestrict_matrix(R, spec: RingSpec, rows: int, cols: int) -> MatrixRect:
    """Inverse of ``restrict_matrix`` on its image: read column 0 of every b x b block."""
    arr = R.as_int_array() if isinstance(R, MatrixRect) else np.asarray(R)
    b = spec.b
    data = np.empty((rows, cols, b), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            data[i, j] = arr[i * b:(i + 1) * b, j * b]
    return MatrixRect(spec, data)


def restrict_scalars(M: MatrixRect) -> MatrixRect:
    """A 2x2 matrix over GR(p^n, b) as a 2b x 2b matrix over Z/p^n.

    Basis order: 1, x, ..., x^(b-1) on the first coordinate, then the same on
    the second.  The map is a unital ring homomorphism.
    """
    if M.rows != 2 or M.cols != 2:
        raise ValueError("restrict_scalars expects a 2x2 matrix")
    return restrict_matrix(M)


def units_lcm_order(elements) -> int:
    """Order of the subgroup generated by commuting units (lcm of the orders)."""
    out = 1
    for a in elements:
        k = mult_order(a)
        out = out * k // gcd(out, k)
    return out


__all__ = [
    "RingSpec", "RingElement", "MatrixRect", "make_ring", "ring_mul", "unit_inverse",
    "mult_order", "frobenius", "restrict_scalars", "restrict_matrix", "unrestrict_matrix",
    "is_prime", "is_irreducible_mod_p", "smallest_irreducible", "mulmod", "factorize",
    "units_lcm_order",
]
