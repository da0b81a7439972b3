"""Linear algebra over Z/p^n: Howell bases, kernels, linear solving, quotient structure.

Z/p^n is a chain ring, so Gaussian elimination over it is unsound: a pivot
may be a zero divisor.  Everything here goes through the Howell form, whose
defining property is that for every k the basis rows with k leading zeros
generate all span elements with k leading zeros.  That makes membership a
plain back-substitution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NoSolution, SpecMismatch
from .ring import MatrixRect, mulmod


@dataclass(eq=False)
class HowellBasis:
    """Canonical Howell basis of a row span inside (Z/p^n)^ncols."""

    p: int
    n: int
    ncols: int
    rows: np.ndarray
    pivots: np.ndarray
    valuations: np.ndarray
    source_shape: tuple[int, int] = (0, 0)

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    @property
    def log_order(self) -> int:
        """log_p of the number of elements in the span."""
        return int(sum(self.n - v for v in self.valuations))

    @property
    def order(self) -> int:
        return self.p ** self.log_order

    def __len__(self):
        return self.rows.shape[0]

    def reduce(self, v) -> np.ndarray:
        """Normal form of v modulo the span (unique coset representative)."""
        m = self.modulus
        v = np.array(v, dtype=np.int64).reshape(self.ncols) % m
        for row, c, e in zip(self.rows, self.pivots, self.valuations):
            f = v[c] // self.p ** int(e)
            if f:
                v = (v - f * row) % m
        return v

    def coordinates(self, v):
        """Coefficients c with c @ rows == v, or None when v is outside the span."""
        m = self.modulus
        v = np.array(v, dtype=np.int64).reshape(self.ncols) % m
        coeff = np.zeros(len(self), dtype=np.int64)
        pos = 0
        for j in range(self.ncols):
            if pos < len(self) and self.pivots[pos] == j:
                pv = self.p ** int(self.valuations[pos])
                if v[j] % pv:
                    return None
                f = v[j] // pv
                coeff[pos] = f
                if f:
                    v = (v - f * self.rows[pos]) % m
                pos += 1
            elif v[j]:
                return None
        return coeff

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None

    def scaled(self, k: int) -> "HowellBasis":
        """Howell basis of p^k times the span."""
        return howell(self.rows * (self.p ** k), self.p, self.n, ncols=self.ncols)

    def __add__(self, other: "HowellBasis") -> "HowellBasis":
        if (other.p, other.n, other.ncols) != (self.p, self.n, self.ncols):
            raise SpecMismatch("spans live in different modules")
        return howell(np.vstack([self.rows, other.rows]), self.p, self.n, ncols=self.ncols)

    def issubset(self, other: "HowellBasis") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        return (isinstance(other, HowellBasis)
                and (other.p, other.n, other.ncols) == (self.p, self.n, self.ncols)
                and np.array_equal(other.rows, self.rows))

    __hash__ = None


def howell(A, p: int, n: int, ncols: int | None = None) -> HowellBasis:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0 if A.size == 0 else 1, -1) if ncols is None else A.reshape(-1, ncols)
    if ncols is None:
        ncols = A.shape[1]
    if A.shape[0] == 0:
        return HowellBasis(p, n, ncols, np.zeros((0, ncols), dtype=np.int64),
                           np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), (0, ncols))
    rows, piv, val = _kernels.howell(A, p, n)
    return HowellBasis(p, n, ncols, rows, piv, val, tuple(A.shape))


def _int_view(M):
    if isinstance(M, MatrixRect):
        spec = M.spec
        return M.as_int_array(), spec.p, spec.n
    raise TypeError("expected a MatrixRect; use the array-level helpers otherwise")


def howell_form(M: MatrixRect) -> HowellBasis:
    """Howell basis of the row span of M (entries over Z/p^n)."""
    A, p, n = _int_view(M)
    return howell(A, p, n)


def kernel_basis(A, p: int, n: int) -> HowellBasis:
    """Howell basis of {x : A x = 0} over Z/p^n."""
    A = np.asarray(A, dtype=np.int64) % p ** n
    rows, cols = A.shape
    if rows == 0:
        return howell(np.eye(cols, dtype=np.int64), p, n)
    # kernel depends only on the row span; shrink tall systems first
    if rows > cols:
        H = howell(A, p, n)
        A = H.rows if len(H) else np.zeros((1, cols), dtype=np.int64)
        rows = A.shape[0]
    aug = np.hstack([A.T, np.eye(cols, dtype=np.int64)])
    H = howell(aug, p, n)
    keep = H.pivots >= rows
    return HowellBasis(p, n, cols, H.rows[keep][:, rows:].copy(), H.pivots[keep] - rows,
                       H.valuations[keep].copy(), (rows, cols))


def kernel(M: MatrixRect) -> HowellBasis:
    A, p, n = _int_view(M)
    return kernel_basis(A, p, n)


def image_basis(A, p: int, n: int) -> HowellBasis:
    """Howell basis of the column span of A."""
    return howell(np.asarray(A, dtype=np.int64).T, p, n)


@dataclass(eq=False)
class Solution:
    particular: np.ndarray
    kernel: HowellBasis

    def all_solutions(self):
        """Enumerate the full solution set (small kernels only)."""
        from itertools import product

        m = self.kernel.modulus
        orders = [self.kernel.p ** (self.kernel.n - int(v)) for v in self.kernel.valuations]
        seen = set()
        for coeffs in product(*(range(o) for o in orders)):
            x = self.particular.copy()
            for c, row in zip(coeffs, self.kernel.rows):
                x = (x + c * row) % m
            key = tuple(int(t) for t in x)
            if key not in seen:
                seen.add(key)
                yield key


def solve_array(A, v, p: int, n: int) -> Solution:
    m = p ** n
    A = np.asarray(A, dtype=np.int64) % m
    v = np.asarray(v, dtype=np.int64).reshape(-1) % m
    rows, cols = A.shape
    aug = np.hstack([A.T, np.eye(cols, dtype=np.int64)])
    H = howell(aug, p, n)
    target = np.concatenate([v, np.zeros(cols, dtype=np.int64)])
    x = np.zeros(cols, dtype=np.int64)
    for row, c, e in zip(H.rows, H.pivots, H.valuations):
        if c >= rows:
            break
        pv = p ** int(e)
        if target[c] % pv:
            raise NoSolution("right-hand side is outside the image")
        f = target[c] // pv
        if f:
            target = (target - f * row) % m
            x = (x + f * row[rows:]) % m
    if target[:rows].any():
        raise NoSolution("right-hand side is outside the image")
    keep = H.pivots >= rows
    ker = HowellBasis(p, n, cols, H.rows[keep][:, rows:].copy(), H.pivots[keep] - rows,
                      H.valuations[keep].copy(), (rows, cols))
    return Solution(x, ker)


def solve_linear(M: MatrixRect, v) -> Solution:
    """Particular solution and kernel of M x = v; raises NoSolution when v is not in the image."""
    A, p, n = _int_view(M)
    return solve_array(A, v, p, n)


# ---------------------------------------------------------------------------
# quotient structure via Smith form over the local ring Z/p^n
# ---------------------------------------------------------------------------

def _valuation(x: int, p: int, n: int) -> int:
    if x == 0:
        return n
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def smith_diagonal(R, p: int, n: int, ncols: int):
    """Smith form of the relation rows R over Z/p^n.

    Returns (valuations, Vinv) where the quotient (Z/p^n)^ncols / rowspan(R)
    is the direct sum of Z/p^valuations[i], generated by the rows of Vinv.
    """
    m = p ** n
    D = np.array(R, dtype=object).reshape(-1, ncols) % m if len(R) else np.zeros((0, ncols), dtype=object)
    Vinv = np.eye(ncols, dtype=object)
    rows = D.shape[0]
    vals = [n] * ncols
    t = 0
    while t < min(rows, ncols):
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                if D[i, j]:
                    v = _valuation(int(D[i, j]), p, n)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        D[[t, i]] = D[[i, t]]
        if j != t:
            D[:, [t, j]] = D[:, [j, t]]
            Vinv[[t, j]] = Vinv[[j, t]]
        pv = p ** v
        uinv = pow(int(D[t, t]) // pv, -1, m)
        D[t] = D[t] * uinv % m
        for i2 in range(rows):
            if i2 != t and D[i2, t]:
                D[i2] = (D[i2] - (D[i2, t] // pv) * D[t]) % m
        for j2 in range(t + 1, ncols):
            f = D[t, j2] // pv
            if f:
                # column op col_j2 -= f col_t; generators transform inversely
                D[:, j2] = (D[:, j2] - f * D[:, t]) % m
                Vinv[t] = (Vinv[t] + f * Vinv[j2]) % m
        vals[t] = v
        t += 1
    return vals, Vinv.astype(np.int64)


@dataclass(eq=False)
class QuotientStructure:
    invariants: list[int]
    generators: np.ndarray


def quotient_structure(sup: HowellBasis, sub: HowellBasis) -> QuotientStructure:
    """Invariant factors of sup/sub (sub must lie inside sup) with a generator per factor.

    Generators are returned in the ambient coordinates, reduced modulo ``sub``.
    """
    p, n, N = sup.p, sup.n, sup.ncols
    t = len(sup)
    if t == 0:
        return QuotientStructure([], np.zeros((0, N), dtype=np.int64))
    stacked = np.vstack([sup.rows, (-sub.rows) % sup.modulus]) if len(sub) else sup.rows
    rel = kernel_basis(stacked.T, p, n)
    R = rel.rows[:, :t] if len(rel) else np.zeros((0, t), dtype=np.int64)
    vals, Vinv = smith_diagonal(R, p, n, t)
    order = sorted(range(t), key=lambda i: (vals[i], i))
    invariants, gens = [], []
    for i in order:
        if vals[i] == 0:
            continue
        invariants.append(p ** vals[i])
        g = mulmod(Vinv[i:i + 1], sup.rows, sup.modulus)[0]
        gens.append(sub.reduce(g) if len(sub) else g % sup.modulus)
    gens_arr = np.array(gens, dtype=np.int64).reshape(len(gens), N)
    return QuotientStructure(invariants, gens_arr)


def cokernel_invariants(M: MatrixRect) -> list[int]:
    """Invariant factors of (Z/p^n)^rows / column span of M."""
    A, p, n = _int_view(M)
    full = howell(np.eye(A.shape[0], dtype=np.int64), p, n)
    return quotient_structure(full, image_basis(A, p, n)).invariants


__all__ = [
    "HowellBasis", "howell", "howell_form", "kernel", "kernel_basis", "image_basis",
    "Solution", "solve_linear", "solve_array", "smith_diagonal", "quotient_structure",
    "QuotientStructure", "cokernel_invariants",
]
