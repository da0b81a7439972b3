"""Finite subgroups of GL_2 over Galois rings, realised as explicit element lists.

Elements are stored after restriction of scalars, as 2b x 2b integer
matrices over Z/p^n.  That form is what the cohomology code acts with, and
since restriction is an injective ring homomorphism the group law is
unchanged.  The canonical element order is lexicographic on the 2x2
coefficient layout (a, b, c, d entry by entry, each entry low degree first).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .errors import NotInvertible, OrderCapExceeded
from .ring import MatrixRect, RingElement, RingSpec, mulmod, mult_order, restrict_scalars, unrestrict_matrix

DEFAULT_CLOSURE_CAP = 200_000


def _as_restricted(spec: RingSpec, g) -> np.ndarray:
    if isinstance(g, MatrixRect):
        if g.spec == spec:
            return restrict_scalars(g).as_int_array()
        if g.spec == spec.base and g.rows == 2 * spec.b:
            return g.as_int_array()
        raise ValueError("generator lives over a different ring")
    arr = np.asarray(g, dtype=np.int64)
    if arr.shape == (2, 2) and spec.b == 1:
        arr = arr[:, :, None]
    if arr.shape == (2, 2, spec.b):
        return restrict_scalars(MatrixRect(spec, arr)).as_int_array()
    if arr.shape == (2 * spec.b, 2 * spec.b):
        return arr % spec.modulus
    raise ValueError(f"cannot read a generator of shape {arr.shape}")


def _gr_layout(spec: RingSpec, mats: np.ndarray) -> np.ndarray:
    """(N, 4b) coefficient layout of restricted matrices: a, b, c, d."""
    b = spec.b
    return np.concatenate([mats[:, 0:b, 0], mats[:, 0:b, b], mats[:, b:, 0], mats[:, b:, b]], axis=1)


def canonical_order(spec: RingSpec, mats: np.ndarray) -> np.ndarray:
    keys = _gr_layout(spec, mats)
    return np.lexsort(keys.T[::-1])


@dataclass(eq=False)
class GroupElement:
    """A 2x2 matrix over GR(p^n, b), held in restricted (2b x 2b over Z/p^n) form.

    Any layout accepted by ``closure`` may be passed; it is normalised here.
    """

    spec: RingSpec
    restricted: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "restricted", _as_restricted(self.spec, self.restricted))

    @cached_property
    def matrix(self) -> MatrixRect:
        return unrestrict_matrix(self.restricted, self.spec, 2, 2)

    @cached_property
    def order(self) -> int:
        return element_order(self)

    def det(self) -> RingElement:
        return self.matrix.det()

    def trace(self) -> RingElement:
        return self.matrix.entry(0, 0) + self.matrix.entry(1, 1)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.spec, mulmod(self.restricted, other.restricted, self.spec.modulus))

    def __pow__(self, e: int) -> "GroupElement":
        if e < 0:
            e %= self.order
        return GroupElement(self.spec, _matpow(self.restricted, e, self.spec.modulus))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and np.array_equal(self.restricted, other.restricted)

    def __hash__(self):
        return hash(self.restricted.tobytes())

    def is_identity(self) -> bool:
        return np.array_equal(self.restricted, np.eye(len(self.restricted), dtype=np.int64))

    def is_scalar(self) -> bool:
        M = self.matrix
        return (M.entry(0, 1).is_zero() and M.entry(1, 0).is_zero()
                and M.entry(0, 0) == M.entry(1, 1))

    def tolist(self) -> list:
        return self.matrix.tolist()


def _matpow(A: np.ndarray, e: int, m: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = A.copy()
    while e:
        if e & 1:
            result = mulmod(result, base, m)
        base = mulmod(base, base, m)
        e >>= 1
    return result


def element_order(g: GroupElement) -> int:
    """Least m >= 1 with g^m = 1."""
    if not g.det().is_unit():
        raise NotInvertible("element is not invertible")
    r = g.restricted.shape[0]
    ident = np.eye(r, dtype=np.int64)
    m = g.spec.modulus
    cur = g.restricted.copy()
    k = 1
    while not np.array_equal(cur, ident):
        cur = mulmod(cur, g.restricted, m)
        k += 1
    return k


class FiniteMatrixGroup:
    """An explicit finite subgroup of GL_2(GR(p^n, b)).

    ``elements`` has shape (order, 2b, 2b) in canonical order; ``generators``
    indexes into it; ``cayley[g, s]`` is the index of elements[g] @ gen_s.
    """

    def __init__(self, spec: RingSpec, elements: np.ndarray, generators, cayley: np.ndarray | None = None):
        self.spec = spec
        self.elements = np.ascontiguousarray(elements, dtype=np.int64)
        self.generators = [int(s) for s in generators]
        self._index = {e.tobytes(): i for i, e in enumerate(self.elements)}
        if cayley is None:
            cayley = self._build_cayley()
        self.cayley = cayley

    def __len__(self):
        return self.elements.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    @property
    def rank(self) -> int:
        return self.elements.shape[1]

    def __repr__(self):
        return f"<FiniteMatrixGroup order={len(self)} over GR({self.spec.p}^{self.spec.n}, {self.spec.b})>"

    def index_of(self, mat) -> int:
        return self._index[np.ascontiguousarray(mat, dtype=np.int64).tobytes()]

    def lookup(self, mats) -> np.ndarray:
        """Indices of a batch of matrices (KeyError when one is outside the group)."""
        mats = np.ascontiguousarray(mats, dtype=np.int64)
        return np.fromiter((self._index[m.tobytes()] for m in mats), dtype=np.int64, count=len(mats))

    def contains(self, mat) -> bool:
        return np.ascontiguousarray(mat, dtype=np.int64).tobytes() in self._index

    @cached_property
    def identity(self) -> int:
        return self.index_of(np.eye(self.rank, dtype=np.int64))

    def element(self, i: int) -> GroupElement:
        return GroupElement(self.spec, self.elements[i].copy())

    def generator_elements(self) -> list[GroupElement]:
        return [self.element(s) for s in self.generators]

    def _build_cayley(self) -> np.ndarray:
        m = self.spec.modulus
        out = np.empty((len(self), len(self.generators)), dtype=np.int64)
        for k, s in enumerate(self.generators):
            out[:, k] = self.lookup(mulmod(self.elements, self.elements[s], m))
        return out

    @cached_property
    def inverse_table(self) -> np.ndarray:
        inv = np.empty(len(self), dtype=np.int64)
        table = self.product_table
        e = self.identity
        rows, cols = np.nonzero(table == e)
        inv[rows] = cols
        return inv

    @cached_property
    def product_table(self) -> np.ndarray:
        """Full multiplication table; quadratic in the order, so only for modest groups."""
        m = self.spec.modulus
        out = np.empty((len(self), len(self)), dtype=np.int64)
        for i in range(len(self)):
            out[i] = self.lookup(mulmod(self.elements[i], self.elements, m))
        return out

    @cached_property
    def element_orders(self) -> np.ndarray:
        N, m = len(self), self.spec.modulus
        ident = np.eye(self.rank, dtype=np.int64)
        orders = np.zeros(N, dtype=np.int64)
        cur = self.elements.copy()
        k = 1
        while True:
            done = (orders == 0) & np.all(cur == ident, axis=(1, 2))
            orders[done] = k
            if orders.all():
                return orders
            cur = mulmod(cur, self.elements, m)
            k += 1

    def powers(self, i: int) -> list[int]:
        """Indices of i^0, i^1, ..., i^(ord-1)."""
        m = self.spec.modulus
        out = [self.identity]
        cur = self.elements[i]
        while True:
            j = self.index_of(cur)
            if j == self.identity:
                return out
            out.append(j)
            cur = mulmod(cur, self.elements[i], m)

    def subgroup(self, gen_indices) -> "FiniteMatrixGroup":
        return closure(self.spec, [self.elements[i] for i in gen_indices])

    def is_abelian(self) -> bool:
        gens = self.elements[self.generators]
        m = self.spec.modulus
        for a in gens:
            for b in gens:
                if not np.array_equal(mulmod(a, b, m), mulmod(b, a, m)):
                    return False
        return True

    def conjugate(self, h) -> "FiniteMatrixGroup":
        """h G h^-1 with generators conjugated in order."""
        h = _as_restricted(self.spec, h)
        hinv = _matpow(h, self._inverse_exponent(h), self.spec.modulus)
        m = self.spec.modulus
        gens = [mulmod(mulmod(h, self.elements[s], m), hinv, m) for s in self.generators]
        return closure(self.spec, gens)

    def _inverse_exponent(self, h) -> int:
        # h^(k-1) = h^-1 for k the order of h
        return element_order(GroupElement(self.spec, h)) - 1

    def to_dict(self) -> dict:
        return {"ring": self.spec.to_dict(),
                "generators": [self.element(s).tolist() for s in self.generators]}


def closure(spec: RingSpec, generators, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteMatrixGroup:
    """Enumerate the group generated by ``generators`` (breadth first, right multiplication)."""
    m = spec.modulus
    gens = []
    for k, g in enumerate(generators):
        R = _as_restricted(spec, g)
        el = GroupElement(spec, R)
        if not el.det().is_unit():
            raise NotInvertible(f"generator {k} is not invertible")
        gens.append(R)
    r = 2 * spec.b
    ident = np.eye(r, dtype=np.int64)
    found = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        batch = np.array(frontier)
        frontier = []
        for s in gens:
            prods = mulmod(batch, s, m)
            for P in prods:
                key = P.tobytes()
                if key not in found:
                    found[key] = P
                    frontier.append(P)
                    if len(found) > cap:
                        raise OrderCapExceeded(f"group order exceeds cap {cap}")
    mats = np.array(list(found.values()), dtype=np.int64).reshape(-1, r, r)
    mats = mats[canonical_order(spec, mats)]
    group = FiniteMatrixGroup.__new__(FiniteMatrixGroup)
    group.spec = spec
    group.elements = np.ascontiguousarray(mats)
    group._index = {e.tobytes(): i for i, e in enumerate(group.elements)}
    group.generators = [group._index[s.tobytes()] for s in gens]
    group.cayley = group._build_cayley()
    return group


@dataclass
class DetImage:
    order: int
    generator: RingElement
    equals_prime_units: bool

    def to_dict(self) -> dict:
        return {"order": self.order, "generator": list(self.generator.coeffs),
                "equals_prime_units": self.equals_prime_units}


def det_image(G: FiniteMatrixGroup) -> DetImage:
    """Cyclic subgroup of F_q^* generated by determinants (reduced mod p when n > 1)."""
    spec = G.spec
    field = RingSpec(spec.p, 1, spec.b, tuple(c % spec.p for c in spec.poly))
    dets = []
    for g in G.generator_elements():
        d = g.det()
        dets.append(field.element([c % spec.p for c in d.coeffs]))
    one = field.one()
    order = 1
    for d in dets:
        k = mult_order(d)
        order = order * k // gcd(order, k)
    # enumerate the subgroup and take its smallest element of full order
    members = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for d in dets:
                c = a * d
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    gen = min((a for a in members if mult_order(a) == order), key=lambda a: a.coeffs)
    return DetImage(order, gen, order == spec.p - 1)


@dataclass
class SylowInfo:
    group: FiniteMatrixGroup | None
    unique: bool
    normal: bool
    elementary_abelian: bool

    @property
    def order(self) -> int | None:
        return None if self.group is None else len(self.group)


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def p_sylow(G: FiniteMatrixGroup) -> SylowInfo:
    """The p-Sylow subgroup when it is unique; ``unique=False`` otherwise."""
    p = G.spec.p
    orders = G.element_orders
    p_elems = [i for i in range(len(G)) if _is_p_power(int(orders[i]), p)]
    S = closure(G.spec, [G.elements[i] for i in p_elems if i != G.identity])
    if len(S) != len(p_elems):
        return SylowInfo(None, False, False, False)
    m = G.spec.modulus
    normal = True
    for s in G.generators:
        g = G.elements[s]
        ginv = _matpow(g, int(orders[s]) - 1, m)
        conj = mulmod(mulmod(g, S.elements, m), ginv, m)
        if not all(S.contains(c) for c in conj):
            normal = False
            break
    elem_ab = S.is_abelian() and all(int(o) in (1, p) for o in S.element_orders)
    return SylowInfo(S, True, normal, elem_ab)


def cyclic_subgroups(G: FiniteMatrixGroup) -> dict[frozenset, int]:
    """Every cyclic subgroup, mapped to its smallest-index generator."""
    out: dict[frozenset, int] = {}
    for i in range(len(G)):
        C = frozenset(G.powers(i))
        if C not in out:
            out[C] = i
    return out


def cyclic_representative_indices(G: FiniteMatrixGroup) -> list[int]:
    """One generator per maximal cyclic subgroup, in canonical order.

    Every cyclic subgroup of G is generated by a power of one of these.
    """
    subs = cyclic_subgroups(G)
    by_size = sorted(subs, key=len, reverse=True)
    reps = []
    for C in by_size:
        gen = subs[C]
        if any(len(D) > len(C) and gen in D for D in by_size[:by_size.index(C)]):
            continue
        reps.append(gen)
    return sorted(reps)


def cyclic_representatives(G: FiniteMatrixGroup) -> list[GroupElement]:
    return [G.element(i) for i in cyclic_representative_indices(G)]


def reduce_level(G: FiniteMatrixGroup, k: int = 1) -> FiniteMatrixGroup:
    """The image of G in GL_2(GR(p^k, b)), generated by the reduced generators."""
    from .ring import make_ring

    spec = G.spec
    if not 1 <= k <= spec.n:
        raise ValueError(f"level {k} outside 1..{spec.n}")
    low = make_ring(spec.p, k, spec.b, spec.poly)
    return closure(low, [G.elements[s] % low.modulus for s in G.generators])


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


__all__ = [
    "GroupElement", "FiniteMatrixGroup", "closure", "element_order", "det_image", "DetImage",
    "p_sylow", "SylowInfo", "cyclic_representatives", "cyclic_representative_indices",
    "cyclic_subgroups", "canonical_order", "gl2_order", "reduce_level", "DEFAULT_CLOSURE_CAP",
]
