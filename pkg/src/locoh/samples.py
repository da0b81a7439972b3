"""Deterministic instance generators: lifted groups, twisted modules, Borel samples."""

from __future__ import annotations

import numpy as np

from .cohomology import GaloisModule
from .errors import OrderCapExceeded
from .groups import FiniteMatrixGroup, _matpow, closure, element_order, GroupElement
from .ring import RingSpec, make_ring, mulmod


def random_invertible(spec: RingSpec, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of GL_2(GR(p^n, b)) as a (2, 2, b) coefficient array."""
    while True:
        M = rng.integers(0, spec.modulus, size=(2, 2, spec.b))
        g = GroupElement(spec, _restricted(spec, M))
        if g.det().is_unit():
            return M


def _restricted(spec: RingSpec, M) -> np.ndarray:
    from .groups import _as_restricted
    return _as_restricted(spec, M)


def lift_generators(G: FiniteMatrixGroup, n: int, rng: np.random.Generator | None = None) -> tuple[RingSpec, list]:
    """Generators of G (over F_q) read in GR(p^n, b), optionally perturbed by p * (random)."""
    base = G.spec
    spec = make_ring(base.p, n, base.b, base.poly)
    gens = []
    for g in G.generator_elements():
        M = np.array(g.tolist(), dtype=np.int64)
        if rng is not None:
            M = M + base.p * rng.integers(0, spec.modulus, size=M.shape)
        gens.append(M % spec.modulus)
    return spec, gens


def teichmuller_power(spec: RingSpec, M, m: int) -> np.ndarray:
    """The power of M lying over the same residue with order dividing m (m prime to p).

    With ord(M) = m p^j, the exponent e = 1 mod m, e = 0 mod p^j works.
    """
    R = _restricted(spec, M)
    k = element_order(GroupElement(spec, R))
    pj = 1
    while k % (pj * spec.p) == 0:
        pj *= spec.p
    e = next(e for e in range(pj, pj * m + 1, pj) if e % m == 1 % m)
    return _matpow(R, e, spec.modulus)


def scalar_lift_samples(count: int, seed: int = 0, p: int = 5, n: int = 2, max_base_order: int = 16,
                        max_order: int = 10_000):
    """Groups over Z/p^n containing lambda Id (lambda != 1 mod p), lifted from small F_p subgroups.

    Lifts whose order exceeds ``max_order`` are discarded and redrawn.
    """
    from .scan import ScanSpec, enumerate_subgroups

    rng = np.random.default_rng(seed)
    pool = [G for G in enumerate_subgroups(ScanSpec(p)) if len(G) <= max_base_order]
    out = []
    while len(out) < count:
        G = pool[int(rng.integers(len(pool)))]
        spec, gens = lift_generators(G, n, rng)
        lam = int(rng.integers(2, p)) + p * int(rng.integers(0, p ** (n - 1)))
        gens.append(np.array([[[lam], [0]], [[0], [lam]]]))
        try:
            out.append(closure(spec, gens, cap=max_order))
        except OrderCapExceeded:
            continue
    return out


def borel_lift_samples(count: int, seed: int = 0, p: int = 5, n: int = 2, kernel_prob: float = 0.3):
    """Borel groups over Z/p^n: a diagonal element with Teichmuller entries != 1 mod p,
    one or two upper unipotents, and sometimes a random element of the congruence kernel."""
    rng = np.random.default_rng(seed)
    spec = make_ring(p, n)
    m = spec.modulus
    out = []
    while len(out) < count:
        a, b = (int(x) for x in rng.integers(2, p, size=2))
        ta, tb = pow(a, p ** (n - 1), m), pow(b, p ** (n - 1), m)
        gens = [np.array([[ta, 0], [0, tb]])]
        for _ in range(int(rng.integers(1, 3))):
            gens.append(np.array([[1, int(rng.integers(1, m))], [0, 1]]))
        if rng.random() < kernel_prob:
            K = np.eye(2, dtype=np.int64) + p * rng.integers(0, p ** (n - 1), size=(2, 2))
            K[1, 0] = 0
            gens.append(K % m)
        out.append(closure(spec, [g.reshape(2, 2, 1) for g in gens]))
    return out


def split_borel_lift_samples(count: int, seed: int = 0, p: int = 5, n: int = 2, max_order: int = 5000):
    """Borel groups over Z/p^n generated by diag(t, 1) (t a Teichmuller lift of a generator
    of F_p^*), an upper-triangular congruence-kernel element, and sometimes a unipotent.

    These reduce to groups with full determinant image and often have H^1_loc != 0.
    """
    rng = np.random.default_rng(seed)
    spec = make_ring(p, n)
    m = spec.modulus
    roots = [a for a in range(2, p) if all(pow(a, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1))]
    out = []
    while len(out) < count:
        t = pow(int(rng.choice(roots)), p ** (n - 1), m)
        R = rng.integers(0, p ** (n - 1), size=(2, 2))
        R[1, 0] = 0
        gens = [np.array([[t, 0], [0, 1]]), (np.eye(2, dtype=np.int64) + p * R) % m]
        if rng.random() < 0.5:
            gens.append(np.array([[1, int(rng.integers(0, m))], [0, 1]]))
        try:
            out.append(closure(spec, [g.reshape(2, 2, 1) for g in gens], cap=max_order))
        except OrderCapExceeded:
            continue
    return out


def _prime_factors(k: int) -> list[int]:
    from .ring import factorize
    return sorted(factorize(k))


# ---------------------------------------------------------------------------
# twisted actions of a fixed group
# ---------------------------------------------------------------------------

def inverse_elements(G: FiniteMatrixGroup) -> np.ndarray:
    orders = G.element_orders
    return np.stack([_matpow(G.elements[i], int(orders[i]) - 1, G.spec.modulus) for i in range(len(G))])


def conjugated_module(G: FiniteMatrixGroup, h) -> GaloisModule:
    """g acts through h g h^-1."""
    spec = G.spec
    H = _restricted(spec, h)
    Hinv = _matpow(H, element_order(GroupElement(spec, H)) - 1, spec.modulus)
    m = spec.modulus
    A = mulmod(mulmod(H, G.elements, m), Hinv, m)
    return GaloisModule(G, spec.p, spec.n, A)


def dual_module(G: FiniteMatrixGroup) -> GaloisModule:
    """g acts through (g^-1)^T on the restricted module."""
    inv = inverse_elements(G)
    return GaloisModule(G, G.spec.p, G.spec.n, np.transpose(inv, (0, 2, 1)))


def det_twisted_module(G: FiniteMatrixGroup, k: int) -> GaloisModule:
    """g acts through det(g)^k g."""
    spec = G.spec
    m, b = spec.modulus, spec.b
    A = np.empty_like(G.elements)
    for i in range(len(G)):
        d = G.element(i).det() ** k
        D = np.zeros((2 * b, 2 * b), dtype=np.int64)
        D[:b, :b] = D[b:, b:] = spec.mult_matrix(d.coeffs)
        A[i] = mulmod(D, G.elements[i], m)
    return GaloisModule(G, spec.p, spec.n, A)


def random_module(G: FiniteMatrixGroup, rng: np.random.Generator) -> tuple[str, GaloisModule]:
    kind = ["natural", "conjugate", "dual", "det-twist"][int(rng.integers(4))]
    if kind == "natural":
        return kind, GaloisModule.natural(G)
    if kind == "conjugate":
        return kind, conjugated_module(G, random_invertible(G.spec, rng))
    if kind == "dual":
        return kind, dual_module(G)
    k = int(rng.integers(1, max(2, G.spec.unit_group_order)))
    return f"det-twist^{k}", det_twisted_module(G, k)


def nontrivial_local_pool() -> list[FiniteMatrixGroup]:
    """Small groups with H^1_loc != 0 on the natural module."""
    Z4, Z8, Z9 = make_ring(2, 2), make_ring(2, 3), make_ring(3, 2)
    F4, F8 = make_ring(2, 1, 2), make_ring(2, 1, 3)
    return [
        closure(Z4, [[[1, 2], [0, 1]], [[3, 2], [0, 3]]]),
        closure(Z8, [[[7, 2], [0, 5]], [[3, 2], [0, 1]]]),
        closure(Z9, [[[1, 3], [5, 7]], [[7, 3], [5, 4]]]),
        closure(F4, [[[[1, 1], [1, 1]], [[1, 0], [1, 1]]], [[[0, 1], [1, 0]], [[0, 1], [0, 1]]]]),
        closure(F8, [[[[1, 0, 0], [0, 0, 0]], [[1, 1, 1], [1, 0, 0]]],
                     [[[1, 0, 0], [0, 0, 0]], [[0, 0, 1], [1, 0, 0]]]]),
        # SL_2(F_4)
        closure(F4, [[[[1, 0], [1, 0]], [[0, 0], [1, 0]]], [[[1, 0], [0, 0]], [[1, 0], [1, 0]]],
                     [[[0, 1], [0, 0]], [[0, 0], [1, 1]]]]),
    ]


def direct_sum_pairs(count: int, seed: int = 0, max_order: int = 120, nontrivial_share: float = 0.4):
    """(G, M1, M2) with M1, M2 two random actions of the same group G.

    A ``nontrivial_share`` of the groups come from ``nontrivial_local_pool``,
    the rest from the scans at p = 2, 3, 5.
    """
    from .scan import ScanSpec, enumerate_subgroups

    rng = np.random.default_rng(seed)
    scanned = [G for p in (2, 3, 5) for G in enumerate_subgroups(ScanSpec(p)) if len(G) <= max_order]
    special = nontrivial_local_pool()
    out = []
    for _ in range(count):
        pool = special if rng.random() < nontrivial_share else scanned
        G = pool[int(rng.integers(len(pool)))]
        k1, M1 = random_module(G, rng)
        k2, M2 = random_module(G, rng)
        out.append((G, (k1, M1), (k2, M2)))
    return out


__all__ = [
    "random_invertible", "lift_generators", "split_borel_lift_samples", "teichmuller_power", "scalar_lift_samples", "borel_lift_samples",
    "conjugated_module", "dual_module", "det_twisted_module", "random_module", "nontrivial_local_pool",
    "direct_sum_pairs", "inverse_elements",
]
