"""Structure of finite subgroups of GL_2(F_q): scalars, projective type, Borel containment.

Projective types are separated by explicit checks rather than isomorphism
testing.  Among subgroups of PGL_2(F_q) of order prime to p the only
candidates are cyclic, dihedral, A4, S4 and A5, and the order together with
the multiset of element orders tells them apart.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .criteria import constant_C
from .errors import NonIntegralIndex, UnsupportedLevel
from .groups import FiniteMatrixGroup, GroupElement, p_sylow
from .ring import RingElement, RingSpec, mult_order, mulmod

EXCEPTIONAL_SHAPES = {
    "A4": (12, {1: 1, 2: 3, 3: 8}),
    "S4": (24, {1: 1, 2: 9, 3: 8, 4: 6}),
    "A5": (60, {1: 1, 2: 15, 3: 20, 5: 24}),
}


def _require_field(G: FiniteMatrixGroup):
    if G.spec.n != 1:
        raise UnsupportedLevel("classification works over F_q (level n = 1) only")


def _scalar_mask(spec: RingSpec, mats: np.ndarray) -> np.ndarray:
    b = spec.b
    return (~mats[:, :b, b:].any(axis=(1, 2)) & ~mats[:, b:, :b].any(axis=(1, 2))
            & np.all(mats[:, :b, :b] == mats[:, b:, b:], axis=(1, 2)))


def scalar_indices(G: FiniteMatrixGroup) -> list[int]:
    return [int(i) for i in np.flatnonzero(_scalar_mask(G.spec, G.elements))]


def projective_orders(G: FiniteMatrixGroup) -> np.ndarray:
    """For each element, the least k >= 1 with g^k scalar."""
    m = G.spec.modulus
    out = np.zeros(len(G), dtype=np.int64)
    cur = G.elements.copy()
    k = 1
    while not out.all():
        hit = (out == 0) & _scalar_mask(G.spec, cur)
        out[hit] = k
        cur = mulmod(cur, G.elements, m)
        k += 1
    return out


class _DetOrders:
    def __init__(self):
        self.cache: dict[tuple, int] = {}

    def __call__(self, d: RingElement) -> int:
        if d.coeffs not in self.cache:
            self.cache[d.coeffs] = mult_order(d)
        return self.cache[d.coeffs]


def field_elements(spec: RingSpec) -> list[RingElement]:
    return list(spec.elements())


def char_poly(g: GroupElement) -> tuple[RingElement, RingElement]:
    """(trace, det): the characteristic polynomial is x^2 - trace x + det."""
    return g.trace(), g.det()


def eigenvalues(g: GroupElement) -> list[RingElement] | None:
    """Roots of the characteristic polynomial in F_q (with multiplicity), or None."""
    tr, det = char_poly(g)
    roots = [x for x in g.spec.elements() if (x * x - tr * x + det).is_zero()]
    if not roots:
        return None
    if len(roots) == 1:
        return [roots[0], roots[0]]
    return roots


def has_eigenvalue_one(g: GroupElement) -> bool:
    tr, det = char_poly(g)
    one = g.spec.one()
    return (one - tr + det).is_zero()


def _lines(spec: RingSpec):
    """Projective points of F_q^2 as normalised vectors: (1, t) for every t, then (0, 1)."""
    one, zero = spec.one(), spec.zero()
    for t in spec.elements():
        yield (one, t)
    yield (zero, one)


def _fixes_line(g: GroupElement, v) -> bool:
    M = g.matrix
    a, b, c, d = M.entry(0, 0), M.entry(0, 1), M.entry(1, 0), M.entry(1, 1)
    w0 = a * v[0] + b * v[1]
    w1 = c * v[0] + d * v[1]
    return (w0 * v[1] - w1 * v[0]).is_zero()


def _eigenvalue_on(g: GroupElement, v) -> RingElement:
    M = g.matrix
    if not v[0].is_zero():
        return (M.entry(0, 0) * v[0] + M.entry(0, 1) * v[1]) * v[0] ** -1
    return M.entry(1, 1)


@dataclass
class BorelResult:
    borel: bool
    eigenvector: list | None

    def __bool__(self):
        return self.borel


def is_borel(G: FiniteMatrixGroup) -> BorelResult:
    """Common eigenvector of all generators (equivalently of G), first in line order."""
    _require_field(G)
    gens = [g for g in G.generator_elements() if not g.is_scalar()]
    if not gens:
        return BorelResult(True, [[1] + [0] * (G.spec.b - 1), [0] * G.spec.b])
    # eigen-lines of the first non-scalar generator (at most two), smaller eigenvalue first
    candidates = sorted((v for v in _lines(G.spec) if _fixes_line(gens[0], v)),
                        key=lambda v: _eigenvalue_on(gens[0], v).coeffs)
    for v in candidates:
        if all(_fixes_line(g, v) for g in gens[1:]):
            return BorelResult(True, [list(v[0].coeffs), list(v[1].coeffs)])
    return BorelResult(False, None)


@dataclass
class SemisimpleGenerator:
    index: int
    matrix: list
    order: int
    det_order: int
    eigenvalues: list | str

    def to_dict(self) -> dict:
        return {"index": self.index, "matrix": self.matrix, "order": self.order,
                "det_order": self.det_order, "eigenvalues": self.eigenvalues}


def semisimple_generator(G: FiniteMatrixGroup) -> SemisimpleGenerator | None:
    """Element of order prime to p with the largest determinant order (smallest index on ties)."""
    p = G.spec.p
    orders = G.element_orders
    det_order = _DetOrders()
    best = None
    for i in range(len(G)):
        if orders[i] % p == 0:
            continue
        g = G.element(i)
        key = (-det_order(g.det()), i)
        if best is None or key < best[0]:
            best = (key, g, i)
    if best is None:
        return None
    _, g, i = best
    ev = eigenvalues(g)
    if ev is None:
        tr, det = char_poly(g)
        evs = f"conjugate pair in F_{G.spec.q}^2: x^2 - ({list(tr.coeffs)})x + ({list(det.coeffs)})"
    else:
        evs = [list(e.coeffs) for e in ev]
    return SemisimpleGenerator(i, g.tolist(), int(orders[i]), -best[0][0], evs)


@dataclass
class Certificate:
    passed: bool
    reason: str
    sylow_order: int | None = None
    g_index: int | None = None
    g_matrix: list | None = None
    g_order: int | None = None
    g_det_order: int | None = None

    def to_dict(self) -> dict:
        return {"pass": self.passed, "reason": self.reason, "sylow_order": self.sylow_order,
                "g": self.g_matrix, "g_order": self.g_order, "g_det_order": self.g_det_order}


def borel_certificate(G: FiniteMatrixGroup) -> Certificate:
    """Check that G is Borel, with unique elementary abelian p-Sylow N, and G = <N, g>
    for some g with ord(g) | q - 1 and det(g) of order p - 1."""
    _require_field(G)
    spec = G.spec
    p, q = spec.p, spec.q
    if p < 5:
        return Certificate(False, "requires p >= 5")
    if not is_borel(G):
        return Certificate(False, "no common eigenvector (not Borel)")
    syl = p_sylow(G)
    if not syl.unique:
        return Certificate(False, "p-Sylow subgroup is not unique")
    N = syl.group
    if not syl.elementary_abelian:
        return Certificate(False, "p-Sylow subgroup is not elementary abelian", len(N))
    nset = {N.elements[i].tobytes() for i in range(len(N))}
    orders = G.element_orders
    det_order = _DetOrders()
    m = spec.modulus
    ranked = sorted(range(len(G)), key=lambda i: (-det_order(G.element(i).det()), i))
    for i in ranked:
        g = G.element(i)
        if (q - 1) % int(orders[i]) or det_order(g.det()) != p - 1:
            continue
        # order of gN in G/N
        k, cur = 1, G.elements[i]
        while cur.tobytes() not in nset:
            cur = mulmod(cur, G.elements[i], m)
            k += 1
        if len(N) * k == len(G):
            return Certificate(True, "G = <N, g>", len(N), i, g.tolist(), int(orders[i]), p - 1)
    return Certificate(False, "no g of order dividing q-1 with det of order p-1 generates G with N",
                       len(N))


@dataclass
class ClassificationReport:
    order: int
    contains_nontrivial_scalar: bool
    scalar_count: int
    projective_order: int
    projective_type: str
    borel: bool
    eigenvector: list | None
    sylow: dict
    det_image_order: int
    semisimple_generator: SemisimpleGenerator | None
    borel_certificate: Certificate | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "contains_nontrivial_scalar": self.contains_nontrivial_scalar,
            "projective_order": self.projective_order,
            "projective_type": self.projective_type,
            "borel": self.borel,
            "eigenvector": self.eigenvector,
            "sylow": self.sylow,
            "det_image_order": self.det_image_order,
            "semisimple_generator": None if self.semisimple_generator is None else self.semisimple_generator.to_dict(),
            "borel_certificate": None if self.borel_certificate is None else self.borel_certificate.to_dict(),
        }


def _projective_type(G: FiniteMatrixGroup, scalars: list[int], porders: np.ndarray, sylow) -> str:
    p = G.spec.p
    pord = len(G) // len(scalars)
    # exceptional shapes first: PSL2(F_3) is A4 and PGL2(F_3) is S4
    shape = {k: v // len(scalars) for k, v in Counter(porders.tolist()).items()}
    for name, (size, counts) in EXCEPTIONAL_SHAPES.items():
        if pord == size and shape == counts:
            return name
    if pord % p == 0:
        return "p-Borel" if sylow.unique else "contains-PSL2"
    if pord == 1 or porders.max() == pord:
        return "cyclic"
    if pord % 2 == 0:
        half = pord // 2
        for x in np.flatnonzero(porders == half):
            # the preimage of <xZ> is the union of x^k Z
            C = set()
            for k in G.powers(int(x)):
                for z in scalars:
                    C.add(G.index_of(mulmod(G.elements[k], G.elements[z], G.spec.modulus)))
            outside = [i for i in range(len(G)) if i not in C]
            if all(porders[i] == 2 for i in outside):
                return "dihedral"
    return "other"


def classify(G: FiniteMatrixGroup, with_certificate: bool | None = None) -> ClassificationReport:
    """Classification report; the certificate is attached when the determinant image is F_p^*
    (or always, when ``with_certificate`` is true)."""
    from .groups import det_image

    _require_field(G)
    scalars = scalar_indices(G)
    porders = projective_orders(G)
    syl = p_sylow(G)
    sylow = {"order": syl.order, "unique": syl.unique, "normal": syl.normal,
             "elementary_abelian": syl.elementary_abelian}
    bor = is_borel(G)
    dimg = det_image(G)
    report = ClassificationReport(
        order=len(G),
        contains_nontrivial_scalar=len(scalars) > 1,
        scalar_count=len(scalars),
        projective_order=len(G) // len(scalars),
        projective_type=_projective_type(G, scalars, porders, syl),
        borel=bor.borel,
        eigenvector=bor.eigenvector,
        sylow=sylow,
        det_image_order=dimg.order,
        semisimple_generator=semisimple_generator(G),
    )
    if with_certificate or (with_certificate is None and dimg.equals_prime_units):
        report.borel_certificate = borel_certificate(G)
    return report


@dataclass
class EigenvalueDiagnostics:
    order: int
    i: int
    has_eigenvalue_one_at_i: bool
    gcd_i_pminus1: int
    c: int | None
    gcd_bound_applies: bool
    gcd_bound_ok: bool | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def eigenvalue_one_index(g: GroupElement, p: int | None = None, d: int | None = None) -> EigenvalueDiagnostics:
    """i = ord(g)/(p-1), whether g^i has eigenvalue 1, gcd(i, p-1), and the least c
    with g^c != 1 having eigenvalue 1.

    The bound gcd(i, p-1) <= d is only evaluated when ord(g) divides q - 1.
    """
    spec = g.spec
    p = spec.p if p is None else p
    d = spec.b if d is None else d
    order = g.order
    if order % (p - 1):
        raise NonIntegralIndex(f"p - 1 = {p - 1} does not divide ord(g) = {order}")
    i = order // (p - 1)
    at_i = has_eigenvalue_one(g ** i)
    c = None
    cur = g
    for k in range(1, order):
        if has_eigenvalue_one(cur):
            c = k
            break
        cur = cur * g
    gi = gcd(i, p - 1)
    applies = (spec.q - 1) % order == 0
    return EigenvalueDiagnostics(order, i, at_i, gi, c, applies, (gi <= d) if applies else None)


def frobenius_orbit(x: RingElement) -> list[RingElement]:
    orbit = [x]
    y = x ** x.spec.p
    while y != x:
        orbit.append(y)
        y = y ** x.spec.p
    return orbit


def galois_conjugate(x: RingElement, y: RingElement) -> bool:
    return y in frobenius_orbit(x)


@dataclass
class ConjugacyReport:
    conditions: list[bool]
    min_order: int
    bound: int
    bound_checked: bool
    bound_ok: bool | None

    @property
    def any_condition(self) -> bool:
        return any(self.conditions)

    def to_dict(self) -> dict:
        return {"conditions": self.conditions, "min_order": self.min_order, "bound": self.bound,
                "bound_checked": self.bound_checked, "bound_ok": self.bound_ok}


def conjugacy_conditions(l1: RingElement, l2: RingElement, p: int | None = None, d: int = 1) -> ConjugacyReport:
    """The four Frobenius-conjugacy relations between eigenvalues and twisted ratios.

    With mu_j = l_j^-1 the relations are: l1 ~ l1 mu2, l1 ~ l2 mu1, l2 ~ l1 mu2,
    l2 ~ l2 mu1.  When one holds and neither eigenvalue is 1, the smaller of
    the two eigenvalue orders is compared against C(d).
    """
    mu1, mu2 = l1 ** -1, l2 ** -1
    conds = [galois_conjugate(l1, l1 * mu2), galois_conjugate(l1, l2 * mu1),
             galois_conjugate(l2, l1 * mu2), galois_conjugate(l2, l2 * mu1)]
    one = l1.spec.one()
    min_order = min(mult_order(l1), mult_order(l2))
    C = constant_C(d)
    checked = any(conds) and l1 != one and l2 != one
    return ConjugacyReport(conds, min_order, C, checked, (min_order <= C) if checked else None)


__all__ = [
    "classify", "ClassificationReport", "is_borel", "BorelResult", "borel_certificate", "Certificate",
    "eigenvalue_one_index", "EigenvalueDiagnostics", "conjugacy_conditions", "ConjugacyReport",
    "scalar_indices", "projective_orders", "semisimple_generator", "eigenvalues", "has_eigenvalue_one",
    "frobenius_orbit", "galois_conjugate",
]
