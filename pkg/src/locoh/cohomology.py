"""First cohomology and first local cohomology of a finite matrix group.

A cocycle is pinned down by its values on the generators, so the unknowns
are those values, ``ngen * rank`` residues in all.  The value on any other
element is a linear function of the unknowns, obtained by walking a
breadth-first spanning tree of the Cayley graph with Z_{gs} = Z_g + g Z_s.
Requiring that identity on every Cayley edge, tree or not, characterises
the cocycles exactly.

Local conditions ask that Z_gamma lie in (gamma - 1) M for every gamma.  If
Z_gamma = (gamma - 1) m then Z_{gamma^k} = (gamma^k - 1) m as well, so it is
enough to impose the condition on one generator of each maximal cyclic
subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceeded, SpecMismatch
from .groups import FiniteMatrixGroup, cyclic_representative_indices
from .linalg import HowellBasis, howell, image_basis, kernel_basis, quotient_structure
from .ring import mulmod

DEFAULT_UNKNOWN_CAP = 20_000


class GaloisModule:
    """(Z/p^level)^rank with an action of G, one matrix per element of G."""

    def __init__(self, group: FiniteMatrixGroup, p: int, level: int, action: np.ndarray):
        action = np.asarray(action, dtype=np.int64) % p ** level
        if action.ndim != 3 or action.shape[0] != len(group) or action.shape[1] != action.shape[2]:
            raise ValueError("action must have shape (|G|, rank, rank)")
        self.group = group
        self.p = p
        self.level = level
        self.action = action

    @property
    def rank(self) -> int:
        return self.action.shape[1]

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    @property
    def size(self) -> int:
        return self.modulus ** self.rank

    def __repr__(self):
        return f"<GaloisModule rank={self.rank} over Z/{self.p}^{self.level}, |G|={len(self.group)}>"

    @classmethod
    def natural(cls, group: FiniteMatrixGroup) -> "GaloisModule":
        """The defining module GR(p^n, b)^2, viewed over Z/p^n."""
        return cls(group, group.spec.p, group.spec.n, group.elements)

    def torsion(self, k: int = 1) -> "GaloisModule":
        """The p^k-torsion submodule of a free module.

        Multiplication by p^(level - k) identifies M / p^k M with M[p^k], so
        the action is just the reduction mod p^k.
        """
        if not 1 <= k <= self.level:
            raise ValueError("torsion level out of range")
        return GaloisModule(self.group, self.p, k, self.action)

    def via(self, transform) -> "GaloisModule":
        """Same group, action replaced by ``transform(action)`` elementwise."""
        return GaloisModule(self.group, self.p, self.level, transform(self.action))

    def direct_sum(self, other: "GaloisModule") -> "GaloisModule":
        if other.group is not self.group or (other.p, other.level) != (self.p, self.level):
            raise SpecMismatch("summands must share the group and coefficient ring")
        r1, r2 = self.rank, other.rank
        A = np.zeros((len(self.group), r1 + r2, r1 + r2), dtype=np.int64)
        A[:, :r1, :r1] = self.action
        A[:, r1:, r1:] = other.action
        return GaloisModule(self.group, self.p, self.level, A)

    def check_homomorphism(self) -> bool:
        """Spot check g(s x) = (gs) x on every generator pair."""
        G = self.group
        for a in G.generators:
            for k, b in enumerate(G.generators):
                ab = int(G.cayley[a, k])
                if not np.array_equal(mulmod(self.action[a], self.action[b], self.modulus), self.action[ab]):
                    return False
        return True


@dataclass(eq=False)
class CocycleTable:
    """Values of a 1-cocycle on every group element."""

    module: GaloisModule
    values: np.ndarray
    satisfies_local_conditions: bool | None = None

    def check_identity(self) -> bool:
        """All-pairs check of Z_{gh} = Z_g + g Z_h."""
        G, M = self.module.group, self.module
        m = M.modulus
        table = G.product_table
        gz = np.einsum("gij,hj->ghi", M.action, self.values) % m
        lhs = self.values[table]
        rhs = (self.values[:, None, :] + gz) % m
        return bool(np.array_equal(lhs, rhs))

    def is_local(self) -> bool:
        M = self.module
        for g in range(len(M.group)):
            D = (M.action[g] - np.eye(M.rank, dtype=np.int64)) % M.modulus
            if not image_basis(D, M.p, M.level).contains(self.values[g]):
                return False
        return True

    def tolist(self) -> list:
        return self.values.tolist()


@dataclass(eq=False)
class CohomologyReport:
    z1_order: int
    b1_order: int
    h1_invariants: list[int]
    h1loc_invariants: list[int] | None = None
    zloc_order: int | None = None
    witnesses: list = field(default_factory=list)

    @property
    def h1_order(self) -> int:
        out = 1
        for f in self.h1_invariants:
            out *= f
        return out

    @property
    def h1loc_order(self) -> int | None:
        if self.h1loc_invariants is None:
            return None
        out = 1
        for f in self.h1loc_invariants:
            out *= f
        return out

    @property
    def h1loc_trivial(self) -> bool:
        return not self.h1loc_invariants

    def to_dict(self) -> dict:
        return {"z1_order": self.z1_order, "b1_order": self.b1_order,
                "h1_invariants": list(self.h1_invariants),
                "h1loc_invariants": None if self.h1loc_invariants is None else list(self.h1loc_invariants),
                "witnesses": self.witnesses}


class CocycleSystem:
    """Linear model of Z^1(G, M) in generator coordinates."""

    def __init__(self, module: GaloisModule, cap: int = DEFAULT_UNKNOWN_CAP):
        G = module.group
        if len(G) * module.rank > cap:
            raise CapExceeded(f"|G| * rank = {len(G) * module.rank} exceeds the unknown cap {cap}")
        self.module = module
        self.group = G
        self.ngen = len(G.generators)
        self.r = module.rank
        self.nvars = self.ngen * self.r

    @cached_property
    def lift(self) -> np.ndarray:
        """L[g] with Z_g = L[g] @ (generator values), built along a BFS tree."""
        G, M = self.group, self.module
        N, r, m = len(G), self.r, M.modulus
        L = np.zeros((N, r, self.nvars), dtype=np.int64)
        seen = np.zeros(N, dtype=bool)
        seen[G.identity] = True
        frontier = [G.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for k in range(self.ngen):
                    h = int(G.cayley[g, k])
                    if not seen[h]:
                        seen[h] = True
                        L[h] = L[g]
                        L[h][:, k * r:(k + 1) * r] = (L[h][:, k * r:(k + 1) * r] + M.action[g]) % m
                        nxt.append(h)
            frontier = nxt
        return L

    def constraint_rows(self) -> np.ndarray:
        G, M = self.group, self.module
        L, r, m = self.lift, self.r, M.modulus
        blocks = []
        for k in range(self.ngen):
            D = (L[G.cayley[:, k]] - L) % m
            D[:, :, k * r:(k + 1) * r] -= M.action
            blocks.append(D.reshape(-1, self.nvars) % m)
        return np.vstack(blocks) if blocks else np.zeros((0, 0), dtype=np.int64)

    def _empty(self) -> HowellBasis:
        return howell(np.zeros((0, self.nvars), dtype=np.int64), self.module.p, self.module.level,
                      ncols=self.nvars)

    @cached_property
    def cocycles(self) -> HowellBasis:
        if self.nvars == 0:
            return self._empty()
        return kernel_basis(self.constraint_rows(), self.module.p, self.module.level)

    @cached_property
    def coboundaries(self) -> HowellBasis:
        if self.nvars == 0:
            return self._empty()
        M = self.module
        eye = np.eye(self.r, dtype=np.int64)
        stacked = np.vstack([(M.action[s] - eye) % M.modulus for s in self.group.generators])
        return image_basis(stacked, M.p, M.level)

    def local_cocycles(self, local_at: str = "representatives") -> HowellBasis:
        """Cocycles satisfying the local condition at every chosen element.

        One representative at a time: with the current space spanned by the
        rows of Z, solve c L_gamma Z^T = (gamma - 1) m for (c, m) and keep
        the combinations c Z.
        """
        M, G = self.module, self.group
        p, n, mod = M.p, M.level, M.modulus
        if local_at == "representatives":
            points = cyclic_representative_indices(G)
        elif local_at == "all":
            points = list(range(len(G)))
        else:
            raise ValueError("local_at must be 'representatives' or 'all'")
        Z = self.cocycles
        eye = np.eye(self.r, dtype=np.int64)
        for g in points:
            if len(Z) == 0:
                break
            values = mulmod(self.lift[g], Z.rows.T, mod)
            D = (M.action[g] - eye) % mod
            system = np.hstack([values, (-D) % mod])
            sol = kernel_basis(system, p, n)
            k = len(Z)
            coeffs = sol.rows[:, :k]
            Z = howell(mulmod(coeffs, Z.rows, mod), p, n, ncols=self.nvars) if len(coeffs) else self._empty()
        return Z

    def table(self, vec) -> CocycleTable:
        vals = mulmod(self.lift, np.asarray(vec, dtype=np.int64), self.module.modulus)
        return CocycleTable(self.module, vals)


def _as_module(G, M):
    if M is None:
        return GaloisModule.natural(G)
    if M.group is not G:
        raise SpecMismatch("module is defined over a different group")
    return M


def cocycle_space(G: FiniteMatrixGroup, M: GaloisModule | None = None, cap: int = DEFAULT_UNKNOWN_CAP) -> HowellBasis:
    """Howell basis of Z^1(G, M) inside (M)^{#generators}."""
    return CocycleSystem(_as_module(G, M), cap).cocycles


def coboundary_space(G: FiniteMatrixGroup, M: GaloisModule | None = None, cap: int = DEFAULT_UNKNOWN_CAP) -> HowellBasis:
    return CocycleSystem(_as_module(G, M), cap).coboundaries


def _witness_dicts(sys_: CocycleSystem, gens) -> list:
    r = sys_.r
    out = []
    for v in gens:
        out.append([[int(t) for t in v[k * r:(k + 1) * r]] for k in range(sys_.ngen)])
    return out


def h1(G: FiniteMatrixGroup, M: GaloisModule | None = None, cap: int = DEFAULT_UNKNOWN_CAP) -> CohomologyReport:
    sys_ = CocycleSystem(_as_module(G, M), cap)
    Z, B = sys_.cocycles, sys_.coboundaries
    q = quotient_structure(Z, B)
    return CohomologyReport(Z.order, B.order, q.invariants)


def h1_loc(G: FiniteMatrixGroup, M: GaloisModule | None = None, cap: int = DEFAULT_UNKNOWN_CAP,
           local_at: str = "representatives") -> CohomologyReport:
    """H^1 and its local subgroup, with one witness cocycle per local invariant factor.

    Witnesses are listed as their values on the group's generators, reduced
    modulo coboundaries.
    """
    sys_ = CocycleSystem(_as_module(G, M), cap)
    Z, B = sys_.cocycles, sys_.coboundaries
    Zloc = sys_.local_cocycles(local_at)
    full = quotient_structure(Z, B)
    loc = quotient_structure(Zloc, B)
    return CohomologyReport(Z.order, B.order, full.invariants, loc.invariants, Zloc.order,
                            _witness_dicts(sys_, loc.generators))


def witness_tables(G: FiniteMatrixGroup, M: GaloisModule | None = None,
                   cap: int = DEFAULT_UNKNOWN_CAP) -> list[CocycleTable]:
    """Full value tables of the local witness cocycles."""
    sys_ = CocycleSystem(_as_module(G, M), cap)
    Zloc = sys_.local_cocycles()
    gens = quotient_structure(Zloc, sys_.coboundaries).generators
    return [CocycleTable(sys_.module, sys_.table(v).values, True) for v in gens]


def p_torsion_order(invariants, p: int) -> int:
    """Size of A[p] for A with the given invariant factors."""
    return p ** sum(1 for f in invariants if f > 1)


__all__ = ["GaloisModule", "CocycleTable", "CohomologyReport", "CocycleSystem", "cocycle_space",
           "coboundary_space", "h1", "h1_loc", "witness_tables", "p_torsion_order", "DEFAULT_UNKNOWN_CAP"]
