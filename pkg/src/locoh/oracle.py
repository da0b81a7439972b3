"""Enumeration oracle for H^1 and H^1_loc of tiny instances.

Nothing here touches the echelon machinery.  Cocycles are found by trying
every value of M at every group element and keeping the partial functions
that satisfy Z_{gh} = Z_g + g Z_h on all pairs assigned so far.  Elements
are assigned in breadth-first order from the identity, so most candidates
die one step after they are proposed.  Group structure of the quotients
comes from counting: the number of invariant factors exceeding p^j equals
log_p |p^j Q| - log_p |p^(j+1) Q|.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .cohomology import CohomologyReport, GaloisModule
from .errors import OracleCapExceeded

ORACLE_MAX_GROUP = 8
ORACLE_MAX_MODULE = 81
LITERAL_MAX_FUNCTIONS = 200_000


def _module_vectors(M: GaloisModule) -> np.ndarray:
    return np.array(list(product(range(M.modulus), repeat=M.rank)), dtype=np.int64).reshape(-1, M.rank)


def _bfs_order(G) -> list[int]:
    order, seen = [G.identity], {G.identity}
    head = 0
    while head < len(order):
        g = order[head]
        head += 1
        for k in range(len(G.generators)):
            h = int(G.cayley[g, k])
            if h not in seen:
                seen.add(h)
                order.append(h)
    return order


def _pruned_cocycles(G, M: GaloisModule) -> np.ndarray:
    N, r, m = len(G), M.rank, M.modulus
    table = G.product_table
    vecs = _module_vectors(M)
    # act[g, v] = index of g.v
    weights = m ** np.arange(r - 1, -1, -1)
    images = np.einsum("gij,vj->gvi", M.action, vecs) % m
    act = images @ weights
    add = ((vecs[:, None, :] + vecs[None, :, :]) % m) @ weights
    order = _bfs_order(G)
    pos = {g: i for i, g in enumerate(order)}
    # checks[i]: pairs (a, b) fully decided once order[i] is assigned
    checks = [[] for _ in range(N)]
    for a in range(N):
        for b in range(N):
            c = int(table[a, b])
            checks[max(pos[a], pos[b], pos[c])].append((a, b, c))
    out = []
    val = np.full(N, -1, dtype=np.int64)

    def extend(i):
        if i == N:
            out.append(val.copy())
            return
        g = order[i]
        for v in range(len(vecs)):
            val[g] = v
            if all(val[c] == add[val[a], act[a, val[b]]] for a, b, c in checks[i]):
                extend(i + 1)
        val[g] = -1

    extend(0)
    if not out:
        return np.zeros((0, N, r), dtype=np.int64)
    return vecs[np.array(out)]


def _literal_cocycles(G, M: GaloisModule) -> np.ndarray:
    N, m = len(G), M.modulus
    table = G.product_table
    vecs = _module_vectors(M)
    keep = []
    for choice in product(range(len(vecs)), repeat=N):
        Z = vecs[list(choice)]
        gz = np.einsum("gij,hj->ghi", M.action, Z) % m
        if np.array_equal(Z[table], (Z[:, None, :] + gz) % m):
            keep.append(Z)
    return np.array(keep, dtype=np.int64).reshape(-1, N, M.rank)


def _count(rows: np.ndarray, width: int) -> int:
    rows = rows.reshape(-1, width)
    return len(np.unique(rows, axis=0)) if len(rows) else 0


def _invariants(Z: np.ndarray, B: np.ndarray, p: int, m: int) -> list[int]:
    flatB = B.reshape(len(B), -1)
    sizes = []
    j = 0
    while True:
        scaled = (Z.reshape(len(Z), -1) * p ** j) % m
        cosets = np.unique(scaled, axis=0)
        total = _count((cosets[:, None, :] + flatB[None, :, :]) % m, flatB.shape[1])
        sizes.append(total // len(flatB))
        if sizes[-1] <= 1:
            break
        j += 1
    logs = [round(np.log(s) / np.log(p)) for s in sizes]
    inv = []
    for j in range(len(logs) - 1):
        above = logs[j] - logs[j + 1]
        inv.append(above)
    # inv[j] = number of factors of order > p^j
    factors = []
    for j in range(len(inv)):
        exact = inv[j] - (inv[j + 1] if j + 1 < len(inv) else 0)
        factors += [p ** (j + 1)] * exact
    return sorted(factors)


def brute_force_h1(G, M: GaloisModule | None = None, max_group: int = ORACLE_MAX_GROUP,
                   max_module: int = ORACLE_MAX_MODULE, literal: bool = False) -> CohomologyReport:
    """H^1 and H^1_loc by enumeration, local conditions checked at every element."""
    if M is None:
        M = GaloisModule.natural(G)
    N, m, p = len(G), M.modulus, M.p
    if N > max_group or M.size > max_module:
        raise OracleCapExceeded(f"oracle limited to |G| <= {max_group} and |M| <= {max_module}")
    if literal:
        if M.size ** N > LITERAL_MAX_FUNCTIONS:
            raise OracleCapExceeded("too many functions for literal enumeration")
        Z = _literal_cocycles(G, M)
    else:
        Z = _pruned_cocycles(G, M)
    vecs = _module_vectors(M)
    eye = np.eye(M.rank, dtype=np.int64)
    B = np.stack([np.einsum("gij,j->gi", (M.action - eye) % m, v) % m for v in vecs])
    B = np.unique(B.reshape(len(B), -1), axis=0).reshape(-1, N, M.rank)
    local_sets = []
    for g in range(N):
        imgs = (vecs @ ((M.action[g] - eye) % m).T) % m
        local_sets.append({tuple(t) for t in imgs.tolist()})
    is_loc = np.array([all(tuple(z[g]) in local_sets[g] for g in range(N)) for z in Z.tolist()], dtype=bool)
    Zloc = Z[is_loc] if len(Z) else Z
    h1_inv = _invariants(Z, B, p, m)
    loc_inv = _invariants(Zloc, B, p, m)
    return CohomologyReport(len(Z), len(B), h1_inv, loc_inv, len(Zloc), [])


__all__ = ["brute_force_h1", "ORACLE_MAX_GROUP", "ORACLE_MAX_MODULE"]
