"""Subgroups of GL_2(F_p) up to conjugacy, for small p.

The ambient group is tabulated once (product, inverse and conjugation
tables over element indices), after which subgroup closure is a breadth
first search over integers.  Subgroups generated by k elements are reached
as joins <R, b> where R runs over class representatives generated by k - 1
elements; conjugating a k-generated group so that its first k - 1
generators land on a representative shows this misses nothing.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from . import _kernels
from .errors import OrderCapExceeded, UnsupportedLevel
from .groups import DEFAULT_CLOSURE_CAP, FiniteMatrixGroup, gl2_order
from .ring import make_ring

MAX_SCAN_PRIME = 7


@dataclass(frozen=True)
class ScanSpec:
    p: int
    max_generators: int = 2
    max_element_order: int | None = None
    max_order: int | None = None
    det_filter: bool = False

    def __post_init__(self):
        if self.max_generators < 1:
            raise ValueError("generator cap must be positive")
        for cap in (self.max_element_order, self.max_order):
            if cap is not None and cap < 1:
                raise ValueError("caps must be positive")


class AmbientGL2:
    """All of GL_2(F_p) with index-level tables; index order is entry-lexicographic."""

    def __init__(self, p: int, closure_cap: int = DEFAULT_CLOSURE_CAP):
        if p > MAX_SCAN_PRIME:
            raise UnsupportedLevel(f"subgroup scans are limited to p <= {MAX_SCAN_PRIME}")
        if gl2_order(p) > closure_cap:
            raise OrderCapExceeded(f"|GL2(F_{p})| exceeds cap {closure_cap}")
        self.p = p
        self.spec = make_ring(p)
        grid = np.indices((p, p, p, p)).reshape(4, -1).T
        dets = (grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]) % p
        keep = dets != 0
        self.mats = grid[keep].reshape(-1, 2, 2).astype(np.int64)
        self.dets = dets[keep]
        self.traces = (self.mats[:, 0, 0] + self.mats[:, 1, 1]) % p
        self.N = len(self.mats)
        code = np.full(p ** 4, -1, dtype=np.int64)
        code[np.flatnonzero(keep)] = np.arange(self.N)
        self._code = code
        self.mul = self._product_table()
        ident = self.index(np.eye(2, dtype=np.int64))
        self.identity = ident
        rows, cols = np.nonzero(self.mul == ident)
        self.inverse = np.empty(self.N, dtype=np.int64)
        self.inverse[rows] = cols
        # conj[x, h] = x h x^-1
        self.conj = self.mul[self.mul, self.inverse[:, None]].astype(np.int32)
        self.orders = self._orders()

    def _encode(self, mats) -> np.ndarray:
        p = self.p
        flat = np.asarray(mats).reshape(-1, 4) % p
        return self._code[((flat[:, 0] * p + flat[:, 1]) * p + flat[:, 2]) * p + flat[:, 3]]

    def index(self, mat) -> int:
        return int(self._encode(mat)[0])

    def _product_table(self) -> np.ndarray:
        A = self.mats
        out = np.empty((self.N, self.N), dtype=np.int32)
        for i in range(self.N):
            prod = np.einsum("ij,njk->nik", A[i], A) % self.p
            out[i] = self._encode(prod)
        return out

    def _orders(self) -> np.ndarray:
        orders = np.zeros(self.N, dtype=np.int64)
        cur = np.arange(self.N)
        k = 1
        while not orders.all():
            hit = (orders == 0) & (cur == self.identity)
            orders[hit] = k
            cur = self.mul[cur, np.arange(self.N)]
            k += 1
        return orders

    def closure(self, gens) -> np.ndarray:
        return _kernels.closure_indices(self.mul, np.asarray(gens, dtype=np.int64), self.identity)

    def det_order(self, idx) -> int:
        """Order of the subgroup of F_p^* generated by the determinants of idx."""
        p = self.p
        order = 1
        for d in {int(self.dets[i]) for i in idx}:
            k, x = 1, d
            while x != 1:
                x = x * d % p
                k += 1
            order = order * k // gcd(order, k)
        return order

    def fingerprint(self, idx) -> tuple:
        return (len(idx),
                tuple(sorted(Counter(self.orders[idx].tolist()).items())),
                self.det_order(idx),
                tuple(sorted(Counter(self.traces[idx].tolist()).items())))

    def conjugator(self, gens_H, K_mask, size_H: int, size_K: int):
        """Some x with x H x^-1 = K, or None."""
        if size_H != size_K:
            return None
        images = self.conj[:, gens_H]
        ok = K_mask[images].all(axis=1)
        hit = np.flatnonzero(ok)
        return int(hit[0]) if hit.size else None

    def min_conjugate(self, idx) -> tuple[tuple[int, ...], int]:
        """Lexicographically least sorted index tuple among conjugates, with a conjugator."""
        conjs = np.sort(self.conj[:, idx], axis=1)
        order = np.lexsort(conjs.T[::-1])
        x = int(order[0])
        return tuple(int(t) for t in conjs[x]), x


@lru_cache(maxsize=8)
def ambient(p: int) -> AmbientGL2:
    return AmbientGL2(p)


@dataclass
class _Class:
    members: np.ndarray
    gens: tuple[int, ...]
    fingerprint: tuple


def _dedupe(amb: AmbientGL2, candidates) -> list[_Class]:
    """Merge candidate (members, gens) pairs into conjugacy classes, first hit wins."""
    classes: list[_Class] = []
    seen: set[bytes] = set()
    buckets: dict[tuple, list[int]] = {}
    for members, gens in candidates:
        key = members.tobytes()
        if key in seen:
            continue
        seen.add(key)
        fp = amb.fingerprint(members)
        bucket = buckets.setdefault(fp, [])
        mask = np.zeros(amb.N, dtype=bool)
        mask[members] = True
        found = False
        for c in bucket:
            if amb.conjugator(np.asarray(classes[c].gens), mask, len(classes[c].members), len(members)) is not None:
                found = True
                break
        if not found:
            bucket.append(len(classes))
            classes.append(_Class(members, tuple(gens), fp))
    return classes


def _joins(amb: AmbientGL2, base: _Class, pool: np.ndarray):
    out = []
    for b in pool:
        gens = base.gens + (int(b),)
        out.append((amb.closure([g for g in gens if g != amb.identity] or [amb.identity]), gens))
    return out


def enumerate_subgroups(scan: ScanSpec, jobs: int = 1) -> list[FiniteMatrixGroup]:
    """Subgroups of GL_2(F_p) generated by at most ``scan.max_generators`` elements, one per conjugacy class.

    Each class is represented by its conjugate with the least sorted index
    tuple; output is sorted by (order, that tuple).  Threads only change
    wall time, never the result.
    """
    amb = ambient(scan.p)
    pool = np.arange(amb.N)
    if scan.max_element_order is not None:
        pool = pool[amb.orders <= scan.max_element_order]
    level = _dedupe(amb, ((amb.closure([int(g)]), (int(g),)) for g in [amb.identity, *pool]))
    level = [c for c in level if scan.max_order is None or len(c.members) <= scan.max_order]
    every = list(level)
    for _ in range(scan.max_generators - 1):
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                batches = list(ex.map(lambda c: _joins(amb, c, pool), level))
        else:
            batches = [_joins(amb, c, pool) for c in level]
        cands = [(m, g) for batch in batches for m, g in batch
                 if scan.max_order is None or len(m) <= scan.max_order]
        # earlier levels take precedence so generator tuples stay minimal
        merged = _dedupe(amb, [(c.members, c.gens) for c in every] + cands)
        level = merged[len(every):]
        every = merged
    results = []
    for c in every:
        canon, x = amb.min_conjugate(c.members)
        gens = sorted({int(amb.conj[x, g]) for g in c.gens if g != amb.identity})
        results.append((len(canon), canon, gens))
    results.sort(key=lambda r: (r[0], r[1]))
    groups = []
    for _, canon, gens in results:
        G = _table_group(amb, np.asarray(canon), gens)
        if scan.det_filter and G.det_order != scan.p - 1:
            continue
        groups.append(G)
    return groups


class ScannedGroup(FiniteMatrixGroup):
    """A subgroup found by the scan, remembering its ambient indices."""

    ambient_indices: np.ndarray
    det_order: int


def _table_group(amb: AmbientGL2, idx: np.ndarray, gens: list[int]) -> ScannedGroup:
    G = ScannedGroup.__new__(ScannedGroup)
    G.spec = amb.spec
    G.elements = np.ascontiguousarray(amb.mats[idx][:, :, :])
    G._index = {e.tobytes(): i for i, e in enumerate(G.elements)}
    pos = {int(a): i for i, a in enumerate(idx)}
    G.generators = [pos[g] for g in gens]
    G.cayley = np.array([[pos[int(amb.mul[a, g])] for g in gens] for a in idx],
                        dtype=np.int64).reshape(len(idx), len(gens))
    G.ambient_indices = idx
    G.det_order = amb.det_order(idx)
    return G


def conjugate_subgroups(G: ScannedGroup) -> list[ScannedGroup]:
    """Every distinct conjugate x G x^-1 of a scanned group, in first-found order over x."""
    amb = ambient(G.spec.p)
    gens = [int(G.ambient_indices[s]) for s in G.generators]
    seen: set[bytes] = set()
    out = []
    for x in range(amb.N):
        idx = np.sort(amb.conj[x, G.ambient_indices])
        key = idx.tobytes()
        if key in seen:
            continue
        seen.add(key)
        out.append(_table_group(amb, idx, [int(amb.conj[x, g]) for g in gens]))
    return out


def subgroup_fingerprint(G: FiniteMatrixGroup) -> tuple:
    """(order, element-order multiset, det-image order, trace multiset) for a level-one group."""
    amb = ambient(G.spec.p)
    idx = amb._encode(G.elements)
    return amb.fingerprint(idx)


def are_conjugate(G: FiniteMatrixGroup, H: FiniteMatrixGroup) -> bool:
    amb = ambient(G.spec.p)
    gi = amb._encode(G.elements)
    hi = amb._encode(H.elements)
    mask = np.zeros(amb.N, dtype=bool)
    mask[hi] = True
    gens = gi[G.generators] if G.generators else np.array([amb.identity])
    return amb.conjugator(gens, mask, len(gi), len(hi)) is not None


__all__ = ["ScanSpec", "AmbientGL2", "ambient", "enumerate_subgroups", "subgroup_fingerprint", "conjugate_subgroups",
           "are_conjugate", "ScannedGroup", "MAX_SCAN_PRIME"]
