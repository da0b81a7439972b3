"""The verification suite: each check runs one family of instances and lists failures.

Checks are registered in ``CHECKS`` in the order the suite runs them.  A
check returns the number of instances it looked at and one line of text per
failing instance; an empty failure list means the check passed.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .classify import borel_certificate, eigenvalue_one_index, scalar_indices
from .cohomology import GaloisModule, h1, h1_loc, p_torsion_order
from .config import RunConfig
from .criteria import (IsogenyBoundInput, constant_C, euclid_oracle, exponent_ceiling, index_gcd_check,
                       isogeny_criterion)
from .errors import NonIntegralIndex
from .groups import det_image, reduce_level
from .oracle import brute_force_h1
from .ring import is_prime
from .samples import (borel_lift_samples, conjugated_module, det_twisted_module, direct_sum_pairs, dual_module,
                      nontrivial_local_pool, random_invertible, scalar_lift_samples, split_borel_lift_samples)
from .scan import ScanSpec, ambient, conjugate_subgroups, enumerate_subgroups


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    instances: int
    failures: list[str]
    seconds: float
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"check": self.check_id, "anchor": self.anchor, "instances": self.instances,
                "failures": self.failures, "seconds": round(self.seconds, 3), "notes": self.notes}


@dataclass
class VerifySuiteReport:
    checks: list[CheckRecord]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            out.append(f"{status} {c.check_id:<18} {c.instances:>6} instances  {c.seconds:7.2f}s  {c.anchor}")
            out.extend(f"    note: {n}" for n in c.notes)
            out.extend(f"    failure: {f}" for f in c.failures[:20])
            if len(c.failures) > 20:
                out.append(f"    ... {len(c.failures) - 20} more")
        return out


@dataclass
class Outcome:
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def expect(self, ok: bool, message: str):
        self.instances += 1
        if not ok:
            self.failures.append(message)


def _label(G) -> str:
    gens = [G.element(s).tolist() for s in G.generators]
    return f"|G|={len(G)} over Z/{G.spec.modulus} gens={gens}"


# ---------------------------------------------------------------------------
# cohomology checks
# ---------------------------------------------------------------------------

def check_oracle(cfg: RunConfig, primes=(2, 3), max_order: int = 8, supplement: bool = True) -> Outcome:
    """Every subgroup of GL_2(F_p) of order <= max_order (all conjugates, not just
    class representatives) against enumeration, optionally plus twisted modules
    and groups with nonzero local classes."""
    out = Outcome()

    def compare(G, M, what):
        fast = h1_loc(G, M, cap=cfg.unknown_cap)
        slow = brute_force_h1(G, M, cfg.oracle_max_group, cfg.oracle_max_module)
        same = (fast.h1_invariants == slow.h1_invariants and fast.h1loc_invariants == slow.h1loc_invariants
                and fast.z1_order == slow.z1_order and fast.b1_order == slow.b1_order)
        out.expect(same, f"{what}: linear algebra H1={fast.h1_invariants} loc={fast.h1loc_invariants}, "
                         f"enumeration H1={slow.h1_invariants} loc={slow.h1loc_invariants}")

    classes = []
    for p in primes:
        classes += [G for G in enumerate_subgroups(ScanSpec(p, max_order=max_order))]
    for C in classes:
        for G in conjugate_subgroups(C):
            compare(G, None, _label(G))
    if not supplement:
        return out
    rng = np.random.default_rng(7)
    twisted = 0
    for C in classes:
        if len(C) < 2 or C.spec.p < 3:
            continue
        for kind, M in (("dual", dual_module(C)), ("det-twist", det_twisted_module(C, 1)),
                        ("conjugate", conjugated_module(C, random_invertible(C.spec, rng)))):
            compare(C, M, f"{kind} module, {_label(C)}")
            twisted += 1
    pool = [G for G in nontrivial_local_pool() if len(G) <= cfg.oracle_max_group]
    for G in pool:
        compare(G, None, _label(G))
    out.notes.append(f"{twisted} twisted modules and {len(pool)} groups with nonzero H^1_loc included")
    return out


def _distinct_cyclic(p: int):
    amb = ambient(p)
    seen: set[bytes] = set()
    for g in range(amb.N):
        idx = amb.closure([g])
        key = idx.tobytes()
        if key not in seen:
            seen.add(key)
            yield g, idx


def check_cyclic(cfg: RunConfig, primes=(3, 5, 7)) -> Outcome:
    """H^1_loc vanishes for every cyclic subgroup <g> of GL_2(F_p)."""
    from .scan import _table_group

    out = Outcome()
    for p in primes:
        amb = ambient(p)
        for g, idx in _distinct_cyclic(p):
            G = _table_group(amb, idx, [g] if g != amb.identity else [])
            r = h1_loc(G, cap=cfg.unknown_cap)
            out.expect(r.h1loc_trivial, f"p={p}, g={amb.mats[g].tolist()}: H1_loc={r.h1loc_invariants}")
    return out


def check_scalar(cfg: RunConfig, primes=(3, 5, 7), lifted: int = 20) -> Outcome:
    """A scalar lambda Id with lambda != 1 forces H^1 = 0."""
    out = Outcome()
    for p in primes:
        for G in enumerate_subgroups(ScanSpec(p)):
            if len(scalar_indices(G)) > 1:
                r = h1(G, cap=cfg.unknown_cap)
                out.expect(not r.h1_invariants, f"{_label(G)}: H1={r.h1_invariants}")
    for G in scalar_lift_samples(lifted):
        r = h1(G, cap=cfg.unknown_cap)
        out.expect(not r.h1_invariants, f"lift {_label(G)}: H1={r.h1_invariants}")
    return out


def _require_certificate(G, context: str, out: Outcome):
    cert = borel_certificate(G)
    if not cert.passed:
        out.failures.append(f"{context}: nonzero H1_loc but certificate fails ({cert.reason})")


def check_borel(cfg: RunConfig, primes=(5, 7), lifted: int = 40, jobs: int = 1) -> Outcome:
    """Nonzero H^1_loc with full determinant image forces G (mod p) = <N, g>, Borel."""
    out = Outcome()
    for p in primes:
        groups = enumerate_subgroups(ScanSpec(p, det_filter=True), jobs=jobs)
        nonzero = 0
        for G in groups:
            out.instances += 1
            if h1_loc(G, cap=cfg.unknown_cap).h1loc_invariants:
                nonzero += 1
                _require_certificate(G, _label(G), out)
        out.notes.append(f"p={p}: {len(groups)} groups with full det image, {nonzero} with H^1_loc != 0")
    nonzero = 0
    for G in split_borel_lift_samples(lifted):
        out.instances += 1
        H = reduce_level(G)
        if h1_loc(G, cap=cfg.unknown_cap).h1loc_invariants and det_image(H).equals_prime_units:
            nonzero += 1
            _require_certificate(H, f"reduction of {_label(G)}", out)
    out.notes.append(f"Z/25 lifts: {lifted} groups, {nonzero} with H^1_loc != 0 and full det image")
    return out


def check_split(cfg: RunConfig, pairs: int = 50) -> Outcome:
    """H^1_loc of M1 + M2 is the concatenation of the two H^1_loc."""
    out = Outcome()
    nonzero = 0
    for G, (k1, M1), (k2, M2) in direct_sum_pairs(pairs):
        a = h1_loc(G, M1, cap=cfg.unknown_cap).h1loc_invariants
        b = h1_loc(G, M2, cap=cfg.unknown_cap).h1loc_invariants
        s = h1_loc(G, M1.direct_sum(M2), cap=cfg.unknown_cap).h1loc_invariants
        nonzero += bool(s)
        out.expect(s == sorted(a + b), f"{_label(G)} with {k1} + {k2}: sum {s}, parts {a} and {b}")
    out.notes.append(f"{nonzero} of {pairs} sums have H^1_loc != 0")
    return out


def check_eigen_one(cfg: RunConfig, primes=(5, 7), lifted: int = 40) -> Outcome:
    """Eigenvalue-one diagnostics on certified groups; g^i has eigenvalue 1 when H^1_loc != 0."""
    out = Outcome()
    for p in primes:
        for G in enumerate_subgroups(ScanSpec(p, det_filter=True)):
            cert = borel_certificate(G)
            if not cert.passed:
                continue
            g = G.element(cert.g_index)
            try:
                e = eigenvalue_one_index(g, p, 1)
            except NonIntegralIndex as exc:
                out.expect(False, f"{_label(G)}: {exc}")
                continue
            out.expect(e.gcd_bound_ok is not False, f"{_label(G)}: gcd(i, p-1) = {e.gcd_i_pminus1} > 1")
            out.expect(e.c is None or e.c <= e.order, f"{_label(G)}: c = {e.c} out of range")
    hits = 0
    for G in split_borel_lift_samples(lifted, seed=1):
        if not h1_loc(G, cap=cfg.unknown_cap).h1loc_invariants:
            continue
        H = reduce_level(G)
        if not det_image(H).equals_prime_units:
            continue
        cert = borel_certificate(H)
        if not cert.passed:
            continue
        hits += 1
        e = eigenvalue_one_index(H.element(cert.g_index))
        out.expect(e.has_eigenvalue_one_at_i, f"reduction of {_label(G)}: g^{e.i} has no eigenvalue 1")
    out.notes.append(f"{hits} lifted groups with H^1_loc != 0 checked for an eigenvalue 1 at g^i")
    return out


def check_torsion_embedding(cfg: RunConfig, samples: int = 30) -> Outcome:
    """|H^1(G, M[p])| = |H^1(G, M)[p]| when g has no eigenvalue 1."""
    out = Outcome()
    for G in borel_lift_samples(samples):
        M = GaloisModule.natural(G)
        small = h1(G, M.torsion(1), cap=cfg.unknown_cap)
        full = h1(G, M, cap=cfg.unknown_cap)
        want = p_torsion_order(full.h1_invariants, G.spec.p)
        out.expect(small.h1_order == want, f"{_label(G)}: |H1(M[p])| = {small.h1_order}, |H1(M)[p]| = {want}")
    return out


# ---------------------------------------------------------------------------
# arithmetic checks
# ---------------------------------------------------------------------------

def check_euclid(cfg: RunConfig, primes=(5, 7, 11, 13), max_d: int = 4, max_N: int = 4) -> Outcome:
    out = Outcome()
    for p in primes:
        for d in range(1, max_d + 1):
            for N in range(1, max_N + 1):
                r = euclid_oracle(p, d, N)
                out.expect(r.ok, f"p={p} d={d} N={N}: max gcd {r.max_gcd} > {r.bound}")
    return out


def check_index_gcd(cfg: RunConfig, bound: int = 200, max_b: int = 8) -> Outcome:
    out = Outcome()
    for p in filter(is_prime, range(2, bound)):
        for b in range(1, max_b + 1):
            r = index_gcd_check(p, b)
            out.expect(r.ok, f"p={p} b={b}: gcd {r.value} > {b}")
    return out


def check_constant_c(cfg: RunConfig) -> Outcome:
    out = Outcome()
    for d, e in ((1, 1), (2, 9), (3, 81), (4, 625)):
        out.expect(constant_C(d) == 2 ** (e + 1), f"C({d}) != 2^{e + 1}")
    prev = 0
    for d in range(1, 9):
        e = exponent_ceiling(d)
        out.expect(e >= prev, f"ceil E({d}) = {e} below ceil E({d - 1}) = {prev}")
        out.expect(exponent_ceiling(d, max_prec=1 << 16) == e, f"ceil E({d}) changes with precision")
        prev = e
    return out


def monotonicity_inputs(count: int, seed: int = 0) -> list[tuple[int, int, int, int]]:
    """(d, p, lam, k) with normP = p^k straddling the threshold; d <= 2 keeps it exact."""
    rng = random.Random(seed)
    primes = [p for p in range(2, 400) if is_prime(p)]
    out = []
    for _ in range(count):
        d = rng.choice((1, 2))
        lam = rng.randint(2, 9)
        p = rng.choice(primes)
        bits = constant_C(d) * d * lam.bit_length()
        k = rng.randint(1, bits // max(1, p.bit_length() - 1) + 2)
        out.append((d, p, lam, k))
    return out


def check_norm_criterion(cfg: RunConfig, samples: int = 1000) -> Outcome:
    out = Outcome()
    for args, want in (((1, 29, 2, 29), True), ((1, 23, 2, 23), False), ((1, 5, 2, 25), False),
                       ((2, 11, 2, 121), False)):
        r = isogeny_criterion(IsogenyBoundInput(*args))
        out.expect(r.passed == want, f"{args}: pass={r.passed}, expected {want}")
    out.expect(isogeny_criterion(IsogenyBoundInput(1, 29, 2, 29)).threshold.exact == 25, "threshold(1, 2) != 25")
    for d, p, lam, k in monotonicity_inputs(samples):
        lo = isogeny_criterion(IsogenyBoundInput(d, p, lam, p ** k)).passed
        hi = isogeny_criterion(IsogenyBoundInput(d, p, lam, p ** (k + 1))).passed
        out.expect(not lo or hi, f"d={d} p={p} lam={lam}: passes at p^{k} but fails at p^{k + 1}")
    return out


CHECKS: dict[str, tuple[str, Callable[[RunConfig], Outcome]]] = {
    "oracle": ("linear-algebra H^1 and H^1_loc equal brute-force enumeration", check_oracle),
    "cyclic": ("H^1_loc = 0 for cyclic subgroups of GL_2(F_p)", check_cyclic),
    "scalar": ("a scalar lambda Id, lambda != 1, forces H^1 = 0", check_scalar),
    "borel": ("H^1_loc != 0 with det image F_p^* forces G = <N, g> in a Borel", check_borel),
    "split": ("H^1_loc of a direct sum of modules splits", check_split),
    "eigen-one": ("g^i has eigenvalue 1, gcd(i, p-1) <= d", check_eigen_one),
    "torsion-embedding": ("H^1(G, M[p]) has the size of H^1(G, M)[p]", check_torsion_embedding),
    "euclid": ("gcd(A p^a - B, C p^b - D) <= 2 N^ceil(E)", check_euclid),
    "index-gcd": ("gcd((p^b - 1)/(p - 1), p - 1) <= b", check_index_gcd),
    "constant-c": ("C(d) values and certified rounding", check_constant_c),
    "norm-criterion": ("norm threshold examples and monotonicity in N(P)", check_norm_criterion),
}


def run_check(check_id: str, cfg: RunConfig | None = None) -> CheckRecord:
    cfg = cfg or RunConfig()
    anchor, fn = CHECKS[check_id]
    start = time.perf_counter()
    out = fn(cfg)
    return CheckRecord(check_id, anchor, out.instances, out.failures, time.perf_counter() - start, out.notes)


def run_suite(only: list[str] | None = None, cfg: RunConfig | None = None,
              progress: Callable[[CheckRecord], None] | None = None) -> VerifySuiteReport:
    ids = list(CHECKS) if not only else only
    unknown = [c for c in ids if c not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    records = []
    for c in ids:
        rec = run_check(c, cfg)
        records.append(rec)
        if progress:
            progress(rec)
    return VerifySuiteReport(records)


__all__ = ["CHECKS", "CheckRecord", "VerifySuiteReport", "run_check", "run_suite", "Outcome",
           "check_oracle", "check_cyclic", "check_scalar", "check_borel", "check_split", "check_eigen_one",
           "check_torsion_embedding", "check_euclid", "check_index_gcd", "check_constant_c",
           "check_norm_criterion", "monotonicity_inputs"]
