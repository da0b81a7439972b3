"""Explicit numeric bounds: the constant C(d), the gcd bound, and the norm criterion.

C(d) = 2^(E + 1) with E = (d + 1)^(2 log2 d).  E is an integer exactly when
d or d + 1 is a power of two; then it is computed in integers.  Otherwise E
is irrational and only its ceiling is used, certified with interval
arithmetic.  Rounding up can only enlarge C, which makes the norm
inequality harder to satisfy and so never turns an unsafe verdict into a
safe one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import mpmath

from . import _kernels
from .errors import CapExceeded, InvalidNorm
from .ring import is_prime

MAX_EXPONENT_BITS = 1 << 24
EXACT_THRESHOLD_BITS = 1 << 22


def _log2_exact(x: int) -> int | None:
    return x.bit_length() - 1 if x > 0 and x & (x - 1) == 0 else None


def exponent_exact(d: int) -> int | None:
    """E(d) as an integer when d or d + 1 is a power of two, else None."""
    if d < 1:
        raise ValueError("d must be >= 1")
    k = _log2_exact(d)
    if k is not None:
        # (d+1)^(2k)
        return (d + 1) ** (2 * k)
    j = _log2_exact(d + 1)
    if j is not None:
        # 2^(j * 2 log2 d) = d^(2j)
        return d ** (2 * j)
    return None


def exponent_interval(d: int, prec: int = 64):
    """Interval enclosure of E(d) at the given working precision (bits)."""
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = prec
    try:
        d_iv = iv.mpf(d)
        return iv.exp(2 * iv.log(d_iv) * iv.log(d_iv + 1) / iv.log(2))
    finally:
        iv.prec = saved


def exponent_ceiling(d: int, max_prec: int = 1 << 14) -> int:
    """The integer ceiling of E(d), exact or certified by interval refinement."""
    exact = exponent_exact(d)
    if exact is not None:
        return exact
    prec = 64
    while prec <= max_prec:
        E = exponent_interval(d, prec)
        lo, hi = mpmath.mpf(E.a), mpmath.mpf(E.b)
        flo = int(mpmath.floor(lo))
        if flo == int(mpmath.floor(hi)) and lo > flo:
            return flo + 1
        prec *= 2
    raise ArithmeticError(f"could not certify the ceiling of E({d})")


def constant_C(d: int, max_bits: int = MAX_EXPONENT_BITS) -> int:
    """C(d) = 2^(ceil(E) + 1)."""
    e = exponent_ceiling(d)
    if e + 1 > max_bits:
        raise CapExceeded(f"C({d}) has {e + 1} bits, above the cap {max_bits}")
    return 1 << (e + 1)


def euclid_bound(d: int, N: int, max_bits: int = MAX_EXPONENT_BITS) -> int:
    """2 N^ceil(E(d))."""
    e = exponent_ceiling(d)
    if e * N.bit_length() > max_bits:
        raise CapExceeded(f"bound for d={d}, N={N} exceeds {max_bits} bits")
    return 2 * N ** e


@dataclass
class EuclidInstance:
    p: int
    d: int
    N: int
    A: int
    B: int
    C: int
    D: int
    a: int
    b: int

    @property
    def value(self) -> int:
        return gcd(self.A * self.p ** self.a - self.B, self.C * self.p ** self.b - self.D)


@dataclass
class EuclidResult:
    p: int
    d: int
    N: int
    max_gcd: int
    instance: EuclidInstance
    bound: int
    exponents: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.max_gcd <= self.bound

    def to_dict(self) -> dict:
        i = self.instance
        return {"p": self.p, "d": self.d, "N": self.N, "max_gcd": self.max_gcd, "bound": self.bound,
                "instance": [i.A, i.B, i.C, i.D, i.a, i.b], "ok": self.ok}


def euclid_oracle(p: int, d: int, N: int, inclusive: bool = False, use_numba=None) -> EuclidResult:
    """Largest gcd(A p^a - B, C p^b - D) over |A|, |B|, |C|, |D| < N.

    Exponents run over 0 <= a, b < d, or 0 <= a, b <= d with ``inclusive``.
    Pairs where either argument vanishes are skipped; ties go to the
    lexicographically smallest (A, B, C, D, a, b).
    """
    top = d if inclusive else d - 1
    best, inst = _kernels.euclid_grid_max(p, N, 0, top, use_numba=use_numba)
    return EuclidResult(p, d, N, best, EuclidInstance(p, d, N, *inst), euclid_bound(d, N), (0, top))


@dataclass
class IndexGcd:
    p: int
    b: int
    value: int

    @property
    def ok(self) -> bool:
        return self.value <= self.b


def index_gcd_check(p: int, b: int) -> IndexGcd:
    """gcd((p^b - 1)/(p - 1), p - 1), to be compared against b."""
    return IndexGcd(p, b, gcd((p ** b - 1) // (p - 1), p - 1))


# ---------------------------------------------------------------------------
# norm criterion
# ---------------------------------------------------------------------------

ASSERTED_CONDITIONS = {
    1: "k meets Q(zeta_p) only in Q",
    2: "p is a good prime",
    4: "determinant is the cyclotomic character at every place over p",
    5: "p is unramified in E",
    6: "good reduction at a place L not above p",
}


@dataclass
class IsogenyBoundInput:
    d: int
    p: int
    lam: int
    norm_p: int
    asserted: dict = field(default_factory=lambda: {k: True for k in ASSERTED_CONDITIONS})
    principally_polarized: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.lam < 2:
            raise ValueError("the norm lambda of L must be >= 2")
        if not _is_power_of(self.norm_p, self.p):
            raise InvalidNorm(f"{self.norm_p} is not a power of {self.p}")


def _is_power_of(x: int, p: int) -> bool:
    if x < p:
        return False
    while x % p == 0:
        x //= p
    return x == 1


@dataclass
class Threshold:
    """(1 + lam^(C/2))^(2d), exactly when small enough, else as a certified lower bound on log2."""

    exact: int | None
    log2_lower: int

    def exceeded_by(self, x: int) -> bool:
        if self.exact is not None:
            return x > self.exact
        if x.bit_length() <= self.log2_lower:
            return False
        raise ArithmeticError("comparison needs the exact threshold")


def isogeny_threshold(d: int, lam: int, C: int | None = None, exact_bits: int = EXACT_THRESHOLD_BITS) -> Threshold:
    if C is None:
        C = constant_C(d)
    if C % 2:
        raise ValueError("C must be even")
    # lam^(C d) < threshold, so C d log2(lam) is a lower bound on its log2
    lower = C * d * (lam.bit_length() - 1)
    size = (C // 2) * lam.bit_length() * 2 * d
    if size <= exact_bits:
        return Threshold((1 + lam ** (C // 2)) ** (2 * d), lower)
    return Threshold(None, lower)


@dataclass
class ConditionVerdict:
    id: int
    status: str
    detail: str

    def to_dict(self) -> dict:
        return {"id": self.id, "status": self.status, "detail": self.detail}


@dataclass
class CriterionReport:
    input: IsogenyBoundInput
    C: int
    threshold: Threshold
    conditions: list[ConditionVerdict]

    @property
    def passed(self) -> bool:
        return all(c.status in ("pass", "asserted") for c in self.conditions)

    @property
    def verdict(self) -> str:
        if not self.passed:
            bad = [str(c.id) for c in self.conditions if c.status == "fail"]
            return f"criterion not met (failing conditions: {', '.join(bad)})"
        text = (f"H^1_loc vanishes for every n: local-global divisibility by every power of "
                f"{self.input.p} holds")
        if self.input.principally_polarized:
            text += f"; Sha is {self.input.p}-divisible in H^1(k, A)"
        return text

    def to_dict(self) -> dict:
        t = self.threshold
        return {"d": self.input.d, "p": self.input.p, "lambda": self.input.lam, "normP": self.input.norm_p,
                "C": str(self.C), "threshold": None if t.exact is None else str(t.exact),
                "threshold_log2_lower": t.log2_lower,
                "conditions": [c.to_dict() for c in self.conditions],
                "pass": self.passed, "verdict": self.verdict}


def isogeny_criterion(inp: IsogenyBoundInput) -> CriterionReport:
    C = constant_C(inp.d)
    thr = isogeny_threshold(inp.d, inp.lam, C)
    conds = []
    for k in range(1, 8):
        if k == 3:
            ok = inp.p >= 3 * inp.d + 1
            conds.append(ConditionVerdict(3, "pass" if ok else "fail", f"p = {inp.p} vs 3d+1 = {3 * inp.d + 1}"))
        elif k == 7:
            ok = thr.exceeded_by(inp.norm_p)
            rhs = str(thr.exact) if thr.exact is not None else f"> 2^{thr.log2_lower}"
            conds.append(ConditionVerdict(7, "pass" if ok else "fail", f"N(P) = {inp.norm_p} vs threshold {rhs}"))
        else:
            held = bool(inp.asserted.get(k, False))
            conds.append(ConditionVerdict(k, "asserted" if held else "fail",
                                          ASSERTED_CONDITIONS[k] + ("" if held else ", not asserted")))
    return CriterionReport(inp, C, thr, conds)


def trace_norm_exploration(values, p: int, enabled: bool = False):
    """Which user-supplied integers N(1 + lam^c - a_L) are divisible by p.  Off unless enabled."""
    if not enabled:
        return None
    return [int(v) % p == 0 for v in values]


__all__ = [
    "constant_C", "exponent_ceiling", "exponent_exact", "exponent_interval", "euclid_bound", "euclid_oracle",
    "EuclidInstance", "EuclidResult", "index_gcd_check", "IndexGcd", "isogeny_threshold", "Threshold",
    "isogeny_criterion", "IsogenyBoundInput", "CriterionReport", "ConditionVerdict", "ASSERTED_CONDITIONS",
    "trace_norm_exploration",
]
