"""Inner loops: echelon forms over Z/p^n, index-table closures, gcd grid scans.

Every kernel exists twice, once compiled with numba and once written against
plain numpy.  Both return identical arrays.  The compiled path is used when
numba imports cleanly and ``LOCOH_DISABLE_NUMBA`` is unset (or ``0``).

All arithmetic is on int64 with moduli below 2**31, so a product of two
reduced residues never overflows before it is reduced.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None


def _env_disabled():
    return os.environ.get("LOCOH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def _maybe_njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


# ---------------------------------------------------------------------------
# Howell form over Z/p^n (scalar loops, compiled)
# ---------------------------------------------------------------------------

def _inv_mod_loops(u, m):
    a, b = u % m, m
    x0, x1 = 1, 0
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
    return x0 % m


def _howell_loops(A, p, n):
    m = 1
    for _ in range(n):
        m *= p
    rows, cols = A.shape
    W = np.zeros((rows + cols, cols), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            W[i, j] = A[i, j] % m
    nrows = rows
    pivcols = np.empty(cols, dtype=np.int64)
    pivvals = np.empty(cols, dtype=np.int64)
    r = 0
    for j in range(cols):
        best = -1
        bestv = n
        for i in range(r, nrows):
            x = W[i, j]
            if x != 0:
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v < bestv:
                    bestv = v
                    best = i
                    if v == 0:
                        break
        if best < 0:
            continue
        if best != r:
            for k in range(cols):
                t = W[r, k]
                W[r, k] = W[best, k]
                W[best, k] = t
        pv = 1
        for _ in range(bestv):
            pv *= p
        uinv = _inv_mod(W[r, j] // pv, m)
        for k in range(j, cols):
            W[r, k] = (W[r, k] * uinv) % m
        for i in range(r + 1, nrows):
            x = W[i, j]
            if x != 0:
                f = x // pv
                for k in range(j, cols):
                    W[i, k] = (W[i, k] - f * W[r, k]) % m
        if bestv > 0:
            s = m // pv
            nz = False
            for k in range(j + 1, cols):
                y = (W[r, k] * s) % m
                W[nrows, k] = y
                if y != 0:
                    nz = True
            if nz:
                nrows += 1
            else:
                for k in range(j + 1, cols):
                    W[nrows, k] = 0
        pivcols[r] = j
        pivvals[r] = bestv
        r += 1
    for k in range(r):
        j = pivcols[k]
        pv = 1
        for _ in range(pivvals[k]):
            pv *= p
        for i in range(k):
            x = W[i, j]
            if x >= pv:
                f = x // pv
                for c in range(j, cols):
                    W[i, c] = (W[i, c] - f * W[k, c]) % m
    return W[:r].copy(), pivcols[:r].copy(), pivvals[:r].copy()


_inv_mod = _maybe_njit(_inv_mod_loops)
_howell_numba = _maybe_njit(_howell_loops)


# ---------------------------------------------------------------------------
# Howell form, numpy fallback (vectorised over rows)
# ---------------------------------------------------------------------------

def _valuations(x, p, n):
    v = np.zeros(x.shape, dtype=np.int64)
    pk = 1
    for _ in range(n - 1):
        pk *= p
        v += (x % pk == 0)
    return v


def _howell_numpy(A, p, n):
    m = p ** n
    rows, cols = A.shape
    W = np.zeros((rows + cols, cols), dtype=np.int64)
    W[:rows] = np.asarray(A, dtype=np.int64) % m
    nrows = rows
    pivcols, pivvals = [], []
    r = 0
    for j in range(cols):
        nz = np.flatnonzero(W[r:nrows, j])
        if nz.size == 0:
            continue
        vals = _valuations(W[r + nz, j], p, n)
        k = int(np.argmin(vals))
        best, bestv = r + int(nz[k]), int(vals[k])
        if best != r:
            W[[r, best]] = W[[best, r]]
        pv = p ** bestv
        uinv = pow(int(W[r, j]) // pv, -1, m)
        W[r, j:] = W[r, j:] * uinv % m
        below = W[r + 1:nrows]
        f = below[:, j] // pv
        hit = np.flatnonzero(f)
        if hit.size:
            below[hit, j:] = (below[hit, j:] - f[hit, None] * W[r, j:]) % m
        if bestv > 0:
            ann = W[r, j + 1:] * (m // pv) % m
            if ann.any():
                W[nrows, j + 1:] = ann
                nrows += 1
        pivcols.append(j)
        pivvals.append(bestv)
        r += 1
    for k in range(r):
        j, pv = pivcols[k], p ** pivvals[k]
        f = W[:k, j] // pv
        hit = np.flatnonzero(f)
        if hit.size:
            W[hit, j:] = (W[hit, j:] - f[hit, None] * W[k, j:]) % m
    return (W[:r].copy(), np.array(pivcols, dtype=np.int64),
            np.array(pivvals, dtype=np.int64))


# ---------------------------------------------------------------------------
# Subgroup closure on a multiplication table
# ---------------------------------------------------------------------------

def _closure_loops(mul, gens, identity):
    N = mul.shape[0]
    seen = np.zeros(N, dtype=np.bool_)
    queue = np.empty(N, dtype=np.int64)
    queue[0] = identity
    seen[identity] = True
    head, tail = 0, 1
    while head < tail:
        g = queue[head]
        head += 1
        for s in gens:
            h = mul[g, s]
            if not seen[h]:
                seen[h] = True
                queue[tail] = h
                tail += 1
    out = queue[:tail].copy()
    out.sort()
    return out


_closure_numba = _maybe_njit(_closure_loops)


def _closure_numpy(mul, gens, identity):
    seen = np.zeros(mul.shape[0], dtype=bool)
    seen[identity] = True
    frontier = np.array([identity], dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    while frontier.size:
        nxt = np.unique(mul[np.ix_(frontier, gens)].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return np.flatnonzero(seen).astype(np.int64)


# ---------------------------------------------------------------------------
# gcd(A p^a - B, C p^b - D) grid maximum
# ---------------------------------------------------------------------------

def _gcd_loops(x, y):
    while y != 0:
        x, y = y, x % y
    return x


_gcd_int = _maybe_njit(_gcd_loops)


def _euclid_loops(p, N, e_lo, e_hi):
    powers = np.empty(e_hi + 1, dtype=np.int64)
    powers[0] = 1
    for e in range(1, e_hi + 1):
        powers[e] = powers[e - 1] * p
    best = 0
    inst = np.zeros(6, dtype=np.int64)
    for A in range(-N + 1, N):
        for B in range(-N + 1, N):
            for C in range(-N + 1, N):
                for D in range(-N + 1, N):
                    for a in range(e_lo, e_hi + 1):
                        x = A * powers[a] - B
                        if x == 0:
                            continue
                        for b in range(e_lo, e_hi + 1):
                            y = C * powers[b] - D
                            if y == 0:
                                continue
                            g = _gcd_int(abs(x), abs(y))
                            if g > best:
                                best = g
                                inst[0] = A
                                inst[1] = B
                                inst[2] = C
                                inst[3] = D
                                inst[4] = a
                                inst[5] = b
    return best, inst


_euclid_numba = _maybe_njit(_euclid_loops)


def _euclid_numpy(p, N, e_lo, e_hi):
    coef = np.arange(-N + 1, N, dtype=np.int64)
    exps = np.arange(e_lo, e_hi + 1, dtype=np.int64)
    A, B, C, D, a, b = np.meshgrid(coef, coef, coef, coef, exps, exps, indexing="ij")
    x = A * p ** a - B
    y = C * p ** b - D
    g = np.gcd(x, y)
    g[(x == 0) | (y == 0)] = 0
    flat = g.ravel()
    k = int(np.argmax(flat))
    inst = np.array([arr.ravel()[k] for arr in (A, B, C, D, a, b)], dtype=np.int64)
    return int(flat[k]), inst


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------

def howell(A, p, n, use_numba=None):
    """Canonical Howell basis of the row span of ``A`` over Z/p^n.

    Returns ``(rows, pivot_columns, pivot_valuations)``; each pivot entry is
    exactly ``p**valuation`` and entries above a pivot are reduced below it.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    if A.shape[1] == 0:
        return (np.zeros((0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64),
                np.zeros(0, dtype=np.int64))
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _howell_numba(A, int(p), int(n))
    return _howell_numpy(A, int(p), int(n))


def closure_indices(mul, gens, identity, use_numba=None):
    """Sorted indices of the subgroup generated by ``gens`` in a table group."""
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _closure_numba(mul, gens, int(identity))
    return _closure_numpy(mul, gens, int(identity))


def euclid_grid_max(p, N, e_lo, e_hi, use_numba=None):
    """Max of gcd(A p^a - B, C p^b - D) over |A|,|B|,|C|,|D| < N and a, b in [e_lo, e_hi].

    Instances where either argument vanishes are skipped.  Ties resolve to the
    lexicographically smallest (A, B, C, D, a, b).
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        best, inst = _euclid_numba(int(p), int(N), int(e_lo), int(e_hi))
    else:
        best, inst = _euclid_numpy(int(p), int(N), int(e_lo), int(e_hi))
    return int(best), tuple(int(v) for v in inst)


__all__ = ["HAVE_NUMBA", "USE_NUMBA", "howell", "closure_indices", "euclid_grid_max"]
