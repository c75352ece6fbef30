"""Row-reduction kernels over GF(p).

Two interchangeable implementations of in-place reduced row echelon form
on int64 arrays with entries in [0, p):

* a generic vectorized numpy path (the reference semantics), and
* a numba-jitted loop kernel used when numba is importable.

RREF is canonical, so both paths must produce byte-identical arrays;
``tests/test_gf.py`` asserts agreement on randomized inputs.  Callers that
only need the rank may still read it from the return value and ignore the
reduced rows.
"""

from __future__ import annotations

import numpy as np


def _rref_in_place_py(a: np.ndarray, p: int) -> int:
    """Reduce ``a`` (int64, entries in [0, p)) to RREF in place; return rank.

    Pivot rows end up in rows ``0..rank-1``; remaining rows are zero.
    Leading entries are 1 and pivot columns are cleared above and below.
    """
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r, c:] = a[r, c:] * _inv_mod(lead, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        r += 1
    return r


def _inv_mod(x: int, p: int) -> int:
    """Inverse of x mod p by extended Euclid (x must be nonzero mod p)."""
    x %= p
    old_r, r = x, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_s % p


try:
    import numba

    @numba.njit(cache=True)
    def _rref_in_place_nb(a, p):  # pragma: no cover - exercised via dispatch
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv == -1:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            lead = a[r, c]
            if lead != 1:
                # Fermat inverse; p is prime and lead is nonzero mod p.
                inv = 1
                b = lead
                e = p - 2
                while e:
                    if e & 1:
                        inv = inv * b % p
                    b = b * b % p
                    e >>= 1
                for j in range(c, cols):
                    a[r, j] = a[r, j] * inv % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            r += 1
        return r

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _rref_in_place_nb = None
    HAVE_NUMBA = False


def rref_in_place(a: np.ndarray, p: int) -> int:
    """Dispatch to the fast kernel when available, else the numpy path."""
    if HAVE_NUMBA and a.flags.c_contiguous:
        return int(_rref_in_place_nb(a, p))
    return _rref_in_place_py(a, p)


def rank_of_rows(rows: np.ndarray, p: int) -> int:
    """Rank over GF(p) of a row matrix; does not modify the input."""
    if rows.size == 0:
        return 0
    return rref_in_place(np.array(rows, dtype=np.int64, order="C"), p)


def reduce_rows(rows: np.ndarray, p: int) -> np.ndarray:
    """Canonical RREF basis (zero rows stripped) of the row space of ``rows``."""
    a = np.array(rows, dtype=np.int64, order="C")
    if a.size == 0:
        return a[:0]
    r = rref_in_place(a, p)
    return a[:r]
