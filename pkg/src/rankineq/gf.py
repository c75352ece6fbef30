"""Exact dense linear algebra over prime fields GF(p).

Matrices store int64 entries reduced mod p; all operations are exact.
Instances are immutable after construction (the backing numpy array is
marked read-only), so they are safe to share across threads.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonSquare
from .kernels import _inv_mod, rref_in_place


class PrimeField:
    """GF(p) for a prime modulus p, checked at construction.

    Instances compare and hash by modulus.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = int(p)

    def inv(self, x: int) -> int:
        """Multiplicative inverse of x mod p (extended Euclid)."""
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return _inv_mod(x, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def _is_prime(p: int) -> bool:
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class MatrixGF:
    """Dense matrix over a prime field, entries reduced into [0, p).

    Parameters
    ----------
    field : PrimeField
    entries : array-like of shape (rows, cols); reduced mod p on entry.
    """

    __slots__ = ("field", "array")

    def __init__(self, field: PrimeField, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            if a.size == 0:
                a = a.reshape(0, 0)
            else:
                raise DimensionMismatch(f"expected a 2-D array, got shape {a.shape}")
        a %= field.p
        a.flags.writeable = False
        self.field = field
        self.array = a

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "MatrixGF":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "MatrixGF":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field, self.array.T)

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.array]

    def __eq__(self, other):
        return (
            isinstance(other, MatrixGF)
            and other.field == self.field
            and other.array.shape == self.array.shape
            and bool(np.array_equal(other.array, self.array))
        )

    def __hash__(self):
        return hash((self.field.p, self.array.shape, self.array.tobytes()))

    def __repr__(self):
        return f"MatrixGF({self.field!r}, {self.array.tolist()!r})"


def rref(m: MatrixGF) -> tuple[MatrixGF, list[int], int]:
    """Reduced row echelon form.

    Returns ``(reduced, pivot_cols, rank)``.  The reduced matrix keeps its
    original row count (zero rows trail after the pivot rows); the row
    space is preserved and the form is canonical: leading entries are 1
    and pivot columns are cleared above and below.
    """
    a = np.ascontiguousarray(m.array, dtype=np.int64).copy()
    if a.size == 0:
        return MatrixGF(m.field, a), [], 0
    r = rref_in_place(a, m.field.p)
    pivots = [int(np.nonzero(a[i])[0][0]) for i in range(r)]
    return MatrixGF(m.field, a), pivots, r


def rank(m: MatrixGF) -> int:
    """Rank of m over its field."""
    a = np.ascontiguousarray(m.array, dtype=np.int64).copy()
    if a.size == 0:
        return 0
    return rref_in_place(a, m.field.p)


def det_mod(m: MatrixGF) -> int:
    """Determinant mod p by elimination with row-swap sign tracking.

    Raises NonSquare for non-square input.  Independent of the RREF path:
    no row normalization, pivot product accumulated directly.
    """
    if m.rows != m.cols:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    p = m.field.p
    n = m.rows
    if n == 0:
        return 1 % p
    a = m.array.copy()
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det % p
        lead = int(a[c, c])
        det = det * lead % p
        inv = m.field.inv(lead)
        for i in range(c + 1, n):
            if a[i, c] % p:
                f = int(a[i, c]) * inv % p
                a[i, c:] = (a[i, c:] - f * a[c, c:]) % p
    return det


def stack_rows(ms, field: PrimeField | None = None, cols: int | None = None) -> MatrixGF:
    """Vertical concatenation of matrices, in input order.

    All inputs must share field and column count.  An empty input list
    needs explicit ``field`` and ``cols`` (yielding a 0 x cols matrix).
    """
    ms = list(ms)
    if not ms:
        if field is None or cols is None:
            raise DimensionMismatch("empty stack needs explicit field and cols")
        return MatrixGF(field, np.zeros((0, cols), dtype=np.int64))
    f = ms[0].field
    w = ms[0].cols
    for m in ms[1:]:
        if m.field != f:
            raise DimensionMismatch("stacked matrices must share a field")
        if m.cols != w:
            raise DimensionMismatch(
                f"stacked matrices must share width: {m.cols} != {w}"
            )
    if field is not None and field != f:
        raise DimensionMismatch("declared field differs from inputs")
    if cols is not None and cols != w:
        raise DimensionMismatch("declared width differs from inputs")
    return MatrixGF(f, np.concatenate([m.array for m in ms], axis=0))
