"""Shared test utilities: small matrix builders and independent oracles."""

from __future__ import annotations

import numpy as np

from rankineq.gf import MatrixGF, PrimeField, rank, rref, stack_rows


def j_minus_i(field: PrimeField, k: int) -> MatrixGF:
    """The all-ones matrix minus the identity, J_k - I_k."""
    return MatrixGF(field, np.ones((k, k), dtype=np.int64) - np.eye(k, dtype=np.int64))


def random_matrix(rng, field: PrimeField, rows: int, cols: int) -> MatrixGF:
    return MatrixGF(field, rng.integers(0, field.p, size=(rows, cols)))


def nullspace_basis(m: MatrixGF) -> list[list[int]]:
    """Kernel basis of m (solutions of m @ x = 0) by free-variable back-fill."""
    reduced, pivots, r = rref(m)
    p = m.field.p
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = (-int(reduced.array[row, f])) % p
        basis.append(v)
    return basis


def contains_vector(basis: MatrixGF, vec) -> bool:
    """True iff vec lies in the row space of basis (rows independent)."""
    vec_m = MatrixGF(basis.field, [list(vec)])
    return rank(stack_rows([basis, vec_m])) == basis.rows


def intersection_dim_oracle(bu: MatrixGF, bw: MatrixGF) -> int:
    """dim(U and W) via the kernel method, independent of entropy identities.

    Solves x*BU - y*BW = 0, maps each kernel vector to the intersection
    vector x*BU (asserting membership in both spaces), then spans.
    """
    from rankineq.subspace import Subspace

    field = bu.field
    p = field.p
    d = bu.cols
    r, s = bu.rows, bw.rows
    if r == 0 or s == 0:
        return 0
    stacked = np.concatenate([bu.array, (-bw.array) % p], axis=0)  # (r+s) x d
    kernel = nullspace_basis(MatrixGF(field, stacked.T))  # solves stacked^T @ z = 0
    vectors = []
    for z in kernel:
        x = np.array(z[:r], dtype=np.int64)
        v = x @ bu.array % p
        assert contains_vector(bu, v)
        assert contains_vector(bw, v)
        vectors.append([int(t) for t in v])
    return Subspace.span(vectors, field, d).dim
