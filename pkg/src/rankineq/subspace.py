"""Subspaces of GF(p)^d and their entropies.

A subspace is held as the canonical RREF basis of its row space (zero
rows stripped), so two equal subspaces always compare equal.  The joint
entropy of a set of named subspaces is the dimension of their sum; all
derived quantities (conditional entropy, mutual information) reduce to
joint entropies, never to materialized intersections.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch, UnknownVariable
from .gf import MatrixGF, PrimeField
from .kernels import rank_of_rows, reduce_rows


class Subspace:
    """Row space of a matrix over GF(p)^d, in canonical reduced form."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: PrimeField, ambient_dim: int, basis: MatrixGF):
        if basis.cols != ambient_dim:
            raise DimensionMismatch(
                f"basis width {basis.cols} != ambient dim {ambient_dim}"
            )
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = basis

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        """The zero space O, represented by a 0-row basis."""
        return cls(field, ambient_dim, MatrixGF.zeros(field, 0, ambient_dim))

    @classmethod
    def span(cls, vectors: Iterable, field: PrimeField, ambient_dim: int) -> "Subspace":
        """Span of coordinate vectors; an empty list gives the zero space."""
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch(
                    f"vector length {len(v)} != ambient dim {ambient_dim}"
                )
        if not vecs:
            return cls.zero(field, ambient_dim)
        rows = np.array(vecs, dtype=np.int64) % field.p
        return cls(field, ambient_dim, MatrixGF(field, reduce_rows(rows, field.p)))

    @classmethod
    def from_matrix(cls, m: MatrixGF) -> "Subspace":
        """Row space of an arbitrary matrix, canonicalized."""
        return cls(m.field, m.cols, MatrixGF(m.field, reduce_rows(m.array, m.field.p)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def basis_rows(self) -> list[list[int]]:
        return self.basis.to_lists()

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.field.p, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.field!r})"


def subspace_span(vectors: Iterable, field: PrimeField, ambient_dim: int) -> Subspace:
    return Subspace.span(vectors, field, ambient_dim)


class Assignment:
    """Named subspaces of a common GF(p)^d, the linear random variables.

    Immutable; ``vars`` preserves insertion order.
    """

    __slots__ = ("field", "ambient_dim", "vars")

    def __init__(self, field: PrimeField, ambient_dim: int, variables: Mapping[str, Subspace]):
        for name, sub in variables.items():
            if sub.field != field or sub.ambient_dim != ambient_dim:
                raise DimensionMismatch(
                    f"variable {name!r} does not live in GF({field.p})^{ambient_dim}"
                )
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.vars = dict(variables)

    def subspace(self, name: str) -> Subspace:
        try:
            return self.vars[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not assigned") from None

    def with_variable(self, name: str, sub: Subspace) -> "Assignment":
        new = dict(self.vars)
        new[name] = sub
        return Assignment(self.field, self.ambient_dim, new)

    def names(self) -> list[str]:
        return list(self.vars)

    def __repr__(self):
        return f"Assignment({self.field!r}, d={self.ambient_dim}, vars={list(self.vars)})"


def joint_entropy(a: Assignment, varset: Iterable[str]) -> int:
    """dim of the sum of the named subspaces; 0 for the empty set."""
    names = list(varset)
    if not names:
        return 0
    arrays = [a.subspace(n).basis.array for n in names]
    rows = np.concatenate(arrays, axis=0) if len(arrays) > 1 else arrays[0]
    return rank_of_rows(rows, a.field.p)


def cond_entropy(a: Assignment, s: Iterable[str], t: Iterable[str]) -> int:
    """H(S|T) = H(S u T) - H(T)."""
    s, t = set(s), set(t)
    return joint_entropy(a, s | t) - joint_entropy(a, t)


def mutual_info(a: Assignment, s: Iterable[str], t: Iterable[str]) -> int:
    """I(S;T) = H(S) + H(T) - H(S u T)."""
    s, t = set(s), set(t)
    return joint_entropy(a, s) + joint_entropy(a, t) - joint_entropy(a, s | t)


def cond_mutual_info(
    a: Assignment, s: Iterable[str], t: Iterable[str], u: Iterable[str]
) -> int:
    """I(S;T|U) = H(S u U) + H(T u U) - H(S u T u U) - H(U)."""
    s, t, u = set(s), set(t), set(u)
    return (
        joint_entropy(a, s | u)
        + joint_entropy(a, t | u)
        - joint_entropy(a, s | t | u)
        - joint_entropy(a, u)
    )
