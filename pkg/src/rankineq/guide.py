"""Binary guide matrices and their rank-vs-characteristic profiles.

A guide is stored as an ordered list of column supports (1-based row
index sets) plus the divisor parameter t; a numeric 0/1 matrix is only
instantiated per field.  The admissibility profile is: rank m over
characteristics not dividing t, rank m-1 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParamOutOfRange, ParseError
from .gf import MatrixGF, PrimeField, rank
from .subspace import Subspace


@dataclass(frozen=True)
class GuideMatrix:
    """Binary n x m matrix given by per-column supports S_i and parameter t."""

    n_rows: int
    columns: tuple[frozenset, ...]
    t: int

    def __post_init__(self):
        if self.t < 2:
            raise ParamOutOfRange(f"t must be >= 2, got {self.t}")
        if len(self.columns) > self.n_rows:
            raise ParamOutOfRange(
                f"column count {len(self.columns)} exceeds row count {self.n_rows}"
            )
        object.__setattr__(
            self, "columns", tuple(frozenset(int(i) for i in s) for s in self.columns)
        )
        for j, s in enumerate(self.columns):
            if not s:
                raise ParamOutOfRange(f"column {j + 1} has empty support")
            if min(s) < 1 or max(s) > self.n_rows:
                raise ParamOutOfRange(
                    f"column {j + 1} support not within 1..{self.n_rows}"
                )

    @property
    def m_cols(self) -> int:
        return len(self.columns)

    def to_matrix(self, field: PrimeField) -> MatrixGF:
        """The n x m 0/1 matrix with columns e_{S_i} over the given field."""
        a = np.zeros((self.n_rows, self.m_cols), dtype=np.int64)
        for j, s in enumerate(self.columns):
            for i in s:
                a[i - 1, j] = 1
        return MatrixGF(field, a)

    def __repr__(self):
        cols = ",".join("{" + ",".join(map(str, sorted(s))) + "}" for s in self.columns)
        return f"GuideMatrix(n={self.n_rows}, t={self.t}, cols=[{cols}])"


@dataclass(frozen=True)
class ColumnClasses:
    """Partition of guide columns by support size.

    Indices are 0-based column positions.  ``b_prime`` holds the proper
    columns (1 < |S| < n), ``b_dprime`` the singleton columns, and
    ``b_tprime`` flags the presence of a full (all-ones) column.
    """

    b_prime: tuple[int, ...]
    b_dprime: tuple[int, ...]
    b_tprime: bool

    def proper_supports(self, g: GuideMatrix) -> list[frozenset]:
        """Distinct proper supports in first-occurrence order."""
        seen: list[frozenset] = []
        for j in self.b_prime:
            if g.columns[j] not in seen:
                seen.append(g.columns[j])
        return seen

    def singleton_coords(self, g: GuideMatrix) -> list[int]:
        """Distinct coordinates that carry a singleton column, sorted."""
        return sorted({next(iter(g.columns[j])) for j in self.b_dprime})


def classify_columns(g: GuideMatrix) -> ColumnClasses:
    prime, dprime, tprime = [], [], False
    for j, s in enumerate(g.columns):
        size = len(s)
        if size == 1:
            dprime.append(j)
        elif size == g.n_rows:
            tprime = True
        else:
            prime.append(j)
    return ColumnClasses(tuple(prime), tuple(dprime), tprime)


def admissible_t_range(n: int) -> range:
    """Divisor parameters t covered by the (n, t) family: 2..floor((n-1)/2)-1."""
    return range(2, (n - 1) // 2)


def build_example_guide(n: int, t: int) -> GuideMatrix:
    """Square M x M guide for the (n, t) family, M = n - t - 2.

    Columns 1..t+1 have support [M] - {i} (the all-ones-minus-e_i block);
    columns t+2..M are singletons {i}.
    """
    if n < 7:
        raise ParamOutOfRange(f"n must be >= 7, got {n}")
    if t not in admissible_t_range(n):
        lo, hi = 2, (n - 1) // 2 - 1
        raise ParamOutOfRange(f"t must satisfy {lo} <= t <= {hi} for n={n}, got {t}")
    m = n - t - 2
    full = frozenset(range(1, m + 1))
    cols = [full - {i} for i in range(1, t + 2)]
    cols += [frozenset({i}) for i in range(t + 2, m + 1)]
    return GuideMatrix(n_rows=m, columns=tuple(cols), t=t)


def rank_over(g: GuideMatrix, p: int) -> int:
    """Rank of the guide's 0/1 matrix over GF(p)."""
    return rank(g.to_matrix(PrimeField(p)))


@dataclass(frozen=True)
class PrimeRankCheck:
    prime: int
    expected: int
    actual: int
    match: bool


@dataclass(frozen=True)
class RankProfileReport:
    guide_rows: int
    guide_cols: int
    t: int
    checks: tuple[PrimeRankCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.match for c in self.checks)

    def to_obj(self) -> dict:
        return {
            "n": self.guide_rows,
            "m": self.guide_cols,
            "t": self.t,
            "passed": self.passed,
            "checks": [
                {
                    "prime": c.prime,
                    "expected": c.expected,
                    "actual": c.actual,
                    "match": c.match,
                }
                for c in self.checks
            ],
        }


def check_rank_profile(g: GuideMatrix, primes) -> RankProfileReport:
    """Admissibility gate: rank must be m-1 when p | t, else m.

    Mismatches are reported, never raised.
    """
    m = g.m_cols
    checks = []
    for p in primes:
        expected = m - 1 if g.t % p == 0 else m
        actual = rank_over(g, p)
        checks.append(PrimeRankCheck(p, expected, actual, expected == actual))
    return RankProfileReport(g.n_rows, m, g.t, tuple(checks))


def projection_rank_identity(g: GuideMatrix, p: int) -> tuple[int, int, bool]:
    """Rank separation through projection semantics.

    Materializes the projections of the all-ones line onto each column's
    coordinate block (these are exactly the support vectors), spans them,
    and compares against the divisibility prediction (m-1 if p | t else m).
    Returns (lhs, rhs, match).
    """
    field = PrimeField(p)
    n = g.n_rows
    projected = []
    for s in g.columns:
        vec = [1 if i in s else 0 for i in range(1, n + 1)]
        projected.append(vec)
    spanned = Subspace.span(projected, field, n)
    lhs = spanned.dim
    rhs = g.m_cols - 1 if g.t % p == 0 else g.m_cols
    return lhs, rhs, lhs == rhs


# -- text format ----------------------------------------------------------
#
# First line: "n m t"; then m lines, each a 0/1 string of length n giving
# one column (character i = row i membership).


def parse_guide_text(text: str) -> GuideMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty guide file", "line 1")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("header must be 'n m t'", "line 1")
    try:
        n, m, t = (int(x) for x in head)
    except ValueError:
        raise ParseError("header fields must be integers", "line 1") from None
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} column lines, found {len(lines) - 1}", "body")
    cols = []
    for j, ln in enumerate(lines[1:], start=2):
        if len(ln) != n:
            raise ParseError(f"column must have {n} digits, found {len(ln)}", f"line {j}")
        if set(ln) - {"0", "1"}:
            raise ParseError("entries must be 0 or 1", f"line {j}")
        cols.append(frozenset(i + 1 for i, ch in enumerate(ln) if ch == "1"))
    try:
        return GuideMatrix(n_rows=n, columns=tuple(cols), t=t)
    except ParamOutOfRange as e:
        raise ParseError(str(e), "body") from None


def format_guide_text(g: GuideMatrix) -> str:
    lines = [f"{g.n_rows} {g.m_cols} {g.t}"]
    for s in g.columns:
        lines.append("".join("1" if i in s else "0" for i in range(1, g.n_rows + 1)))
    return "\n".join(lines) + "\n"


def load_guide(path) -> GuideMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_guide_text(fh.read())
