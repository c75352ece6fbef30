"""Empirical verification and refutation of tagged inequalities.

Verification samples random subspace assignments (or exhausts all of
them at small scale) and records every negative slack; refutation tries
the canonical counterexample first and falls back to random search.

Determinism contract: every trial draws from an RNG stream derived from
(seed, trial index), so results are identical regardless of how trials
are chunked across workers.  Reports serialize canonically with timing
excluded, which makes the parallel/serial byte-equality check possible.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import CapExceeded, UnknownVariable
from .expr import RankExpr, TaggedInequality
from .generate import _a, _b
from .gf import MatrixGF, PrimeField
from .guide import GuideMatrix, classify_columns
from .kernels import reduce_rows, rref_in_place
from .subspace import Assignment, Subspace

DEFAULT_SEED = 1729
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SamplingPolicy:
    """How to sample assignments: ambient dim, dim bound, count, seed."""

    ambient_dim: int
    max_subspace_dim: int
    trials: int
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.ambient_dim < 0 or not 0 <= self.max_subspace_dim <= self.ambient_dim:
            raise ValueError("need 0 <= max_subspace_dim <= ambient_dim")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    def to_obj(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "max_subspace_dim": self.max_subspace_dim,
            "trials": self.trials,
            "seed": self.seed,
        }


def _frac_obj(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def witness_digest(witness: dict) -> str:
    text = json.dumps(witness, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def assignment_witness(a: Assignment) -> dict:
    """Serializable snapshot of an assignment (reloadable, digestible)."""
    return {
        "field": a.field.p,
        "ambient_dim": a.ambient_dim,
        "variables": {name: sub.basis_rows() for name, sub in a.vars.items()},
    }


def load_witness(witness: dict) -> Assignment:
    """Rebuild an assignment from its witness snapshot."""
    field = PrimeField(int(witness["field"]))
    d = int(witness["ambient_dim"])
    variables = {
        name: Subspace.span(rows, field, d)
        for name, rows in witness["variables"].items()
    }
    return Assignment(field, d, variables)


@dataclass(frozen=True)
class Violation:
    trial: int
    slack: Fraction
    witness: dict
    digest: str

    def to_obj(self) -> dict:
        return {
            "trial": self.trial,
            "slack": _frac_obj(self.slack),
            "digest": self.digest,
            "witness": self.witness,
        }


@dataclass
class TrialReport:
    """Outcome of a verification campaign."""

    trials: int
    violations: list[Violation]
    min_slack: Fraction | None
    elapsed: float
    seed: int
    config: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_obj(self, include_elapsed: bool = True) -> dict:
        obj = {
            "trials": self.trials,
            "violations": [v.to_obj() for v in self.violations],
            "violation_count": len(self.violations),
            "min_slack": None if self.min_slack is None else _frac_obj(self.min_slack),
            "seed": self.seed,
            "config": self.config,
        }
        if include_elapsed:
            obj["elapsed_seconds"] = self.elapsed
        return obj

    def canonical_json(self) -> str:
        """Serialization with timing excluded; byte-stable across reruns."""
        return json.dumps(self.to_obj(include_elapsed=False), sort_keys=True)

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_obj(), indent=indent)


# -- assignment sampling ------------------------------------------------------


def random_subspace(field: PrimeField, d: int, max_dim: int, rng) -> Subspace:
    """Random subspace: target dim uniform in 0..max_dim, spanned vectors.

    Actual dimension may fall below the target when draws are dependent.
    """
    k = int(rng.integers(0, max_dim + 1))
    if k == 0:
        return Subspace.zero(field, d)
    vecs = rng.integers(0, field.p, size=(k, d), dtype=np.int64)
    return Subspace(field, d, MatrixGF(field, reduce_rows(vecs, field.p)))


def _trial_rng(key_prefix: tuple, trial: int):
    return np.random.default_rng(tuple(key_prefix) + (trial,))


def _random_basis(rng, p: int, d: int, max_dim: int) -> np.ndarray:
    k = int(rng.integers(0, max_dim + 1))
    if k == 0:
        return np.zeros((0, d), dtype=np.int64)
    return reduce_rows(rng.integers(0, p, size=(k, d), dtype=np.int64), p)


def canonical_assignment(g: GuideMatrix, p: int) -> Assignment:
    """The coordinate counterexample in GF(p)^n for a guide with n rows.

    A_i is the i-th coordinate line, B_k the line through the k-th proper
    column's support vector, C the all-ones line.
    """
    field = PrimeField(p)
    n = g.n_rows
    eye = np.eye(n, dtype=np.int64)
    variables: dict[str, Subspace] = {}
    for i in range(1, n + 1):
        variables[_a(i)] = Subspace.span([eye[i - 1]], field, n)
    proper = classify_columns(g).proper_supports(g)
    for k, support in enumerate(proper, start=1):
        vec = [1 if i in support else 0 for i in range(1, n + 1)]
        variables[_b(k)] = Subspace.span([vec], field, n)
    variables["C"] = Subspace.span([[1] * n], field, n)
    return Assignment(field, n, variables)


# -- scaled-integer evaluator -------------------------------------------------


class _Evaluator:
    """Slack evaluation with integer-scaled coefficients.

    Exactness is preserved: slack = slack_scaled / scale.  Agreement with
    RankExpr.evaluate is asserted in the test suite.
    """

    def __init__(self, expr: RankExpr, variables: list[str]):
        index = {v: i for i, v in enumerate(variables)}
        for v in expr.variables:
            if v not in index:
                raise UnknownVariable(f"expression variable {v!r} not declared")
        self.variables = list(variables)
        self.scale = lcm(*(c.denominator for c in expr.terms.values())) if expr.terms else 1
        self.terms = [
            (tuple(index[v] for v in vs), int(c * self.scale))
            for vs, c in expr.terms.items()
        ]

    def slack_scaled(self, bases: list[np.ndarray], p: int) -> int:
        total = 0
        for idxs, coeff in self.terms:
            arrs = [bases[i] for i in idxs if bases[i].shape[0]]
            if not arrs:
                continue
            if len(arrs) == 1:
                hval = arrs[0].shape[0]  # rows of an RREF basis are independent
            else:
                stacked = np.concatenate(arrs)
                hval = rref_in_place(stacked, p)
            total += coeff * hval
        return total

    def slack(self, bases: list[np.ndarray], p: int) -> Fraction:
        return Fraction(self.slack_scaled(bases, p), self.scale)


def _bases_witness(p: int, d: int, variables: list[str], bases) -> dict:
    return {
        "field": p,
        "ambient_dim": d,
        "variables": {
            name: [[int(x) for x in row] for row in basis]
            for name, basis in zip(variables, bases)
        },
    }


def _run_range(
    ev: _Evaluator,
    p: int,
    d: int,
    max_dim: int,
    key_prefix: tuple,
    start: int,
    stop: int,
    pinned: frozenset = frozenset(),
):
    """Evaluate trials [start, stop); returns (violations, min_scaled)."""
    violations = []
    min_scaled = None
    for trial in range(start, stop):
        rng = _trial_rng(key_prefix, trial)
        bases = []
        for name in ev.variables:
            if name in pinned:
                bases.append(np.zeros((0, d), dtype=np.int64))
            else:
                bases.append(_random_basis(rng, p, d, max_dim))
        s = ev.slack_scaled(bases, p)
        if min_scaled is None or s < min_scaled:
            min_scaled = s
        if s < 0:
            violations.append((trial, s, _bases_witness(p, d, ev.variables, bases)))
    return violations, min_scaled


def _sample_worker(args):
    ineq_json, p, d, max_dim, key_prefix, start, stop, pinned = args
    ineq = TaggedInequality.from_json(ineq_json)
    ev = _Evaluator(ineq.expr, ineq.variables)
    return _run_range(ev, p, d, max_dim, tuple(key_prefix), start, stop, frozenset(pinned))


def _chunks(total: int, parts: int):
    size = max(1, -(-total // parts))
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _finish_report(ev, raw_violations, min_scaled, trials, seed, config, t0):
    violations = []
    for trial, scaled, witness in raw_violations:
        violations.append(
            Violation(
                trial=trial,
                slack=Fraction(scaled, ev.scale),
                witness=witness,
                digest=witness_digest(witness),
            )
        )
    return TrialReport(
        trials=trials,
        violations=violations,
        min_slack=None if min_scaled is None else Fraction(min_scaled, ev.scale),
        elapsed=time.perf_counter() - t0,
        seed=seed,
        config=config,
    )


def sample_verify(
    ineq: TaggedInequality,
    field: PrimeField,
    policy: SamplingPolicy,
    parallelism: int = 1,
) -> TrialReport:
    """Evaluate the slack on policy.trials independent random assignments.

    Results are a pure function of (inequality, field, policy); the
    parallelism degree only affects wall time.
    """
    t0 = time.perf_counter()
    ev = _Evaluator(ineq.expr, ineq.variables)
    p, d, md = field.p, policy.ambient_dim, policy.max_subspace_dim
    key_prefix = (policy.seed,)
    if parallelism > 1 and policy.trials > 1:
        payload = ineq.to_json()
        jobs = [
            (payload, p, d, md, key_prefix, s, e, ())
            for s, e in _chunks(policy.trials, parallelism * 4)
        ]
        raw, min_scaled = [], None
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for vios, mn in pool.map(_sample_worker, jobs):
                raw.extend(vios)
                if mn is not None and (min_scaled is None or mn < min_scaled):
                    min_scaled = mn
    else:
        raw, min_scaled = _run_range(ev, p, d, md, key_prefix, 0, policy.trials)
    config = {
        "kind": "sample_verify",
        "p": p,
        "policy": policy.to_obj(),
        "inequality": {
            "family": ineq.family,
            "validity": ineq.validity.to_obj(),
            "variables": ineq.variables,
        },
    }
    return _finish_report(ev, raw, min_scaled, policy.trials, policy.seed, config, t0)


def refute(
    ineq: TaggedInequality,
    g: GuideMatrix,
    field: PrimeField,
    budget: int = 1000,
    seed: int = DEFAULT_SEED,
    ambient_dim: int | None = None,
    max_dim: int | None = None,
) -> dict | None:
    """Search for an assignment with negative slack.

    The canonical counterexample is evaluated first; random search only
    runs if it does not violate.  Returns a witness record (with exact
    slack) or None.
    """
    a = canonical_assignment(g, field.p)
    slack = ineq.evaluate(a)
    if slack < 0:
        witness = assignment_witness(a)
        return {
            "source": "canonical",
            "trial": None,
            "slack": _frac_obj(slack),
            "witness": witness,
            "digest": witness_digest(witness),
        }
    ev = _Evaluator(ineq.expr, ineq.variables)
    d = g.n_rows if ambient_dim is None else ambient_dim
    md = d if max_dim is None else max_dim
    seed = int(seed) & _MASK64
    vios, _ = _run_range(ev, field.p, d, md, (seed,), 0, budget)
    if vios:
        trial, scaled, witness = vios[0]
        return {
            "source": "random",
            "trial": trial,
            "slack": _frac_obj(Fraction(scaled, ev.scale)),
            "witness": witness,
            "digest": witness_digest(witness),
        }
    return None


# -- exhaustive enumeration ---------------------------------------------------


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dim subspaces of GF(p)^n (exact integer)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def count_subspaces(p: int, d: int) -> int:
    return sum(gaussian_binomial(d, k, p) for k in range(d + 1))


def enumerate_subspaces(field: PrimeField, d: int) -> list[Subspace]:
    """All subspaces of GF(p)^d, each as its canonical RREF basis.

    Enumerates RREF patterns directly: dimension, then pivot columns,
    then free entries; every subspace appears exactly once.
    """
    p = field.p
    out = [Subspace.zero(field, d)]
    for k in range(1, d + 1):
        for pivots in itertools.combinations(range(d), k):
            pivot_set = set(pivots)
            free = [
                (r, c)
                for r in range(k)
                for c in range(pivots[r] + 1, d)
                if c not in pivot_set
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                a = np.zeros((k, d), dtype=np.int64)
                for r, col in enumerate(pivots):
                    a[r, col] = 1
                for (r, c), v in zip(free, values):
                    a[r, c] = v
                out.append(Subspace(field, d, MatrixGF(field, a)))
    return out


def exhaustive_verify(
    ineq: TaggedInequality,
    field: PrimeField,
    d: int,
    cap: int = 10**8,
) -> TrialReport:
    """Universal check at small scale: every assignment of every subspace.

    Raises CapExceeded (reporting the cardinality) when the assignment
    count would exceed the cap.
    """
    t0 = time.perf_counter()
    nvars = len(ineq.variables)
    per_var = count_subspaces(field.p, d)
    total = per_var**nvars
    if total > cap:
        raise CapExceeded(total, cap)
    subs = enumerate_subspaces(field, d)
    arrays = [s.basis.array for s in subs]
    ev = _Evaluator(ineq.expr, ineq.variables)
    p = field.p

    # Joint entropy depends only on the set of distinct subspaces in a
    # term, so cache by bitmask of subspace indices.
    cache: dict[int, int] = {}
    bit = [1 << i for i in range(per_var)]

    def joint_h(mask: int) -> int:
        hval = cache.get(mask)
        if hval is None:
            chosen = [arrays[i] for i in range(per_var) if mask >> i & 1 and arrays[i].shape[0]]
            if not chosen:
                hval = 0
            elif len(chosen) == 1:
                hval = chosen[0].shape[0]
            else:
                hval = rref_in_place(np.concatenate(chosen), p)
            cache[mask] = hval
        return hval

    raw = []
    min_scaled = None
    terms = ev.terms
    for trial, assign in enumerate(itertools.product(range(per_var), repeat=nvars)):
        s = 0
        for idxs, coeff in terms:
            mask = 0
            for i in idxs:
                mask |= bit[assign[i]]
            s += coeff * joint_h(mask)
        if min_scaled is None or s < min_scaled:
            min_scaled = s
        if s < 0:
            bases = [arrays[assign[i]] for i in range(nvars)]
            raw.append((trial, s, _bases_witness(p, d, ev.variables, bases)))
    config = {
        "kind": "exhaustive_verify",
        "p": p,
        "ambient_dim": d,
        "assignments": total,
        "inequality": {
            "family": ineq.family,
            "validity": ineq.validity.to_obj(),
            "variables": ineq.variables,
        },
    }
    return _finish_report(ev, raw, min_scaled, total, 0, config, t0)


def zeroed_variable_check(
    ineq: TaggedInequality,
    var: str,
    fields: list[int],
    policy: SamplingPolicy,
) -> TrialReport:
    """Pin one variable to the zero space and sample over several fields.

    Runs policy.trials per listed field; violations carry the field in
    their witness.  Expected empty: with a zeroed variable the inequality
    should hold over every characteristic.
    """
    t0 = time.perf_counter()
    if var not in ineq.variables:
        raise UnknownVariable(f"variable {var!r} not in inequality")
    ev = _Evaluator(ineq.expr, ineq.variables)
    d, md = policy.ambient_dim, policy.max_subspace_dim
    raw = []
    min_scaled = None
    for p in fields:
        PrimeField(p)  # validates primality
        vios, mn = _run_range(
            ev, p, d, md, (policy.seed, p), 0, policy.trials, frozenset({var})
        )
        raw.extend(vios)
        if mn is not None and (min_scaled is None or mn < min_scaled):
            min_scaled = mn
    config = {
        "kind": "zeroed_variable_check",
        "zeroed": var,
        "fields": list(fields),
        "policy": policy.to_obj(),
        "inequality": {
            "family": ineq.family,
            "validity": ineq.validity.to_obj(),
            "variables": ineq.variables,
        },
    }
    total = policy.trials * len(fields)
    return _finish_report(ev, raw, min_scaled, total, policy.seed, config, t0)
