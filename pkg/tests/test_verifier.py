from fractions import Fraction

import numpy as np
import pytest

from rankineq.errors import CapExceeded, UnknownVariable
from rankineq.expr import TaggedInequality, Validity, h
from rankineq.generate import gen_example_a, gen_example_b, ingleton
from rankineq.gf import PrimeField
from rankineq.guide import build_example_guide
from rankineq.subspace import Assignment, Subspace, joint_entropy, mutual_info
from rankineq.verify import (
    SamplingPolicy,
    _Evaluator,
    canonical_assignment,
    count_subspaces,
    enumerate_subspaces,
    exhaustive_verify,
    gaussian_binomial,
    load_witness,
    random_subspace,
    refute,
    sample_verify,
    witness_digest,
    zeroed_variable_check,
)

GF2 = PrimeField(2)
GF3 = PrimeField(3)


def always_negative_inequality():
    """-H(A) < 0 whenever A is nonzero; exercises the violation path."""
    return TaggedInequality(
        expr=-h({"A"}),
        validity=Validity.all_fields(),
        family={"class": "test", "n": 1},
        variables=["A"],
    )


# -- random_subspace ----------------------------------------------------------


def test_random_subspace_max_dim_zero():
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = random_subspace(GF3, 4, 0, rng)
        assert s == Subspace.zero(GF3, 4)


def test_random_subspace_d1_gf2():
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(50):
        s = random_subspace(GF2, 1, 1, rng)
        assert s.dim in (0, 1)
        seen.add(s)
    assert seen == {Subspace.zero(GF2, 1), Subspace.span([[1]], GF2, 1)}


def test_random_subspace_deterministic():
    seq1 = [random_subspace(GF3, 5, 5, np.random.default_rng(99)) for _ in range(1)]
    rng_a, rng_b = np.random.default_rng(123), np.random.default_rng(123)
    for _ in range(20):
        assert random_subspace(GF3, 5, 5, rng_a) == random_subspace(GF3, 5, 5, rng_b)
    assert seq1 == [random_subspace(GF3, 5, 5, np.random.default_rng(99))]


def test_random_subspace_respects_max_dim():
    rng = np.random.default_rng(3)
    for _ in range(50):
        assert random_subspace(GF2, 6, 2, rng).dim <= 2


# -- canonical assignment -----------------------------------------------------


def test_canonical_assignment_72():
    g = build_example_guide(7, 2)
    for p, hb in ((3, 3), (2, 2)):
        a = canonical_assignment(g, p)
        assert joint_entropy(a, {"B1", "B2", "B3"}) == hb
        assert joint_entropy(a, {"C"}) == 1
        for i in (1, 2, 3):
            assert joint_entropy(a, {f"A{i}"}) == 1
    a3 = canonical_assignment(g, 3)
    assert mutual_info(a3, {"A1", "A2", "A3"}, {"C"}) == 1


def test_canonical_assignment_witness_round_trip():
    g = build_example_guide(9, 2)
    a = canonical_assignment(g, 5)
    from rankineq.verify import assignment_witness

    w = assignment_witness(a)
    back = load_witness(w)
    assert back.field == a.field
    for name in a.vars:
        assert back.subspace(name) == a.subspace(name)


# -- evaluator agreement -------------------------------------------------------


def test_scaled_evaluator_agrees_with_public_evaluate():
    rng = np.random.default_rng(41)
    ineqs = [gen_example_a(7, 2), gen_example_b(7, 2), ingleton()]
    for _ in range(40):
        ineq = ineqs[int(rng.integers(0, len(ineqs)))]
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        d = int(rng.integers(1, 5))
        subs = {
            name: Subspace.span(
                rng.integers(0, p, size=(int(rng.integers(0, d + 1)), d)).tolist(),
                field,
                d,
            )
            for name in ineq.variables
        }
        a = Assignment(field, d, subs)
        ev = _Evaluator(ineq.expr, ineq.variables)
        bases = [subs[name].basis.array for name in ineq.variables]
        assert ev.slack(bases, p) == ineq.evaluate(a)


def test_evaluator_rejects_undeclared_variables():
    with pytest.raises(UnknownVariable):
        _Evaluator(h({"A", "B"}), ["A"])


# -- sample_verify -------------------------------------------------------------


def test_sample_verify_deterministic_and_parallel_equal():
    ineq = gen_example_b(7, 2)
    policy = SamplingPolicy(ambient_dim=7, max_subspace_dim=7, trials=200, seed=77)
    r1 = sample_verify(ineq, GF3, policy)
    r2 = sample_verify(ineq, GF3, policy)
    r3 = sample_verify(ineq, GF3, policy, parallelism=2)
    assert r1.canonical_json() == r2.canonical_json() == r3.canonical_json()
    assert r1.passed


def test_sample_verify_records_violations():
    ineq = always_negative_inequality()
    policy = SamplingPolicy(ambient_dim=2, max_subspace_dim=2, trials=50, seed=5)
    rep = sample_verify(ineq, GF2, policy)
    assert rep.violations  # nonzero A occurs with overwhelming probability
    assert all(v.slack < 0 for v in rep.violations)
    assert all(rep.min_slack <= v.slack for v in rep.violations)
    assert rep.trials == 50
    # every witness reloads to the same exact slack
    for v in rep.violations[:5]:
        again = ineq.evaluate(load_witness(v.witness))
        assert again == v.slack
        assert witness_digest(v.witness) == v.digest


def test_sample_verify_report_shape():
    ineq = ingleton()
    rep = sample_verify(ineq, GF2, SamplingPolicy(4, 4, 30, 9))
    obj = rep.to_obj()
    assert obj["config"]["kind"] == "sample_verify"
    assert obj["config"]["policy"]["seed"] == 9
    assert "elapsed_seconds" in obj
    assert "elapsed" not in rep.canonical_json()


def test_validity_sides_sampled_quickly():
    # class (a) over p | t and class (b) over p with no violations expected
    pol = SamplingPolicy(7, 7, 300, 11)
    assert sample_verify(gen_example_a(7, 2), GF2, pol).passed
    assert sample_verify(gen_example_b(7, 2), GF3, pol).passed


# -- refute --------------------------------------------------------------------


def test_refute_canonical_witnesses():
    g = build_example_guide(7, 2)
    w = refute(gen_example_a(7, 2), g, GF3)
    assert w is not None
    assert w["source"] == "canonical"
    assert w["slack"] == {"num": -1, "den": 1}
    w2 = refute(gen_example_b(7, 2), g, GF2)
    assert w2["slack"] == {"num": -1, "den": 3}
    # reload and re-evaluate
    back = load_witness(w2["witness"])
    assert gen_example_b(7, 2).evaluate(back) == Fraction(-1, 3)


def test_refute_returns_none_on_validity_side():
    g = build_example_guide(7, 2)
    assert refute(gen_example_a(7, 2), g, GF2, budget=300) is None


def test_canonical_refutes_across_family_window():
    # class (a) is refuted at every p not dividing t, class (b) at every
    # p dividing t, always by the canonical assignment alone
    from rankineq.guide import admissible_t_range

    for n in (7, 9, 11):
        for t in admissible_t_range(n):
            g = build_example_guide(n, t)
            a, b = gen_example_a(n, t), gen_example_b(n, t)
            for p in (2, 3, 5, 7, 11, 13):
                ca = canonical_assignment(g, p)
                slack_a, slack_b = a.evaluate(ca), b.evaluate(ca)
                if t % p != 0:
                    assert slack_a < 0, (n, t, p, slack_a)
                    assert slack_b >= 0, (n, t, p, slack_b)
                else:
                    assert slack_b < 0, (n, t, p, slack_b)
                    assert slack_a >= 0, (n, t, p, slack_a)


def test_low_dimension_universality_72():
    # with ambient dim <= M - 1 = 2 both classes hold over every field
    pol = SamplingPolicy(ambient_dim=2, max_subspace_dim=2, trials=400, seed=19)
    for ineq in (gen_example_a(7, 2), gen_example_b(7, 2)):
        for p in (2, 3, 5, 7):
            assert sample_verify(ineq, PrimeField(p), pol).passed


def test_refute_random_search_fallback():
    # inequality with canonical slack 0 but random violations everywhere
    g = build_example_guide(7, 2)
    ineq = TaggedInequality(
        expr=h({"C"}) - h({"A1"}),
        validity=Validity.all_fields(),
        family={"class": "test", "n": 2},
        variables=["A1", "C"],
    )
    # canonical has H(C)=H(A1)=1, slack 0; random search must find A1 > C
    w = refute(ineq, g, GF2, budget=200, seed=3)
    assert w is not None and w["source"] == "random"
    assert Fraction(w["slack"]["num"], w["slack"]["den"]) < 0


# -- exhaustive ------------------------------------------------------------------


def test_gaussian_binomial_counts():
    assert gaussian_binomial(2, 1, 2) == 3
    assert count_subspaces(2, 2) == 5
    assert count_subspaces(3, 2) == 6
    assert count_subspaces(2, 3) == 16
    for p in (2, 3):
        for d in range(0, 4):
            assert len(enumerate_subspaces(PrimeField(p), d)) == count_subspaces(p, d)


def test_enumerate_subspaces_distinct_and_canonical():
    subs = enumerate_subspaces(GF2, 3)
    assert len(set(subs)) == len(subs)
    for s in subs:
        assert s == Subspace.from_matrix(s.basis)


def test_exhaustive_d0_single_assignment():
    rep = exhaustive_verify(gen_example_a(7, 2), GF2, 0)
    assert rep.trials == 1
    assert rep.min_slack == 0
    assert rep.passed


def test_exhaustive_d1_both_classes():
    for ineq in (gen_example_a(7, 2), gen_example_b(7, 2)):
        for p in (2, 3):
            rep = exhaustive_verify(ineq, PrimeField(p), 1)
            assert rep.trials == 2**7
            assert rep.passed


def test_exhaustive_cap():
    with pytest.raises(CapExceeded) as exc:
        exhaustive_verify(gen_example_a(7, 2), GF2, 2, cap=100)
    assert exc.value.cardinality == 5**7


def test_exhaustive_finds_violations():
    ineq = always_negative_inequality()
    rep = exhaustive_verify(ineq, GF2, 1)
    assert rep.trials == 2
    assert len(rep.violations) == 1  # only the full line violates
    v = rep.violations[0]
    assert v.slack == -1
    assert ineq.evaluate(load_witness(v.witness)) == -1


# -- zeroed variable -------------------------------------------------------------


def test_zeroed_variable_check_72():
    pol = SamplingPolicy(7, 7, 100, 21)
    for ineq in (gen_example_a(7, 2), gen_example_b(7, 2)):
        rep = zeroed_variable_check(ineq, "C", [2, 3], pol)
        assert rep.passed
        assert rep.trials == 200


def test_zeroed_variable_check_unknown_var():
    with pytest.raises(UnknownVariable):
        zeroed_variable_check(gen_example_a(7, 2), "Z9", [2], SamplingPolicy(7, 7, 1, 0))


def test_zeroed_variable_pins_to_zero_space():
    # an H-term containing only the zeroed variable contributes exactly 0
    ineq = TaggedInequality(
        expr=h({"X"}),
        validity=Validity.all_fields(),
        family={"class": "test", "n": 1},
        variables=["X"],
    )
    rep = zeroed_variable_check(ineq, "X", [2, 5], SamplingPolicy(3, 3, 50, 13))
    assert rep.min_slack == 0
    assert rep.passed
