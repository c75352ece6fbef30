from fractions import Fraction

import numpy as np
import pytest

from rankineq.errors import InadmissibleGuide, ParamOutOfRange
from rankineq.expr import TaggedInequality, ZERO, cond_h, mi
from rankineq.generate import (
    count_independent,
    gen_example_a,
    gen_example_b,
    gen_family,
    gen_theorem_i,
    gen_theorem_ii,
    ingleton,
    nabla_c,
    nabla_vars,
)
from rankineq.gf import PrimeField
from rankineq.guide import GuideMatrix, admissible_t_range, build_example_guide
from rankineq.subspace import Assignment, Subspace
from rankineq.verify import canonical_assignment


def fs(*names):
    return frozenset(names)


def test_family_counts():
    for n in range(7, 26):
        assert len(gen_family(n)) == 2 * ((n - 1) // 2) - 4
    assert len(gen_family(7)) == 2
    assert len(gen_family(9)) == 4
    assert len(gen_family(11)) == 6


def test_family_param_window():
    with pytest.raises(ParamOutOfRange):
        gen_family(6)
    with pytest.raises(ParamOutOfRange):
        gen_example_a(7, 3)
    with pytest.raises(ParamOutOfRange):
        gen_example_b(9, 1)


def test_72_variables():
    a = gen_example_a(7, 2)
    assert a.variables == ["A1", "A2", "A3", "B1", "B2", "B3", "C"]
    assert a.expr.variables == a.variables  # all 7 really appear
    assert a.validity.to_obj() == {"kind": "divides", "t": 2}
    b = gen_example_b(7, 2)
    assert b.validity.to_obj() == {"kind": "not_divides", "t": 2}
    assert b.family == {"class": "b", "n": 7, "t": 2, "M": 3}


def test_example_a_72_full_term_map():
    # transcribed by hand from the displayed (n, t) = (7, 2) inequality,
    # then cross-checked against the brute-force canonical slack of -1
    expected = {
        fs("A1", "A2", "A3"): Fraction(-4),
        fs("C"): Fraction(11),
        fs("A1", "A2", "A3", "C"): Fraction(1),
        fs("A2", "A3"): Fraction(3),
        fs("A1", "A3"): Fraction(2),
        fs("A1", "A2"): Fraction(3),
        fs("A2", "A3", "C"): Fraction(-3),
        fs("A1", "A3", "C"): Fraction(-3),
        fs("A1", "A2", "C"): Fraction(-3),
        fs("A2", "A3", "B1"): Fraction(1),
        fs("A1", "A3", "B2"): Fraction(1),
        fs("A1", "A2", "B3"): Fraction(1),
        fs("A1", "B1", "C"): Fraction(1),
        fs("A2", "B2", "C"): Fraction(1),
        fs("A3", "B3", "C"): Fraction(1),
        fs("A1", "C"): Fraction(-1),
        fs("A2", "C"): Fraction(-1),
        fs("A3", "C"): Fraction(-1),
        fs("A1"): Fraction(2),
        fs("A2"): Fraction(1),
        fs("A3"): Fraction(2),
        fs("B1", "B2", "B3"): Fraction(-1),
    }
    assert gen_example_a(7, 2).expr.terms == expected


def test_example_b_has_one_over_m_coefficient():
    b72 = gen_example_b(7, 2)
    assert b72.expr.terms[fs("B1", "B2", "B3")] == Fraction(1, 3)
    b93 = gen_example_b(9, 3)
    assert b93.expr.terms[fs("B1", "B2", "B3", "B4")] == Fraction(1, 4)


def test_degenerate_ranges_when_m_equals_t_plus_one():
    # n = 2t + 3: no A_i with i > t + 1 anywhere in either class
    for n, t in ((7, 2), (9, 3), (11, 4), (13, 5)):
        assert n == 2 * t + 3
        for ineq in (gen_example_a(n, t), gen_example_b(n, t)):
            assert ineq.variables == (
                [f"A{i}" for i in range(1, t + 2)]
                + [f"B{i}" for i in range(1, t + 2)]
                + ["C"]
            )
            assert len(ineq.variables) == n


def test_93_bracket_coefficient():
    # coefficient (t+2)(M-t) - 1 = 4 lands on the full joint varset with C
    # (bracket contributes +4, the (M-1) I(A;C) term contributes -3)
    a = gen_example_a(9, 3)
    assert a.expr.terms[fs("A1", "A2", "A3", "A4", "C")] == Fraction(1)


def test_canonical_slacks_frozen():
    g = build_example_guide(7, 2)
    a72, b72 = gen_example_a(7, 2), gen_example_b(7, 2)
    assert a72.evaluate(canonical_assignment(g, 3)) == Fraction(-1)
    assert a72.evaluate(canonical_assignment(g, 2)) == Fraction(0)
    assert b72.evaluate(canonical_assignment(g, 2)) == Fraction(-1, 3)
    assert b72.evaluate(canonical_assignment(g, 3)) == Fraction(0)


# -- nabla -------------------------------------------------------------------


def test_nabla_empty_and_singleton():
    assert nabla_vars([], mode="chain") == ZERO
    assert nabla_vars([], mode="interval") == ZERO
    assert nabla_vars([4], mode="chain") == ZERO  # no lower elements
    assert nabla_vars([1], mode="interval") == ZERO  # run starts at 1
    assert nabla_vars([3], mode="interval") == mi({"A1", "A2"}, {"A3"})


def test_nabla_chain_uses_in_set_prefixes():
    got = nabla_vars([2, 5, 7], mode="chain")
    want = mi({"A2"}, {"A5"}) + mi({"A2", "A5"}, {"A7"})
    assert got == want


def test_nabla_interval_uses_full_prefixes_per_run():
    assert nabla_vars([1, 2, 3], mode="interval") == ZERO
    got = nabla_vars([2, 3, 5], mode="interval")
    want = mi({"A1"}, {"A2", "A3"}) + mi({"A1", "A2", "A3", "A4"}, {"A5"})
    assert got == want


def test_nabla_interval_reproduces_printed_sums():
    # the two displayed shapes for (n, t) with t + 1 = 3:
    # T = [3] - {k} and T = {k}
    assert nabla_vars([2, 3], mode="interval") == mi({"A1"}, {"A2", "A3"})
    assert nabla_vars([1, 3], mode="interval") == mi({"A1", "A2"}, {"A3"})
    assert nabla_vars([2], mode="interval") == mi({"A1"}, {"A2"})


def test_nabla_mode_validation():
    with pytest.raises(ValueError):
        nabla_vars([1, 2], mode="spiral")


def test_nabla_c_expansion():
    want = (
        cond_h({"C"}, {"A1", "A2", "A3"})
        + mi({"A2", "A3"}, {"C"})
        + mi({"A1", "A3"}, {"C"})
        + mi({"A1", "A2"}, {"C"})
    )
    assert nabla_c(3) == want


def test_nabla_c_vanishes_at_canonical_and_zero():
    g = build_example_guide(7, 2)
    for p in (2, 3, 5):
        assert nabla_c(3).evaluate(canonical_assignment(g, p)) == 0
    field = PrimeField(2)
    a = Assignment(
        field,
        3,
        {
            **{f"A{i}": Subspace.span([[int(i == j) for j in range(1, 4)]], field, 3) for i in range(1, 4)},
            "C": Subspace.zero(field, 3),
        },
    )
    assert nabla_c(3).evaluate(a) == 0


# -- theorem generators -------------------------------------------------------


def test_theorem_instantiation_matches_examples():
    for n in range(7, 14):
        for t in admissible_t_range(n):
            g = build_example_guide(n, t)
            assert gen_theorem_i(g, nabla_mode="interval").expr == gen_example_a(n, t).expr
            assert gen_theorem_ii(g, nabla_mode="interval").expr == gen_example_b(n, t).expr


def test_theorem_mode_is_stamped():
    g = build_example_guide(7, 2)
    assert gen_theorem_i(g).family["nabla_mode"] == "interval"
    assert gen_theorem_ii(g, nabla_mode="chain").family["nabla_mode"] == "chain"


def test_theorem_chain_differs_from_interval():
    g = build_example_guide(9, 2)
    assert gen_theorem_i(g, nabla_mode="chain").expr != gen_theorem_i(g, nabla_mode="interval").expr


def test_chain_mode_admits_violations():
    # Frozen witness (found by seeded sampling, d=5 over GF(2)): the
    # chain-mode (i)-inequality for the smallest guide evaluates to -1
    # on its claimed validity side, while interval mode gives +2 on the
    # same assignment.  This is why interval is the generator default.
    g = build_example_guide(7, 2)
    field = PrimeField(2)
    rows = {
        "A1": [[0, 1, 0, 0, 1], [0, 0, 1, 1, 1]],
        "A2": [[1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
        "A3": [[1, 1, 1, 1, 1]],
        "B1": [],
        "B2": [],
        "B3": [[1, 0, 0, 0, 0], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]],
        "C": [],
    }
    a = Assignment(
        field, 5, {k: Subspace.span(v, field, 5) for k, v in rows.items()}
    )
    assert gen_theorem_i(g, nabla_mode="chain").evaluate(a) == Fraction(-1)
    assert gen_theorem_i(g, nabla_mode="interval").evaluate(a) == Fraction(2)


def test_theorem_rejects_inadmissible_guide():
    identity = GuideMatrix(3, (frozenset({1}), frozenset({2}), frozenset({3})), 2)
    with pytest.raises(InadmissibleGuide):
        gen_theorem_i(identity)
    # override still generates something evaluable
    ineq = gen_theorem_i(identity, check_profile=False)
    assert ineq.variables == ["A1", "A2", "A3", "C"]


def test_theorem_full_column_puts_c_in_joint_term():
    g = GuideMatrix(
        4,
        (
            frozenset({1, 2, 3, 4}),  # full column -> C joins the joint term
            frozenset({1, 2, 3}),
            frozenset({3}),
            frozenset({4}),
        ),
        2,
    )
    ineq = gen_theorem_i(g, check_profile=False)
    # joint LHS varset {A3, A4, B1, C} appears with coefficient -1
    assert ineq.expr.terms[fs("A3", "A4", "B1", "C")] == Fraction(-1)
    # without the full column, C drops out of the joint term
    g2 = GuideMatrix(4, g.columns[1:], 2)
    ineq2 = gen_theorem_i(g2, check_profile=False)
    assert fs("A3", "A4", "B1", "C") not in ineq2.expr.terms
    assert ineq2.expr.terms[fs("A3", "A4", "B1")] == Fraction(-1)


def test_theorem_on_custom_guide_round_trips_canonically():
    g = build_example_guide(11, 3)
    for gen in (gen_theorem_i, gen_theorem_ii):
        ineq = gen(g, nabla_mode="chain")
        assert TaggedInequality.from_json(ineq.to_json()) == ineq


# -- counting and baseline ----------------------------------------------------


def test_count_independent_examples():
    assert count_independent(13, 2) == 2  # powers {2, 4} up to m=4
    assert count_independent(7, 2) == 0  # m=1, none
    assert count_independent(23, 3) == 2  # powers {3, 9} up to m=9
    assert count_independent(15, 2) == 2
    assert count_independent(11, 3) == 1


def test_ingleton_baseline():
    ineq = ingleton()
    assert ineq.validity.kind == "all_fields"
    assert ineq.variables == ["A1", "A2", "A3", "A4"]
    field = PrimeField(2)
    line = Subspace.span([[1, 0, 0, 0]], field, 4)
    same = Assignment(field, 4, {n: line for n in ineq.variables})
    assert ineq.evaluate(same) == 0
    zeros = Assignment(field, 4, {n: Subspace.zero(field, 4) for n in ineq.variables})
    assert ineq.evaluate(zeros) == 0


def test_ingleton_random_tuples_nonnegative():
    rng = np.random.default_rng(37)
    ineq = ingleton()
    field = PrimeField(2)
    for _ in range(500):
        d = 4
        a = Assignment(
            field,
            d,
            {
                n: Subspace.span(
                    rng.integers(0, 2, size=(int(rng.integers(0, d + 1)), d)).tolist(),
                    field,
                    d,
                )
                for n in ineq.variables
            },
        )
        assert ineq.evaluate(a) >= 0
