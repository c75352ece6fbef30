"""Command-line front door.

Subcommands: gen | rank | verify | refute | selftest.  Exit codes are a
stable contract: 0 = success as documented, 1 = negative finding
(profile mismatch, violations found / no witness found, selftest
failure), 2 = usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ParamOutOfRange, ParseError, RankineqError
from .expr import TaggedInequality
from .generate import (
    DEFAULT_WITNESS_PRIMES,
    gen_example_a,
    gen_example_b,
    gen_family,
    gen_theorem_pair,
    ingleton,
)
from .gf import PrimeField
from .guide import build_example_guide, check_rank_profile, load_guide
from .verify import (
    DEFAULT_SEED,
    SamplingPolicy,
    refute,
    sample_verify,
)


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParamOutOfRange(f"bad prime list {text!r}") from None


def _parse_seed(text: str) -> int:
    """Fixed default for reproducibility; 'random' opts into fresh entropy.

    The chosen seed is always echoed in the report output.
    """
    if text == "random":
        import numpy as np

        return int(np.random.SeedSequence().entropy) & (2**64 - 1)
    try:
        return int(text)
    except ValueError:
        raise ParamOutOfRange(f"--seed must be an integer or 'random', got {text!r}") from None


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _ineq_header(ineq: TaggedInequality) -> str:
    v = ineq.validity
    if v.kind == "all_fields":
        claim = "valid over every characteristic"
    elif v.kind == "divides":
        claim = f"valid over characteristics dividing {v.t}"
    else:
        claim = f"valid over characteristics not dividing {v.t}"
    return f"# {ineq.label()} {claim}; slack >= 0 form"


def _render(ineqs: list[TaggedInequality], fmt: str) -> str:
    if fmt == "json":
        objs = [iq.to_obj() for iq in ineqs]
        return json.dumps(objs[0] if len(objs) == 1 else objs, indent=2)
    blocks = []
    for iq in ineqs:
        blocks.append(_ineq_header(iq) + "\n" + iq.expr.to_text())
    return "\n\n".join(blocks)


def _resolve_guide(args):
    if getattr(args, "guide", None):
        try:
            return load_guide(args.guide)
        except OSError as e:
            raise ParseError(str(e), args.guide) from None
    if args.n is None or args.t is None:
        raise ParamOutOfRange("need --guide, or both --n (>= 7) and --t")
    return build_example_guide(args.n, args.t)


def cmd_gen(args) -> int:
    nabla = args.nabla
    if args.guide or args.klass == "theorem":
        g = _resolve_guide(args)
        ineqs = gen_theorem_pair(g, nabla_mode=nabla, check_profile=not args.no_check)
    elif args.klass == "both" and args.t is None:
        if args.n is None:
            raise ParamOutOfRange("gen needs --n (>= 7) or --guide")
        ineqs = gen_family(args.n)
    else:
        if args.n is None or args.t is None:
            raise ParamOutOfRange(
                "gen needs --n and --t (2 <= t <= floor((n-1)/2)-1), or --guide"
            )
        if args.klass == "a":
            ineqs = [gen_example_a(args.n, args.t)]
        elif args.klass == "b":
            ineqs = [gen_example_b(args.n, args.t)]
        else:
            ineqs = [gen_example_a(args.n, args.t), gen_example_b(args.n, args.t)]
    _emit(_render(ineqs, args.format), args.output)
    return 0


def cmd_rank(args) -> int:
    g = _resolve_guide(args)
    primes = _parse_primes(args.primes)
    for p in primes:
        PrimeField(p)
    report = check_rank_profile(g, primes)
    if args.format == "json":
        _emit(json.dumps(report.to_obj(), indent=2), args.output)
    else:
        lines = [f"guide: {g.n_rows} rows, {g.m_cols} cols, t={g.t}"]
        lines.append(f"{'prime':>6} {'expected':>9} {'actual':>7} match")
        for c in report.checks:
            lines.append(
                f"{c.prime:>6} {c.expected:>9} {c.actual:>7} {'yes' if c.match else 'NO'}"
            )
        lines.append("profile: " + ("PASS" if report.passed else "FAIL"))
        _emit("\n".join(lines), args.output)
    return 0 if report.passed else 1


def _single_inequality(args) -> TaggedInequality:
    if getattr(args, "expr", None):
        try:
            with open(args.expr, encoding="utf-8") as fh:
                return TaggedInequality.from_json(fh.read())
        except OSError as e:
            raise ParseError(str(e), args.expr) from None
    if args.n is None or args.t is None:
        raise ParamOutOfRange("need --n and --t (or --expr FILE)")
    if args.klass == "a":
        return gen_example_a(args.n, args.t)
    if args.klass == "b":
        return gen_example_b(args.n, args.t)
    raise ParamOutOfRange(f"--class must be a or b here, got {args.klass!r}")


def cmd_verify(args) -> int:
    ineq = _single_inequality(args)
    p = PrimeField(args.p)
    d = args.d if args.d is not None else len(ineq.variables)
    max_dim = args.max_dim if args.max_dim is not None else d
    policy = SamplingPolicy(
        ambient_dim=d, max_subspace_dim=max_dim, trials=args.trials, seed=args.seed
    )
    report = sample_verify(ineq, p, policy, parallelism=args.parallelism)
    if args.format == "json":
        _emit(report.to_json(indent=2), args.output)
    else:
        lines = [
            f"inequality {ineq.label()} over GF({args.p})",
            f"trials={report.trials} d={d} max_dim={max_dim} seed={report.seed}",
            f"violations={len(report.violations)} min_slack={report.min_slack}",
        ]
        for v in report.violations[:5]:
            lines.append(f"  trial {v.trial}: slack={v.slack} digest={v.digest}")
        _emit("\n".join(lines), args.output)
    return 0 if report.passed else 1


def cmd_refute(args) -> int:
    ineq = _single_inequality(args)
    fam = ineq.family
    if args.guide:
        g = load_guide(args.guide)
    elif fam.get("class") in ("a", "b") and "n" in fam and "t" in fam:
        g = build_example_guide(int(fam["n"]), int(fam["t"]))
    else:
        raise ParamOutOfRange("refute needs --guide for non-family inequalities")
    witness = refute(
        ineq, g, PrimeField(args.p), budget=args.budget, seed=args.seed
    )
    if witness is None:
        _emit("none", args.output)
        return 1
    if args.format == "json":
        _emit(json.dumps(witness, indent=2), args.output)
    else:
        slack = witness["slack"]
        frac = f"{slack['num']}/{slack['den']}" if slack["den"] != 1 else str(slack["num"])
        _emit(
            f"witness found ({witness['source']}): slack={frac}\n"
            f"digest={witness['digest']}\n" + json.dumps(witness["witness"]),
            args.output,
        )
    return 0


def _selftest_checks(quick: bool):
    from fractions import Fraction

    from .guide import admissible_t_range, projection_rank_identity
    from .verify import canonical_assignment

    def rank_profiles():
        top = 11 if quick else 15
        for n in range(7, top + 1):
            for t in admissible_t_range(n):
                g = build_example_guide(n, t)
                rep = check_rank_profile(g, DEFAULT_WITNESS_PRIMES)
                if not rep.passed:
                    return f"profile failed at (n={n}, t={t})"
        return None

    def canonical_slacks():
        expected = {
            ("a", 3): Fraction(-1),
            ("a", 2): Fraction(0),
            ("b", 2): Fraction(-1, 3),
            ("b", 3): Fraction(0),
        }
        g = build_example_guide(7, 2)
        for (klass, p), want in expected.items():
            ineq = gen_example_a(7, 2) if klass == "a" else gen_example_b(7, 2)
            got = ineq.evaluate(canonical_assignment(g, p))
            if got != want:
                return f"class {klass} over GF({p}): slack {got} != {want}"
        return None

    def ingleton_baseline():
        trials = 300 if quick else 2000
        ineq = ingleton()
        for p in (2, 3):
            policy = SamplingPolicy(4, 4, trials, DEFAULT_SEED)
            rep = sample_verify(ineq, PrimeField(p), policy)
            if not rep.passed:
                return f"violated over GF({p}) at trial {rep.violations[0].trial}"
        return None

    def family_counts():
        for n in range(7, 26):
            want = 2 * ((n - 1) // 2) - 4
            got = len(gen_family(n))
            if got != want:
                return f"n={n}: {got} != {want}"
        return None

    def instantiation():
        top = 9 if quick else 13
        for n in range(7, top + 1):
            for t in admissible_t_range(n):
                g = build_example_guide(n, t)
                ti = gen_theorem_pair(g, nabla_mode="interval")
                if ti[0].expr != gen_example_a(n, t).expr:
                    return f"(i) != (a) at (n={n}, t={t})"
                if ti[1].expr != gen_example_b(n, t).expr:
                    return f"(ii) != (b) at (n={n}, t={t})"
        return None

    def round_trip():
        for ineq in (gen_example_a(7, 2), gen_example_b(7, 2), ingleton()):
            back = TaggedInequality.from_json(ineq.to_json())
            if back != ineq:
                return f"round-trip mismatch for {ineq.label()}"
        return None

    def projections():
        for n, t in ((7, 2), (9, 2), (9, 3)):
            g = build_example_guide(n, t)
            for p in (2, 3, 5, 7):
                lhs, rhs, ok = projection_rank_identity(g, p)
                if not ok:
                    return f"(n={n}, t={t}, p={p}): {lhs} != {rhs}"
        return None

    return [
        ("rank-profiles", rank_profiles),
        ("canonical-slacks", canonical_slacks),
        ("ingleton-baseline", ingleton_baseline),
        ("family-counts", family_counts),
        ("theorem-instantiation", instantiation),
        ("json-round-trip", round_trip),
        ("projection-identity", projections),
    ]


def cmd_selftest(args) -> int:
    failures = 0
    for name, fn in _selftest_checks(args.quick):
        problem = fn()
        if problem is None:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name}: {problem}")
    print(f"selftest: {'all passed' if not failures else f'{failures} failed'}")
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankineq",
        description=(
            "Generate characteristic-dependent linear rank inequalities from "
            "binary guide matrices and verify or refute them over prime fields."
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_family_args(sp, with_class=True):
        sp.add_argument("--n", type=int, default=None, help="family variable count (>= 7)")
        sp.add_argument("--t", type=int, default=None, help="divisor parameter")
        if with_class:
            sp.add_argument(
                "--class",
                dest="klass",
                choices=["a", "b", "both", "theorem"],
                default="both",
            )
        sp.add_argument("--guide", default=None, help="guide matrix file")

    def add_io_args(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.add_argument("--output", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("gen", help="emit inequalities")
    add_family_args(sp)
    sp.add_argument("--nabla", choices=["chain", "interval"], default="interval")
    sp.add_argument(
        "--no-check",
        action="store_true",
        help="skip the rank-profile gate for custom guides",
    )
    add_io_args(sp)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("rank", help="rank-vs-characteristic profile of a guide")
    add_family_args(sp, with_class=False)
    sp.add_argument("--primes", default="2,3,5,7,11,13", help="comma-separated primes")
    add_io_args(sp)
    sp.set_defaults(fn=cmd_rank)

    sp = sub.add_parser("verify", help="randomized check over a prime field")
    add_family_args(sp)
    sp.add_argument("--expr", default=None, help="load inequality from JSON file")
    sp.add_argument("--p", type=int, required=True, help="field characteristic")
    sp.add_argument("--d", type=int, default=None, help="ambient dimension (default: variable count)")
    sp.add_argument("--max-dim", type=int, default=None, help="max sampled subspace dim (default: d)")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=_parse_seed, default=DEFAULT_SEED,
                    help="integer seed or 'random'")
    sp.add_argument("--parallelism", type=int, default=1)
    add_io_args(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("refute", help="hunt for a violating assignment")
    add_family_args(sp)
    sp.add_argument("--expr", default=None, help="load inequality from JSON file")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--budget", type=int, default=1000, help="random trials after canonical")
    sp.add_argument("--seed", type=_parse_seed, default=DEFAULT_SEED,
                    help="integer seed or 'random'")
    add_io_args(sp)
    sp.set_defaults(fn=cmd_refute)

    sp = sub.add_parser("selftest", help="run the bundled acceptance checks")
    sp.add_argument("--quick", action="store_true", help="subset that finishes in seconds")
    sp.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParamOutOfRange, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RankineqError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
