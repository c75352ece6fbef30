"""Symbolic linear combinations of joint entropies.

An expression is a finite map from variable sets to exact rational
coefficients and denotes the quantity ``sum coeff * H(varset)``.  An
inequality is stored in slack orientation: the expression is the slack
(right side minus left side of a displayed inequality) and "holds on an
assignment" means the slack evaluates >= 0.

Coefficients are ``fractions.Fraction`` throughout; no floats anywhere.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Any

from .errors import ParseError, UnknownVariable
from .subspace import Assignment, joint_entropy

Rational = Fraction

_NAME_RE = re.compile(r"([A-Za-z]+)(\d*)$")


def var_sort_key(name: str) -> tuple:
    """Natural order: alphabetic prefix, then numeric suffix (A2 < A10)."""
    m = _NAME_RE.match(name)
    if m and m.group(2):
        return (m.group(1), int(m.group(2)), name)
    return (name, -1, name)


def _varset_key(vs: frozenset) -> tuple:
    return (len(vs), tuple(var_sort_key(n) for n in sorted(vs, key=var_sort_key)))


class RankExpr:
    """Canonical linear rank expression.

    ``terms`` maps frozensets of variable names to nonzero Fractions;
    empty varsets are dropped (H of nothing is identically zero).
    Instances are immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Iterable[str], Any] | None = None):
        canon: dict[frozenset, Fraction] = {}
        if terms:
            for vs, coeff in terms.items():
                key = frozenset(vs)
                if not key:
                    continue
                c = canon.get(key, Fraction(0)) + Fraction(coeff)
                if c:
                    canon[key] = c
                elif key in canon:
                    del canon[key]
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *_):
        raise AttributeError("RankExpr is immutable")

    @property
    def variables(self) -> list[str]:
        seen = set()
        for vs in self.terms:
            seen |= vs
        return sorted(seen, key=var_sort_key)

    def is_zero(self) -> bool:
        return not self.terms

    # -- arithmetic (term-wise, exact) --------------------------------

    def add(self, other: "RankExpr") -> "RankExpr":
        merged = dict(self.terms)
        for vs, c in other.terms.items():
            merged[vs] = merged.get(vs, Fraction(0)) + c
        return RankExpr(merged)

    def scale(self, r) -> "RankExpr":
        r = Fraction(r)
        return RankExpr({vs: c * r for vs, c in self.terms.items()})

    def negate(self) -> "RankExpr":
        return self.scale(-1)

    __add__ = add

    def __sub__(self, other: "RankExpr") -> "RankExpr":
        return self.add(other.negate())

    def __neg__(self) -> "RankExpr":
        return self.negate()

    def __mul__(self, r) -> "RankExpr":
        return self.scale(r)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RankExpr) and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation ----------------------------------------------------

    def evaluate(self, a: Assignment, cache: dict | None = None) -> Fraction:
        """Exact value of the expression on an assignment.

        ``cache`` optionally shares joint-entropy results across several
        evaluations on the same assignment; by default each call uses its
        own local cache.
        """
        if cache is None:
            cache = {}
        total = Fraction(0)
        for vs, c in self.terms.items():
            h = cache.get(vs)
            if h is None:
                for name in vs:
                    if name not in a.vars:
                        raise UnknownVariable(f"variable {name!r} not assigned")
                h = joint_entropy(a, vs)
                cache[vs] = h
            total += c * h
        return total

    # -- rendering / serialization --------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[str, ...], Fraction]]:
        """Terms ordered by (varset size, natural name order)."""
        out = []
        for vs in sorted(self.terms, key=_varset_key):
            out.append((tuple(sorted(vs, key=var_sort_key)), self.terms[vs]))
        return out

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for names, c in self.sorted_terms():
            sign = "+" if c > 0 else "-"
            mag = abs(c)
            coeff = "" if mag == 1 else f"{mag} "
            parts.append(f"{sign} {coeff}H({','.join(names)})")
        return " ".join(parts)

    def to_obj(self) -> dict:
        return {
            "variables": self.variables,
            "terms": [
                {
                    "coeff": {"num": c.numerator, "den": c.denominator},
                    "vars": list(names),
                }
                for names, c in self.sorted_terms()
            ],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_obj(), indent=indent)

    @classmethod
    def from_obj(cls, obj: Any, location: str = "") -> "RankExpr":
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", location or "$")
        terms_obj = obj.get("terms")
        if not isinstance(terms_obj, list):
            raise ParseError("missing or non-array 'terms'", _loc(location, "terms"))
        acc: dict[frozenset, Fraction] = {}
        for i, t in enumerate(terms_obj):
            here = _loc(location, f"terms[{i}]")
            if not isinstance(t, dict):
                raise ParseError("term must be an object", here)
            coeff = _parse_coeff(t.get("coeff"), _loc(location, f"terms[{i}].coeff"))
            vars_obj = t.get("vars")
            if not isinstance(vars_obj, list) or not all(
                isinstance(v, str) for v in vars_obj
            ):
                raise ParseError("'vars' must be an array of names", f"{here}.vars")
            key = frozenset(vars_obj)
            # duplicate varsets are legal input: coefficients are summed
            acc[key] = acc.get(key, Fraction(0)) + coeff
        return cls(acc)

    @classmethod
    def from_json(cls, text: str) -> "RankExpr":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(str(e.msg), f"offset {e.pos}") from None
        return cls.from_obj(obj)

    def __repr__(self):
        return f"RankExpr({self.to_text()})"


ZERO = RankExpr()


def _loc(base: str, leaf: str) -> str:
    return f"{base}.{leaf}" if base else leaf


def _parse_coeff(obj: Any, location: str) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if not isinstance(obj, dict):
        raise ParseError("coeff must be an int or {num, den} object", location)
    num, den = obj.get("num"), obj.get("den", 1)
    if not isinstance(num, int) or not isinstance(den, int):
        raise ParseError("num/den must be integers", location)
    if den <= 0:
        raise ParseError("den must be positive", f"{location}.den")
    return Fraction(num, den)


# -- elementary constructors -------------------------------------------


def h(varset: Iterable[str]) -> RankExpr:
    """H(S).  The empty set yields the zero expression."""
    key = frozenset(varset)
    if not key:
        return ZERO
    return RankExpr({key: 1})


def cond_h(s: Iterable[str], t: Iterable[str]) -> RankExpr:
    """H(S|T) = H(S u T) - H(T)."""
    s, t = frozenset(s), frozenset(t)
    return h(s | t) - h(t)


def mi(s: Iterable[str], t: Iterable[str]) -> RankExpr:
    """I(S;T) = H(S) + H(T) - H(S u T)."""
    s, t = frozenset(s), frozenset(t)
    return h(s) + h(t) - h(s | t)


def cmi(s: Iterable[str], t: Iterable[str], u: Iterable[str]) -> RankExpr:
    """I(S;T|U) = H(S u U) + H(T u U) - H(S u T u U) - H(U)."""
    s, t, u = frozenset(s), frozenset(t), frozenset(u)
    return h(s | u) + h(t | u) - h(s | t | u) - h(u)


# -- tagged inequalities ------------------------------------------------

VALIDITY_KINDS = ("divides", "not_divides", "all_fields")


class Validity:
    """Which characteristics an inequality is claimed to hold over."""

    __slots__ = ("kind", "t")

    def __init__(self, kind: str, t: int | None = None):
        if kind not in VALIDITY_KINDS:
            raise ValueError(f"unknown validity kind {kind!r}")
        if kind != "all_fields":
            if t is None or t < 2:
                raise ValueError("divisibility validity needs t >= 2")
        self.kind = kind
        self.t = t

    @classmethod
    def divides(cls, t: int) -> "Validity":
        return cls("divides", t)

    @classmethod
    def not_divides(cls, t: int) -> "Validity":
        return cls("not_divides", t)

    @classmethod
    def all_fields(cls) -> "Validity":
        return cls("all_fields")

    def covers(self, p: int) -> bool:
        """True iff characteristic p is inside the claimed validity set."""
        if self.kind == "all_fields":
            return True
        if self.kind == "divides":
            return self.t % p == 0
        return self.t % p != 0

    def to_obj(self) -> dict:
        obj = {"kind": self.kind}
        if self.t is not None:
            obj["t"] = self.t
        return obj

    @classmethod
    def from_obj(cls, obj: Any, location: str = "validity") -> "Validity":
        if not isinstance(obj, dict) or obj.get("kind") not in VALIDITY_KINDS:
            raise ParseError("validity needs a known 'kind'", location)
        return cls(obj["kind"], obj.get("t"))

    def __eq__(self, other):
        return (
            isinstance(other, Validity)
            and other.kind == self.kind
            and other.t == self.t
        )

    def __repr__(self):
        if self.kind == "all_fields":
            return "Validity(all_fields)"
        return f"Validity({self.kind}, t={self.t})"


class TaggedInequality:
    """A rank expression plus its validity claim and family metadata.

    ``expr`` is the slack; the inequality asserts slack >= 0 over every
    field whose characteristic the validity covers.  ``family`` is a
    plain JSON-compatible mapping describing where the inequality came
    from (see generate.FamilyDescriptor).
    """

    __slots__ = ("expr", "validity", "family", "variables")

    def __init__(
        self,
        expr: RankExpr,
        validity: Validity,
        family: Mapping[str, Any],
        variables: list[str],
    ):
        self.expr = expr
        self.validity = validity
        self.family = dict(family)
        self.variables = list(variables)

    def evaluate(self, a: Assignment, cache: dict | None = None) -> Fraction:
        return self.expr.evaluate(a, cache)

    def holds_on(self, a: Assignment) -> bool:
        return self.evaluate(a) >= 0

    def label(self) -> str:
        fam = self.family
        bits = [str(fam.get("class", "?"))]
        if "n" in fam:
            bits.append(f"n={fam['n']}")
        if fam.get("t") is not None:
            bits.append(f"t={fam['t']}")
        return "(" + ", ".join(bits) + ")"

    def to_obj(self) -> dict:
        obj = self.expr.to_obj()
        obj["variables"] = list(self.variables)
        obj["validity"] = self.validity.to_obj()
        obj["family"] = dict(self.family)
        return obj

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_obj(), indent=indent)

    @classmethod
    def from_obj(cls, obj: Any) -> "TaggedInequality":
        expr = RankExpr.from_obj(obj)
        if "validity" not in obj:
            raise ParseError("missing 'validity'", "validity")
        validity = Validity.from_obj(obj["validity"])
        family = obj.get("family", {})
        if not isinstance(family, dict):
            raise ParseError("family must be an object", "family")
        variables = obj.get("variables", expr.variables)
        if not isinstance(variables, list) or not all(
            isinstance(v, str) for v in variables
        ):
            raise ParseError("variables must be an array of names", "variables")
        return cls(expr, validity, family, variables)

    @classmethod
    def from_json(cls, text: str) -> "TaggedInequality":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(str(e.msg), f"offset {e.pos}") from None
        return cls.from_obj(obj)

    def __eq__(self, other):
        return (
            isinstance(other, TaggedInequality)
            and other.expr == self.expr
            and other.validity == self.validity
            and other.family == self.family
            and other.variables == self.variables
        )

    def __repr__(self):
        return f"TaggedInequality{self.label()}"
