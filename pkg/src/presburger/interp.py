"""Interpretations of linear orders in (N, +).

An m-dimensional interpretation gives a domain formula over ``x1..xm``, an
order formula over ``x1..xm, y1..ym`` and optionally an equality formula
over the same variables (absent means tuples are equal only when they
coincide).  Besides validation and comparison this module builds the two
definable predicates the analysis needs: "same galaxy" and "least point of
its galaxy in the external lexicographic order".
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

from . import formula as F
from . import qelim as Q


class SchemaError(ValueError):
    """Malformed interpretation file; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class OutsideDomain(ValueError):
    pass


def xs(m: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i}" for i in range(1, m + 1)]


@dataclass(frozen=True)
class Interpretation:
    name: str
    dim: int
    domain: F.Formula
    less: F.Formula
    equality: F.Formula | None = None
    description: str = ""

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise SchemaError("dim", "dimension must be >= 1")
        x, y = set(xs(self.dim)), set(xs(self.dim, "y"))
        extra = F.free_vars(self.domain) - x
        if extra:
            raise SchemaError("domain", f"unexpected free variables {sorted(extra)}")
        extra = F.free_vars(self.less) - x - y
        if extra:
            raise SchemaError("less", f"unexpected free variables {sorted(extra)}")
        if self.equality is not None:
            extra = F.free_vars(self.equality) - x - y
            if extra:
                raise SchemaError("equality", f"unexpected free variables {sorted(extra)}")

    @property
    def m(self) -> int:
        return self.dim

    # -- instantiation at fresh variable tuples

    def domain_at(self, u: Sequence[str | F.Term]) -> F.Formula:
        return F.substitute_many(self.domain, _bind(xs(self.dim), u))

    def less_at(self, u: Sequence[str | F.Term], v: Sequence[str | F.Term]) -> F.Formula:
        mapping = _bind(xs(self.dim), u) | _bind(xs(self.dim, "y"), v)
        return F.substitute_many(self.less, mapping)

    def equal_at(self, u: Sequence[str | F.Term], v: Sequence[str | F.Term]) -> F.Formula:
        if self.equality is None:
            return tuple_eq(u, v)
        mapping = _bind(xs(self.dim), u) | _bind(xs(self.dim, "y"), v)
        return F.substitute_many(self.equality, mapping)

    # -- serialization

    def to_json(self) -> dict:
        data = {
            "name": self.name,
            "dim": self.dim,
            "domain": F.format_formula(self.domain),
            "less": F.format_formula(self.less),
        }
        if self.equality is not None:
            data["equality"] = F.format_formula(self.equality)
        return data

    @classmethod
    def from_json(cls, data: dict | str) -> "Interpretation":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise SchemaError("$", "expected a JSON object")
        for key in data:
            if key not in ("name", "dim", "domain", "less", "equality", "description"):
                raise SchemaError(key, "unknown field")
        for key, kind in (("name", str), ("dim", int), ("domain", str), ("less", str)):
            if key not in data:
                raise SchemaError(key, "missing field")
            if not isinstance(data[key], kind) or isinstance(data[key], bool):
                raise SchemaError(key, f"expected {kind.__name__}")
        if data["dim"] < 1:
            raise SchemaError("dim", "dimension must be >= 1")

        def parse(key):
            try:
                return F.parse(data[key])
            except F.ParseError as exc:
                raise SchemaError(key, str(exc)) from exc

        equality = None
        if data.get("equality") is not None:
            if not isinstance(data["equality"], str):
                raise SchemaError("equality", "expected str")
            equality = parse("equality")
        return cls(data["name"], data["dim"], parse("domain"), parse("less"), equality, data.get("description", ""))

    @classmethod
    def load(cls, path: str) -> "Interpretation":
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_json(data)


def _bind(names: Sequence[str], values: Sequence[str | F.Term | int]) -> dict[str, F.Term]:
    out = {}
    for n, v in zip(names, values):
        if isinstance(v, str):
            v = F.Var(v)
        elif isinstance(v, int):
            v = F.Num(v)
        out[n] = v
    return out


def _term(v) -> F.Term:
    if isinstance(v, str):
        return F.Var(v)
    if isinstance(v, int):
        return F.Num(v)
    return v


def tuple_eq(u: Sequence, v: Sequence) -> F.Formula:
    return F.conj(F.Atom("=", _term(a), _term(b)) for a, b in zip(u, v))


def lex_less(u: Sequence, v: Sequence) -> F.Formula:
    """External lexicographic comparison of two tuples, in the base language."""
    parts = []
    for i in range(len(u)):
        prefix = [F.Atom("=", _term(u[j]), _term(v[j])) for j in range(i)]
        parts.append(F.conj(prefix + [F.Atom("<", _term(u[i]), _term(v[i]))]))
    return F.disj(parts)


# ------------------------------------------------------------- validation


@dataclass
class AxiomVerdict:
    axiom: str
    holds: bool | None
    sentence: str = ""
    error: str = ""


@dataclass
class ValidationReport:
    name: str
    verdicts: list[AxiomVerdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.holds is True for v in self.verdicts)

    def verdict(self, axiom: str) -> bool | None:
        for v in self.verdicts:
            if v.axiom == axiom:
                return v.holds
        raise KeyError(axiom)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "axioms": [{"axiom": v.axiom, "holds": v.holds, "error": v.error} for v in self.verdicts],
        }


def axiom_sentences(I: Interpretation) -> dict[str, F.Formula]:
    """The relativized linear-order axioms as closed sentences."""
    m = I.dim
    a, b, c, d = xs(m, "a"), xs(m, "b"), xs(m, "c"), xs(m, "d")
    D = I.domain_at
    out = {}
    if I.equality is not None:
        E = I.equal_at
        out["eq_reflexive"] = F.forall_many(a, F.Implies(D(a), E(a, a)))
        out["eq_symmetric"] = F.forall_many(a + b, F.Implies(F.conj([D(a), D(b), E(a, b)]), E(b, a)))
        out["eq_transitive"] = F.forall_many(
            a + b + c, F.Implies(F.conj([D(a), D(b), D(c), E(a, b), E(b, c)]), E(a, c))
        )
        out["eq_congruence"] = F.forall_many(
            a + b + c + d,
            F.Implies(
                F.conj([D(a), D(b), D(c), D(d), E(a, c), E(b, d), I.less_at(a, b)]),
                I.less_at(c, d),
            ),
        )
    out["irreflexive"] = F.forall_many(a, F.Implies(D(a), F.Not(I.less_at(a, a))))
    out["transitive"] = F.forall_many(
        a + b + c,
        F.Implies(F.conj([D(a), D(b), D(c), I.less_at(a, b), I.less_at(b, c)]), I.less_at(a, c)),
    )
    out["total"] = F.forall_many(
        a + b,
        F.Implies(F.And(D(a), D(b)), F.disj([I.less_at(a, b), I.less_at(b, a), I.equal_at(a, b)])),
    )
    return out


def validate(I: Interpretation, budget_nodes: int | None = None) -> ValidationReport:
    """Decide each order axiom; a resource failure is recorded, not raised."""
    report = ValidationReport(I.name)
    for axiom, sentence in axiom_sentences(I).items():
        try:
            verdict = Q.decide(sentence, budget_nodes)
            report.verdicts.append(AxiomVerdict(axiom, verdict, F.format_formula(sentence)))
        except Q.ResourceLimit as exc:
            report.verdicts.append(AxiomVerdict(axiom, None, F.format_formula(sentence), str(exc)))
    return report


# --------------------------------------------------------- fast evaluation


@functools.lru_cache(maxsize=256)
def _compiled(phi: F.Formula, names: tuple[str, ...]) -> Callable[..., bool]:
    if not F.is_quantifier_free(phi):
        phi = Q.eliminate(phi)
    return F.compile_formula(phi, names)


def domain_predicate(I: Interpretation) -> Callable[..., bool]:
    """Positional predicate ``D(*point)``; quantified formulas are eliminated once."""
    return _compiled(I.domain, tuple(xs(I.dim)))


def less_predicate(I: Interpretation) -> Callable[..., bool]:
    """Positional predicate ``less(*a, *b)``."""
    return _compiled(I.less, tuple(xs(I.dim) + xs(I.dim, "y")))


def internal_less(I: Interpretation, a: Sequence[int], b: Sequence[int]) -> bool:
    """Truth of ``a <+ b`` for domain points, decided on the instantiated sentence."""
    for p in (a, b):
        if len(p) != I.dim:
            raise ValueError(f"point {tuple(p)} has the wrong arity")
        if not Q.decide(I.domain_at([int(v) for v in p])):
            raise OutsideDomain(f"point {tuple(p)} is outside the domain")
    return Q.decide(I.less_at([int(v) for v in a], [int(v) for v in b]))


def box_points(I: Interpretation, bound: int) -> list[tuple[int, ...]]:
    D = domain_predicate(I)
    return [p for p in product(range(bound + 1), repeat=I.dim) if D(*p)]


def sort_points(I: Interpretation, points: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    less = less_predicate(I)

    def cmp(a, b):
        if a == b:
            return 0
        return -1 if less(*a, *b) else 1

    return sorted(points, key=functools.cmp_to_key(cmp))


@dataclass
class Enumeration:
    points: list[tuple[int, ...]]
    truncated: bool
    bound: int


def enumerate_ascending(I: Interpretation, count: int, bound: int) -> Enumeration:
    """The first ``count`` domain points of ``[0, bound]^m`` in internal order.

    ``truncated`` is set when the box holds fewer than ``count`` points.
    """
    pts = sort_points(I, box_points(I, bound))
    return Enumeration(pts[:count], len(pts) < count, bound)


def stable_prefix(I: Interpretation, count: int, bound: int = 8, max_bound: int = 1 << 14) -> Enumeration:
    """Grow the box until the first ``count`` points no longer change.

    A prefix that agrees between boxes ``B`` and ``2B`` is accepted as the
    true initial segment; boxes grow by doubling up to ``max_bound``.
    """
    prev = enumerate_ascending(I, count, bound)
    while bound * 2 <= max_bound:
        bound *= 2
        cur = enumerate_ascending(I, count, bound)
        if cur.points == prev.points and not cur.truncated:
            return cur
        if len(cur.points) == len(prev.points) == 0 and bound >= 64:
            return cur
        prev = cur
    return Enumeration(prev.points, True, bound)


# ------------------------------------------------------ galaxy predicates


def galaxy_parts(
    I: Interpretation, u: Sequence[str] | None = None, v: Sequence[str] | None = None
) -> tuple[F.Formula, str, F.Formula]:
    """``(D(u) & D(v), b, body)`` with ``T(u, v) = D(u) & D(v) & exists b. body``.

    ``body`` says every domain point strictly between u and v (in either
    direction) has all coordinates at most b; it is upward closed in b.
    """
    m = I.dim
    u = list(u) if u is not None else xs(m)
    v = list(v) if v is not None else xs(m, "y")
    avoid = set(u) | set(v) | F.all_vars(I.domain) | F.all_vars(I.less)
    bname = F.fresh_name("b", avoid)
    z = [F.fresh_name(f"z{i}", avoid | {bname}) for i in range(1, m + 1)]
    between = F.Or(
        F.And(I.less_at(u, z), I.less_at(z, v)),
        F.And(I.less_at(v, z), I.less_at(z, u)),
    )
    bounded = F.conj(F.Atom("<=", F.Var(zi), F.Var(bname)) for zi in z)
    body = F.forall_many(z, F.Implies(F.And(I.domain_at(z), between), bounded))
    return F.And(I.domain_at(u), I.domain_at(v)), bname, body


def same_galaxy_formula(I: Interpretation, u: Sequence[str] | None = None, v: Sequence[str] | None = None) -> F.Formula:
    """``T(u, v)``: both in the domain and only boundedly many points strictly between."""
    dom, bname, body = galaxy_parts(I, u, v)
    return F.And(dom, F.Exists(bname, body))


def lex_min_representative_formula(I: Interpretation, galaxy: F.Formula | None = None) -> F.Formula:
    """``D'(x)``: x is in the domain and lexicographically least in its galaxy.

    ``galaxy`` may supply an equivalent (e.g. already eliminated) version of
    ``same_galaxy_formula(I)`` over ``x1..xm, y1..ym``.
    """
    m = I.dim
    x, y = xs(m), xs(m, "y")
    T = galaxy if galaxy is not None else same_galaxy_formula(I)
    body = F.Implies(F.And(T, F.Not(tuple_eq(x, y))), lex_less(x, y))
    return F.And(I.domain_at(x), F.forall_many(y, body))
