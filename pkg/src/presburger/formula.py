"""Terms and formulas of Presburger arithmetic over the naturals.

The language is {=, +, <, <=, congruence mod n} with numerals and scalar
multiples.  Values are immutable frozen dataclasses, so formulas can be
hashed, cached and shared freely.

Concrete syntax::

    formula := 'forall' IDENT '.' formula | 'exists' IDENT '.' formula | implic
    implic  := disj ('->' implic)?
    disj    := conj ('|' conj)*
    conj    := neg ('&' neg)*
    neg     := '!' neg | '(' formula ')' | atom | 'true' | 'false'
    atom    := term REL term | term '==' term 'mod' NUM
    term    := factor ('+' factor)*
    factor  := NUM '*' IDENT | NUM | IDENT
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

MAX_NUMERAL = 2**63 - 1

RELATIONS = ("=", "!=", "<", "<=", ">", ">=")
KEYWORDS = frozenset({"forall", "exists", "mod", "true", "false"})


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NumeralOverflow(OverflowError):
    pass


class UnboundVariable(KeyError):
    pass


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("numerals are natural numbers")
        if self.value > MAX_NUMERAL:
            raise NumeralOverflow(f"numeral {self.value} exceeds {MAX_NUMERAL}")

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Mul:
    """``coef * operand``; the n-fold iterated sum of ``operand``."""

    coef: int
    operand: "Term"

    def __post_init__(self):
        if self.coef < 0:
            raise ValueError("coefficients are natural numbers")
        if self.coef > MAX_NUMERAL:
            raise NumeralOverflow(f"coefficient {self.coef} exceeds {MAX_NUMERAL}")

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, Num, Add, Mul]


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self) -> str:
        return format_formula(self)


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Atom:
    """``left REL right``; ``rel == "=="`` is congruence modulo ``modulus``."""

    rel: str
    left: Term
    right: Term
    modulus: int | None = None

    def __post_init__(self):
        if self.rel == "==":
            if self.modulus is None or self.modulus < 1:
                raise ValueError("congruence modulus must be >= 1")
            if self.modulus > MAX_NUMERAL:
                raise NumeralOverflow(f"modulus {self.modulus} exceeds {MAX_NUMERAL}")
        elif self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        elif self.modulus is not None:
            raise ValueError("only congruence atoms carry a modulus")

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Const, Atom, Not, And, Or, Implies, Exists, Forall]
Assignment = Mapping[str, int]


# ------------------------------------------------------- constructors


def var(name: str) -> Var:
    return Var(name)


def num(value: int) -> Num:
    return Num(value)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result: Formula | None = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TRUE if result is None else result


def disj(parts: Iterable[Formula]) -> Formula:
    result: Formula | None = None
    for p in parts:
        result = p if result is None else Or(result, p)
    return FALSE if result is None else result


def exists_many(names: Sequence[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Exists(name, body)
    return body


def forall_many(names: Sequence[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Forall(name, body)
    return body


def term_sum(terms: Sequence[Term]) -> Term:
    if not terms:
        return Num(0)
    result = terms[0]
    for t in terms[1:]:
        result = Add(result, t)
    return result


def linear_term(coeffs: Mapping[str, int], const: int = 0) -> Term:
    """Term for ``sum coeffs[v]*v + const`` with non-negative coefficients."""
    parts: list[Term] = []
    for name in sorted(coeffs):
        c = coeffs[name]
        if c < 0:
            raise ValueError("linear_term needs non-negative coefficients")
        if c == 1:
            parts.append(Var(name))
        elif c > 1:
            parts.append(Mul(c, Var(name)))
    if const or not parts:
        parts.append(Num(const))
    return term_sum(parts)


# ------------------------------------------------------------ queries


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Num):
        return frozenset()
    if isinstance(t, Add):
        return term_vars(t.left) | term_vars(t.right)
    return term_vars(t.operand)


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Const):
        return frozenset()
    if isinstance(phi, Atom):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    return free_vars(phi.body) - {phi.var}


def bound_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Const, Atom)):
        return frozenset()
    if isinstance(phi, Not):
        return bound_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return bound_vars(phi.left) | bound_vars(phi.right)
    return bound_vars(phi.body) | {phi.var}


def all_vars(phi: Formula) -> frozenset[str]:
    return free_vars(phi) | bound_vars(phi)


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Const, Atom)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def size(phi: Formula) -> int:
    """Number of formula nodes (atoms count as one)."""
    if isinstance(phi, (Const, Atom)):
        return 1
    if isinstance(phi, Not):
        return 1 + size(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return 1 + size(phi.left) + size(phi.right)
    return 1 + size(phi.body)


# --------------------------------------------------------- evaluation


def eval_term(t: Term, sigma: Assignment) -> int:
    if isinstance(t, Var):
        try:
            return sigma[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Add):
        return eval_term(t.left, sigma) + eval_term(t.right, sigma)
    return t.coef * eval_term(t.operand, sigma)


def _holds(rel: str, a: int, b: int, modulus: int | None) -> bool:
    if rel == "=":
        return a == b
    if rel == "!=":
        return a != b
    if rel == "<":
        return a < b
    if rel == "<=":
        return a <= b
    if rel == ">":
        return a > b
    if rel == ">=":
        return a >= b
    return (a - b) % modulus == 0


def evaluate(phi: Formula, sigma: Assignment) -> bool:
    """Truth of a quantifier-free formula in (N, +) under ``sigma``."""
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atom):
        return _holds(phi.rel, eval_term(phi.left, sigma), eval_term(phi.right, sigma), phi.modulus)
    if isinstance(phi, Not):
        return not evaluate(phi.body, sigma)
    if isinstance(phi, And):
        return evaluate(phi.left, sigma) and evaluate(phi.right, sigma)
    if isinstance(phi, Or):
        return evaluate(phi.left, sigma) or evaluate(phi.right, sigma)
    if isinstance(phi, Implies):
        return (not evaluate(phi.left, sigma)) or evaluate(phi.right, sigma)
    raise ValueError("evaluate needs a quantifier-free formula; use qelim.decide")


def _py_term(t: Term) -> str:
    if isinstance(t, Var):
        return "v_" + t.name
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Add):
        return f"({_py_term(t.left)} + {_py_term(t.right)})"
    return f"({t.coef} * {_py_term(t.operand)})"


def _chain(phi: Formula) -> list[Formula]:
    """Operands of a maximal chain of the same binary connective, in order."""
    kind = type(phi)
    out, stack = [], [phi]
    while stack:
        p = stack.pop()
        if type(p) is kind:
            stack.append(p.right)
            stack.append(p.left)
        else:
            out.append(p)
    return out


def _py_formula(phi: Formula) -> str:
    if isinstance(phi, Const):
        return repr(phi.value)
    if isinstance(phi, Atom):
        left, right = _py_term(phi.left), _py_term(phi.right)
        if phi.rel == "==":
            return f"(({left} - {right}) % {phi.modulus} == 0)"
        op = "==" if phi.rel == "=" else phi.rel
        return f"({left} {op} {right})"
    if isinstance(phi, Not):
        return f"(not {_py_formula(phi.body)})"
    if isinstance(phi, (And, Or)):
        # flatten chains so long conjunctions do not nest deeply
        word = " and " if isinstance(phi, And) else " or "
        return "(" + word.join(_py_formula(p) for p in _chain(phi)) + ")"
    if isinstance(phi, Implies):
        return f"((not {_py_formula(phi.left)}) or {_py_formula(phi.right)})"
    raise ValueError("only quantifier-free formulas can be compiled")


def compile_formula(phi: Formula, names: Sequence[str]) -> Callable[..., bool]:
    """Positional Python predicate for a quantifier-free formula.

    Used by brute-force oracles that evaluate the same formula millions of
    times.  ``names`` fixes the argument order and must cover ``free_vars``.
    """
    missing = free_vars(phi) - set(names)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    args = ", ".join("v_" + n for n in names)
    return eval(f"lambda {args}: {_py_formula(phi)}", {"__builtins__": {}})


# ------------------------------------------------------- substitution


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Num):
        return t
    if isinstance(t, Add):
        return Add(subst_term(t.left, mapping), subst_term(t.right, mapping))
    return Mul(t.coef, subst_term(t.operand, mapping))


_fresh_counter = itertools.count()


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = re.sub(r"_\d+$", "", base)
    i = 1
    while f"{stem}_{i}" in avoid:
        i += 1
    return f"{stem}_{i}"


def substitute_many(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    mapping = {k: v for k, v in mapping.items()}
    if not mapping:
        return phi
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.rel, subst_term(phi.left, mapping), subst_term(phi.right, mapping), phi.modulus)
    if isinstance(phi, Not):
        return Not(substitute_many(phi.body, mapping))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(substitute_many(phi.left, mapping), substitute_many(phi.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != phi.var}
    fv = free_vars(phi.body)
    inner = {k: v for k, v in inner.items() if k in fv}
    if not inner:
        return phi
    incoming = frozenset().union(*(term_vars(v) for v in inner.values()))
    name, body = phi.var, phi.body
    if name in incoming:
        new = fresh_name(name, incoming | all_vars(body) | set(inner))
        body = substitute_many(body, {name: Var(new)})
        name = new
    return type(phi)(name, substitute_many(body, inner))


def substitute(phi: Formula, name: str, value: int | Term) -> Formula:
    """Replace free occurrences of ``name`` by a numeral (or term)."""
    term = Num(value) if isinstance(value, int) else value
    return substitute_many(phi, {name: term})


def rename(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    return substitute_many(phi, {k: Var(v) for k, v in mapping.items()})


def substitute_point(phi: Formula, names: Sequence[str], point: Sequence[int]) -> Formula:
    return substitute_many(phi, {n: Num(int(v)) for n, v in zip(names, point)})


# ------------------------------------------------------------ printing


def _flatten_add(t: Term) -> list[Term]:
    if isinstance(t, Add):
        return _flatten_add(t.left) + _flatten_add(t.right)
    return [t]


def _format_factor(t: Term) -> list[str]:
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, Num):
        return [str(t.value)]
    if isinstance(t, Mul):
        op = t.operand
        if isinstance(op, Var):
            return [f"{t.coef}*{op.name}"]
        if isinstance(op, Num):
            return [str(t.coef * op.value)]
        if isinstance(op, Mul):
            return _format_factor(Mul(t.coef * op.coef, op.operand))
        # the grammar has no parenthesised terms: distribute
        return [s for part in _flatten_add(op) for s in _format_factor(Mul(t.coef, part))]
    return [s for part in _flatten_add(t) for s in _format_factor(part)]


def format_term(t: Term) -> str:
    return " + ".join(s for part in _flatten_add(t) for s in _format_factor(part))


# precedence: quantifiers/implication lowest, then |, &, unary
_PREC = {Exists: 0, Forall: 0, Implies: 1, Or: 2, And: 3}


def _prec(phi: Formula) -> int:
    return _PREC.get(type(phi), 4)


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Atom):
        left, right = format_term(phi.left), format_term(phi.right)
        if phi.rel == "==":
            return f"{left} == {right} mod {phi.modulus}"
        return f"{left} {phi.rel} {right}"
    if isinstance(phi, Not):
        body = format_formula(phi.body)
        return f"!{body}" if _prec(phi.body) == 4 and not isinstance(phi.body, Atom) else f"!({body})"
    if isinstance(phi, (Exists, Forall)):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        return f"{kw} {phi.var}. {format_formula(phi.body)}"
    if isinstance(phi, Implies):
        left = _wrap(phi.left, _prec(phi.left) <= 1)
        right = _wrap(phi.right, _prec(phi.right) < 1)
        return f"{left} -> {right}"
    op, p = (" | ", 2) if isinstance(phi, Or) else (" & ", 3)
    left = _wrap(phi.left, _prec(phi.left) < p)
    right = _wrap(phi.right, _prec(phi.right) <= p)
    return f"{left}{op}{right}"


def _wrap(phi: Formula, parens: bool) -> str:
    s = format_formula(phi)
    return f"({s})" if parens else s


# ------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[0-9]+)|(?P<ident>[a-z][a-z0-9_]*)|"
    r"(?P<op>->|==|!=|<=|>=|[=<>!&|().*+]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[stripped]!r}", stripped)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.next()
        if val != value or kind == "num":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "ident" and val in ("forall", "exists"):
            self.next()
            k2, name, p2 = self.next()
            if k2 != "ident" or name in KEYWORDS:
                raise ParseError("expected a variable after quantifier", p2)
            self.expect(".")
            body = self.formula()
            return Forall(name, body) if val == "forall" else Exists(name, body)
        return self.implic()

    def implic(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.implic_or_quant())
        return left

    def implic_or_quant(self) -> Formula:
        # a quantifier may start the right-hand side of an implication
        kind, val, _ = self.peek()
        if kind == "ident" and val in ("forall", "exists"):
            return self.formula()
        return self.implic()

    def disj(self) -> Formula:
        result = self.conj()
        while self.peek()[1] == "|":
            self.next()
            result = Or(result, self.conj())
        return result

    def conj(self) -> Formula:
        result = self.neg()
        while self.peek()[1] == "&":
            self.next()
            result = And(result, self.neg())
        return result

    def neg(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.next()
            return Not(self.neg())
        if kind == "op" and val == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "ident" and val in ("true", "false"):
            self.next()
            return TRUE if val == "true" else FALSE
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        kind, val, pos = self.next()
        if val == "==" and kind == "op":
            right = self.term()
            k2, v2, p2 = self.next()
            if v2 != "mod" or k2 != "ident":
                raise ParseError("expected 'mod' in congruence", p2)
            k3, v3, p3 = self.next()
            if k3 != "num":
                raise ParseError("expected a modulus", p3)
            n = int(v3)
            if n == 0:
                raise ParseError("congruence modulus must be >= 1", p3)
            if n > MAX_NUMERAL:
                raise NumeralOverflow(f"modulus {n} exceeds {MAX_NUMERAL}")
            return Atom("==", left, right, n)
        if kind != "op" or val not in RELATIONS:
            raise ParseError(f"expected a relation, found {val or 'end of input'!r}", pos)
        return Atom(val, left, self.term())

    def term(self) -> Term:
        result = self.factor()
        while self.peek()[1] == "+":
            self.next()
            result = Add(result, self.factor())
        return result

    def factor(self) -> Term:
        kind, val, pos = self.next()
        if kind == "num":
            value = int(val)
            if value > MAX_NUMERAL:
                raise NumeralOverflow(f"numeral {val} exceeds {MAX_NUMERAL}")
            if self.peek()[1] == "*":
                self.next()
                k2, name, p2 = self.next()
                if k2 != "ident" or name in KEYWORDS:
                    raise ParseError("expected a variable after '*'", p2)
                return Mul(value, Var(name))
            return Num(value)
        if kind == "ident" and val not in KEYWORDS:
            return Var(val)
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    """Parse the concrete syntax into a formula AST."""
    p = _Parser(text)
    phi = p.formula()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    return phi


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    return t
