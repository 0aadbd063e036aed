"""Quantifier elimination and decision procedure for (N, +).

Cooper-style elimination over Z with the naturals enforced by conjoining
``x >= 0`` at each step.  Internally formulas are negation-normal-form trees
over normalized literals:

* ``le``: ``sum a_i x_i + c <= 0``
* ``eq``: ``sum a_i x_i + c = 0``
* ``dv``: ``d | sum a_i x_i + c``
* ``nd``: ``not d | sum a_i x_i + c``

All variables range over N, which the literal simplifier uses as context
(e.g. ``x + 1 <= 0`` folds to false).
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from typing import Iterable, NamedTuple, Union

from . import formula as F
from .linalg import lcm

DEFAULT_BUDGET_NODES = int(os.environ.get("PRESBURGER_BUDGET_NODES", 10**6))


class ResourceLimit(RuntimeError):
    """The node-count budget was exhausted; the formula is too large, not wrong."""


class FreeVariablesError(ValueError):
    pass


class Lit(NamedTuple):
    kind: str  # "le" | "eq" | "dv" | "nd"
    mod: int
    coeffs: tuple  # sorted ((name, coef), ...)
    const: int

    def vars(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def coef(self, name: str) -> int:
        for v, c in self.coeffs:
            if v == name:
                return c
        return 0


# a node is True, False, a Lit, or ("and"|"or", frozenset(children))
Node = Union[bool, Lit, tuple]


# ------------------------------------------------------------ literals


def make_lit(kind: str, coeffs: dict, const: int, mod: int = 0) -> Lit | bool:
    """Normalized literal, or a boolean when it is constant under x >= 0."""
    items = [(v, c) for v, c in coeffs.items() if c]
    if kind in ("dv", "nd"):
        return _make_div(kind, mod, items, const)
    items.sort()
    if not items:
        return const <= 0 if kind == "le" else const == 0
    g = 0
    for _, c in items:
        g = math.gcd(g, c)
    if kind == "le":
        if g > 1:
            items = [(v, c // g) for v, c in items]
            const = -((-const) // g)
        if all(c >= 0 for _, c in items) and const > 0:
            return False
        if all(c <= 0 for _, c in items) and const <= 0:
            return True
        return Lit("le", 0, tuple(items), const)
    # eq
    if const % g:
        return False
    if g > 1:
        items = [(v, c // g) for v, c in items]
        const //= g
    if items[0][1] < 0:
        items = [(v, -c) for v, c in items]
        const = -const
    if all(c > 0 for _, c in items) and const > 0:
        return False
    return Lit("eq", 0, tuple(items), const)


def _make_div(kind: str, d: int, items: list, const: int) -> Lit | bool:
    items = [(v, c % d) for v, c in items]
    items = sorted((v, c) for v, c in items if c)
    const %= d
    if not items:
        holds = const == 0
        return holds if kind == "dv" else not holds
    g = d
    for _, c in items:
        g = math.gcd(g, c)
    g = math.gcd(g, const)
    if g > 1:
        d //= g
        items = [(v, c // g) for v, c in items]
        const //= g
    if d == 1:
        return kind == "dv"
    if kind == "nd" and d == 2:
        kind, const = "dv", (const + 1) % 2
    neg = tuple((v, (-c) % d) for v, c in items)
    if neg < tuple(items):
        items = list(neg)
        const = (-const) % d
    return Lit(kind, d, tuple(items), const)


def negate_lit(lit: Lit) -> Node:
    coeffs = dict(lit.coeffs)
    if lit.kind == "le":
        return make_lit("le", {v: -c for v, c in coeffs.items()}, 1 - lit.const)
    if lit.kind == "eq":
        lo = make_lit("le", coeffs, lit.const + 1)
        hi = make_lit("le", {v: -c for v, c in coeffs.items()}, 1 - lit.const)
        return mk_or([lo, hi])
    other = "nd" if lit.kind == "dv" else "dv"
    return make_lit(other, coeffs, lit.const, lit.mod)


def subst_lit(lit: Lit, name: str, coeffs: dict, const: int) -> Lit | bool:
    """Replace ``name`` by ``sum coeffs + const`` inside ``lit``."""
    a = lit.coef(name)
    if not a:
        return lit
    new = {v: c for v, c in lit.coeffs if v != name}
    for v, c in coeffs.items():
        new[v] = new.get(v, 0) + a * c
    return make_lit(lit.kind, new, lit.const + a * const, lit.mod)


def eval_lit(lit: Lit, sigma) -> bool:
    s = lit.const + sum(c * sigma[v] for v, c in lit.coeffs)
    if lit.kind == "le":
        return s <= 0
    if lit.kind == "eq":
        return s == 0
    if lit.kind == "dv":
        return s % lit.mod == 0
    return s % lit.mod != 0


# --------------------------------------------------------------- nodes


def mk_and(children: Iterable[Node]) -> Node:
    out = set()
    for c in children:
        if c is True:
            continue
        if c is False:
            return False
        if isinstance(c, tuple) and not isinstance(c, Lit) and c[0] == "and":
            out.update(c[1])
        else:
            out.add(c)
    if not out:
        return True
    if len(out) == 1:
        return next(iter(out))
    lits = [c for c in out if isinstance(c, Lit)]
    if len(lits) > 1:
        simplified = simplify_conj(lits)
        if simplified is None:
            return False
        out = (out - set(lits)) | simplified
        if not out:
            return True
        if len(out) == 1:
            return next(iter(out))
    return ("and", frozenset(out))


def mk_or(children: Iterable[Node]) -> Node:
    out = set()
    for c in children:
        if c is False:
            continue
        if c is True:
            return True
        if isinstance(c, tuple) and not isinstance(c, Lit) and c[0] == "or":
            out.update(c[1])
        else:
            out.add(c)
    if not out:
        return False
    if len(out) == 1:
        return next(iter(out))
    lits = [c for c in out if isinstance(c, Lit) and c.kind != "eq"]
    if len(lits) > 1:
        # a clause is valid iff the conjunction of its negations is unsat
        negs = [negate_lit(l) for l in lits]
        if all(isinstance(n, Lit) for n in negs) and simplify_conj(negs) is None:
            return True
    return ("or", frozenset(out))


def negate(node: Node) -> Node:
    if node is True:
        return False
    if node is False:
        return True
    if isinstance(node, Lit):
        return negate_lit(node)
    tag, children = node
    if tag == "and":
        return mk_or(negate(c) for c in children)
    return mk_and(negate(c) for c in children)


_VARS_CACHE: dict = {}


def node_vars(node: Node) -> frozenset[str]:
    if isinstance(node, bool):
        return frozenset()
    if isinstance(node, Lit):
        return node.vars()
    cached = _VARS_CACHE.get(node)
    if cached is None:
        cached = frozenset().union(*(node_vars(c) for c in node[1]))
        if len(_VARS_CACHE) > 200_000:
            _VARS_CACHE.clear()
        _VARS_CACHE[node] = cached
    return cached


def node_size(node: Node) -> int:
    if isinstance(node, (bool, Lit)):
        return 1
    return 1 + sum(node_size(c) for c in node[1])


def eval_node(node: Node, sigma) -> bool:
    if isinstance(node, bool):
        return node
    if isinstance(node, Lit):
        return eval_lit(node, sigma)
    tag, children = node
    if tag == "and":
        return all(eval_node(c, sigma) for c in children)
    return any(eval_node(c, sigma) for c in children)


# -------------------------------------------------- conjunction solver


def simplify_conj(lits: Iterable[Lit]) -> frozenset | None:
    """Cheap simplification of a conjunction of literals; None when unsat.

    Propagates single-variable equalities, merges bounds on the same linear
    form, and checks congruences against equalities and each other.
    """
    work = list(lits)
    fixed_eqs: list[Lit] = []
    while True:
        fixed = next((l for l in work if l.kind == "eq" and len(l.coeffs) == 1), None)
        if fixed is None:
            break
        name = fixed.coeffs[0][0]
        value = -fixed.const  # coefficient is 1 after normalization
        if value < 0:
            return None
        rest = []
        for l in work:
            if l == fixed:
                continue
            s = subst_lit(l, name, {}, value)
            if s is False:
                return None
            if s is not True:
                rest.append(s)
        fixed_eqs.append(fixed)
        work = rest
    merged = _merge(work)
    return None if merged is None else frozenset(merged) | frozenset(fixed_eqs)


def _merge(lits: list[Lit]) -> list[Lit] | None:
    bounds: dict = {}
    eqs: dict = {}
    divs: dict = {}
    others: list = []
    for l in lits:
        if l.kind == "le":
            key, sign = _key(l.coeffs)
            lo, hi = bounds.get(key, (None, None))
            if sign > 0:  # key.x <= -const
                v = -l.const
                hi = v if hi is None else min(hi, v)
            else:  # -key.x + const <= 0  ->  key.x >= const
                v = l.const
                lo = v if lo is None else max(lo, v)
            bounds[key] = (lo, hi)
        elif l.kind == "eq":
            key = l.coeffs
            v = -l.const
            if eqs.get(key, v) != v:
                return None
            eqs[key] = v
        else:
            others.append(l)
    out: list[Lit] = []
    for key, v in eqs.items():
        lo, hi = bounds.pop(key, (None, None))
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return None
        out.append(Lit("eq", 0, key, -v))
    for key, (lo, hi) in bounds.items():
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            if lo == hi:
                eq = make_lit("eq", dict(key), -lo)
                if eq is False:
                    return None
                if eq is not True:
                    out.append(eq)
                continue
        if hi is not None:
            l = make_lit("le", dict(key), -hi)
            if l is False:
                return None
            if l is not True:
                out.append(l)
        if lo is not None:
            l = make_lit("le", {v: -c for v, c in key}, lo)
            if l is False:
                return None
            if l is not True:
                out.append(l)
    for l in others:
        key = (l.mod, l.coeffs)
        # check against equalities on the same linear form
        resolved = False
        for ek, ev in eqs.items():
            if len(ek) == len(l.coeffs) and all(
                v1 == v2 and (c1 - c2) % l.mod == 0 for (v1, c1), (v2, c2) in zip(ek, l.coeffs)
            ):
                holds = (ev + l.const) % l.mod == 0
                if holds != (l.kind == "dv"):
                    return None
                resolved = True
                break
            if len(ek) == len(l.coeffs) and all(
                v1 == v2 and (c1 + c2) % l.mod == 0 for (v1, c1), (v2, c2) in zip(ek, l.coeffs)
            ):
                holds = (-ev + l.const) % l.mod == 0
                if holds != (l.kind == "dv"):
                    return None
                resolved = True
                break
        if resolved:
            continue
        entry = divs.setdefault(key, [None, set()])
        if l.kind == "dv":
            if entry[0] is not None and entry[0] != l.const:
                return None
            entry[0] = l.const
        else:
            entry[1].add(l.const)
    for (mod, coeffs), (pos, negs) in divs.items():
        if pos is not None:
            if pos in negs:
                return None
            out.append(Lit("dv", mod, coeffs, pos))
        else:
            if len(negs) == mod:
                return None
            if len(negs) == mod - 1:
                (missing,) = set(range(mod)) - negs
                out.append(Lit("dv", mod, coeffs, missing))
            else:
                out.extend(Lit("nd", mod, coeffs, c) for c in negs)
    return out


def _key(coeffs: tuple) -> tuple[tuple, int]:
    if coeffs[0][1] > 0:
        return coeffs, 1
    return tuple((v, -c) for v, c in coeffs), -1


# ---------------------------------------------------- AST <-> nodes


def _term_lin(t: F.Term) -> tuple[dict, int]:
    coeffs: dict = defaultdict(int)
    const = 0
    stack = [(t, 1)]
    while stack:
        u, k = stack.pop()
        if isinstance(u, F.Var):
            coeffs[u.name] += k
        elif isinstance(u, F.Num):
            const += k * u.value
        elif isinstance(u, F.Add):
            stack.append((u.left, k))
            stack.append((u.right, k))
        else:
            stack.append((u.operand, k * u.coef))
    return dict(coeffs), const


def _diff(left: F.Term, right: F.Term) -> tuple[dict, int]:
    lc, lk = _term_lin(left)
    rc, rk = _term_lin(right)
    out = dict(lc)
    for v, c in rc.items():
        out[v] = out.get(v, 0) - c
    return out, lk - rk


def atom_node(atom: F.Atom) -> Node:
    coeffs, const = _diff(atom.left, atom.right)
    neg = {v: -c for v, c in coeffs.items()}
    rel = atom.rel
    if rel == "=":
        return make_lit("eq", coeffs, const)
    if rel == "!=":
        return mk_or([make_lit("le", coeffs, const + 1), make_lit("le", neg, -const + 1)])
    if rel == "<":
        return make_lit("le", coeffs, const + 1)
    if rel == "<=":
        return make_lit("le", coeffs, const)
    if rel == ">":
        return make_lit("le", neg, -const + 1)
    if rel == ">=":
        return make_lit("le", neg, -const)
    return make_lit("dv", coeffs, const, atom.modulus)


def qf_node(phi: F.Formula) -> Node:
    """NNF node of a quantifier-free formula."""
    if isinstance(phi, F.Const):
        return phi.value
    if isinstance(phi, F.Atom):
        return atom_node(phi)
    if isinstance(phi, F.Not):
        return negate(qf_node(phi.body))
    if isinstance(phi, F.And):
        return mk_and([qf_node(phi.left), qf_node(phi.right)])
    if isinstance(phi, F.Or):
        return mk_or([qf_node(phi.left), qf_node(phi.right)])
    if isinstance(phi, F.Implies):
        return mk_or([negate(qf_node(phi.left)), qf_node(phi.right)])
    raise ValueError("quantified formula where a quantifier-free one was expected")


def lit_formula(lit: Lit) -> F.Formula:
    pos = {v: c for v, c in lit.coeffs if c > 0}
    neg = {v: -c for v, c in lit.coeffs if c < 0}
    kp, kn = (lit.const, 0) if lit.const >= 0 else (0, -lit.const)
    left, right = F.linear_term(pos, kp), F.linear_term(neg, kn)
    if lit.kind == "le":
        if not pos and kp == 0:
            return F.Atom(">=", right, left)
        return F.Atom("<=", left, right)
    if lit.kind == "eq":
        return F.Atom("=", left, right)
    atom = F.Atom("==", left, right, lit.mod)
    return atom if lit.kind == "dv" else F.Not(atom)


def node_formula(node: Node) -> F.Formula:
    if node is True:
        return F.TRUE
    if node is False:
        return F.FALSE
    if isinstance(node, Lit):
        return lit_formula(node)
    tag, children = node
    parts = sorted((node_formula(c) for c in children), key=F.format_formula)
    return F.conj(parts) if tag == "and" else F.disj(parts)


# ----------------------------------------------------------- DNF / CNF


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceLimit(f"node budget {self.limit} exceeded")


def dnf(node: Node, budget: _Budget | None = None) -> list[frozenset]:
    """Disjunctive normal form as a list of pruned literal sets."""
    if budget is None:
        budget = _Budget(DEFAULT_BUDGET_NODES)
    return _dnf(node, budget)


def _dnf(node: Node, budget: _Budget) -> list[frozenset]:
    if node is True:
        return [frozenset()]
    if node is False:
        return []
    if isinstance(node, Lit):
        return [frozenset((node,))]
    tag, children = node
    if tag == "or":
        out: list[frozenset] = []
        for c in children:
            out.extend(_dnf(c, budget))
        return _subsume(out)
    parts = sorted((_dnf(c, budget) for c in children), key=len)
    acc = [frozenset()]
    for part in parts:
        nxt = set()
        for a in acc:
            for b in part:
                if b <= a:
                    nxt.add(a)
                    continue
                s = simplify_conj(a | b)
                if s is not None:
                    nxt.add(s)
        budget.spend(len(nxt) + 1)
        acc = _subsume(list(nxt))
        if not acc:
            return []
    return acc


def _subsume(conjs: list[frozenset]) -> list[frozenset]:
    uniq = sorted(set(conjs), key=len)
    if len(uniq) > 400:
        return uniq
    kept: list[frozenset] = []
    for c in uniq:
        if not any(k <= c for k in kept):
            kept.append(c)
    return kept


def dnf_node(conjs: list[frozenset]) -> Node:
    return mk_or(mk_and(c) for c in conjs)


# ------------------------------------------------------- elimination


def _elim_conj(x: str, lits: list[Lit], budget: _Budget) -> list[frozenset]:
    """Exists x over N of a conjunction whose literals all mention x."""
    lits = list(lits) + [Lit("le", 0, ((x, -1),), 0)]
    coefs = []
    for l in lits:
        a = l.coef(x)
        if l.kind in ("dv", "nd") and a > l.mod // 2:
            a -= l.mod
        coefs.append(a)
    m = lcm(*[abs(a) for a in coefs])
    scaled = []  # (kind, mod, rest-coeffs dict, const, sign of x)
    for l, a in zip(lits, coefs):
        f = m // abs(a)
        rest = {v: c * f for v, c in l.coeffs if v != x}
        sign = 1 if a > 0 else -1
        mod = l.mod * f if l.kind in ("dv", "nd") else 0
        scaled.append((l.kind, mod, rest, l.const * f, sign))
    if m > 1:
        scaled.append(("dv", m, {}, 0, 1))

    def instantiate(coeffs: dict, const: int, skip=None) -> frozenset | None:
        out = []
        for idx, (kind, mod, rest, k, sign) in enumerate(scaled):
            if idx == skip:
                continue
            new = dict(rest)
            for v, c in coeffs.items():
                new[v] = new.get(v, 0) + sign * c
            lit = make_lit(kind, new, k + sign * const, mod)
            if lit is False:
                return None
            if lit is not True:
                out.append(lit)
        budget.spend(len(out) + 1)
        return simplify_conj(out)

    for idx, (kind, mod, rest, k, sign) in enumerate(scaled):
        if kind == "eq":
            # sign*x + rest + k = 0  ->  x = -sign*(rest + k)
            c = {v: -sign * a for v, a in rest.items()}
            res = instantiate(c, -sign * k)
            return [] if res is None else [res]

    lowers, uppers, divs = [], [], []
    for kind, mod, rest, k, sign in scaled:
        if kind == "le":
            if sign < 0:  # -x + rest + k <= 0  ->  x >= rest + k
                lowers.append((rest, k))
            else:  # x + rest + k <= 0  ->  x <= -(rest + k)
                uppers.append(({v: -a for v, a in rest.items()}, -k))
        else:
            divs.append(mod)
    delta = lcm(*divs) if divs else 1
    out: list[frozenset] = []
    if not uppers or not lowers:
        only_divs = [s for s in scaled if s[0] in ("dv", "nd")]
        for j in range(delta):
            lits_j = []
            ok = True
            for kind, mod, rest, k, sign in only_divs:
                lit = make_lit(kind, dict(rest), k + sign * j, mod)
                if lit is False:
                    ok = False
                    break
                if lit is not True:
                    lits_j.append(lit)
            if ok:
                s = simplify_conj(lits_j)
                if s is not None:
                    out.append(s)
        budget.spend(delta)
        return _subsume(out)
    if len(lowers) <= len(uppers):
        for rest, k in lowers:
            for j in range(delta):
                res = instantiate(rest, k + j)
                if res is not None:
                    out.append(res)
    else:
        for rest, k in uppers:
            for j in range(delta):
                res = instantiate(rest, k - j)
                if res is not None:
                    out.append(res)
    return _subsume(out)


DNF_LIMIT = 4096


def _dnf_estimate(node: Node, cap: int = DNF_LIMIT + 1) -> int:
    """Upper bound on the number of DNF conjunctions, saturating at ``cap``."""
    if isinstance(node, (bool, Lit)):
        return 1
    tag, children = node
    total = 0 if tag == "or" else 1
    for c in children:
        k = _dnf_estimate(c, cap)
        total = total + k if tag == "or" else total * k
        if total >= cap:
            return cap
    return total


def _scale_for(x: str, lit: Lit, m: int) -> tuple:
    """``lit`` rescaled so that x appears as ``sign * x'`` with ``x' = m x``."""
    a = lit.coef(x)
    if lit.kind in ("dv", "nd") and a > lit.mod // 2:
        a -= lit.mod
    f = m // abs(a)
    rest = {v: c * f for v, c in lit.coeffs if v != x}
    mod = lit.mod * f if lit.kind in ("dv", "nd") else 0
    return lit.kind, mod, rest, lit.const * f, 1 if a > 0 else -1


def _x_coef(x: str, lit: Lit) -> int:
    a = lit.coef(x)
    if lit.kind in ("dv", "nd") and a > lit.mod // 2:
        a -= lit.mod
    return a


def _collect_lits(node: Node, x: str, out: set) -> None:
    if isinstance(node, bool):
        return
    if isinstance(node, Lit):
        if node.coef(x):
            out.add(node)
        return
    if x in node_vars(node):
        for c in node[1]:
            _collect_lits(c, x, out)


def _elim_nnf(x: str, node: Node, budget: _Budget) -> Node:
    """Exists x over N without a DNF: test the least-witness candidates.

    All x-literals are scaled to unit coefficient on ``x' = m x``.  Because
    ``x >= 0`` bounds every witness from below, the least witness is some
    lower bound ``t`` (or 0) plus an offset below the period ``delta``.
    """
    lits: set = set()
    _collect_lits(node, x, lits)
    m = lcm(*[abs(_x_coef(x, l)) for l in lits]) if lits else 1
    scaled = {l: _scale_for(x, l, m) for l in lits}
    mods = [s[1] for s in scaled.values() if s[0] in ("dv", "nd")]
    delta = lcm(*(mods + [m]))
    bounds = {((), 0)}
    for kind, mod, rest, k, sign in scaled.values():
        if kind == "le" and sign < 0:
            bounds.add((tuple(sorted(rest.items())), k))
        elif kind == "eq":
            bounds.add((tuple(sorted((v, -sign * c) for v, c in rest.items())), -sign * k))
    disjuncts = []
    for t, t0 in sorted(bounds):
        tdict = dict(t)
        for j in range(delta):
            const = t0 + j
            memo: dict = {}

            def inst(n: Node) -> Node:
                if isinstance(n, bool):
                    return n
                if isinstance(n, Lit):
                    if n not in scaled:
                        return n
                    kind, mod, rest, k, sign = scaled[n]
                    new = dict(rest)
                    for v, c in tdict.items():
                        new[v] = new.get(v, 0) + sign * c
                    return make_lit(kind, new, k + sign * const, mod)
                hit = memo.get(n)
                if hit is None:
                    if x not in node_vars(n):
                        hit = n
                    else:
                        kids = [inst(c) for c in n[1]]
                        hit = mk_and(kids) if n[0] == "and" else mk_or(kids)
                    memo[n] = hit
                return hit

            side = [make_lit("le", {v: -c for v, c in tdict.items()}, -const)]
            if m > 1:
                side.append(make_lit("dv", dict(tdict), const, m))
            disjuncts.append(mk_and(side + [inst(node)]))
            budget.spend(len(memo) + 1)
    return mk_or(disjuncts)


def limit_node(x: str, node: Node) -> Node:
    """Quantifier-free equivalent of "node holds for all large x in some residue class".

    When ``node`` is upward closed in x (a larger x never breaks it) this
    is exactly ``exists x. node``, without any bound candidates: order
    literals are replaced by their value as x grows, congruences are kept
    with x fixed to each residue below the common modulus.
    """
    lits: set = set()
    _collect_lits(node, x, lits)
    mods = [l.mod for l in lits if l.kind in ("dv", "nd")]
    delta = lcm(*mods) if mods else 1
    out = []
    for j in range(delta):
        memo: dict = {}

        def inst(n: Node) -> Node:
            if isinstance(n, bool):
                return n
            if isinstance(n, Lit):
                a = n.coef(x)
                if not a:
                    return n
                if n.kind == "le":
                    return a < 0
                if n.kind == "eq":
                    return False
                return subst_lit(n, x, {}, j)
            hit = memo.get(n)
            if hit is None:
                if x not in node_vars(n):
                    hit = n
                else:
                    kids = [inst(c) for c in n[1]]
                    hit = mk_and(kids) if n[0] == "and" else mk_or(kids)
                memo[n] = hit
            return hit

        out.append(inst(node))
    return mk_or(out)


def elim_exists(x: str, node: Node, budget: _Budget) -> Node:
    if x not in node_vars(node):
        return node
    if isinstance(node, Lit):
        return dnf_node(_elim_conj(x, [node], budget))
    tag, children = node
    if tag == "or":
        return mk_or(elim_exists(x, c, budget) for c in children)
    free = [c for c in children if x not in node_vars(c)]
    bound = [c for c in children if x in node_vars(c)]
    if len(bound) == 1 and not isinstance(bound[0], Lit):
        inner = elim_exists(x, bound[0], budget)
        return mk_and(free + [inner])
    if _dnf_estimate(mk_and(bound)) > DNF_LIMIT:
        return mk_and(free + [_elim_nnf(x, mk_and(bound), budget)])
    conjs = _dnf(mk_and(bound), budget)
    groups: dict = defaultdict(list)
    for c in conjs:
        with_x = frozenset(l for l in c if x in l.vars())
        groups[with_x].append(c - with_x)
    disjuncts = []
    for with_x, rests in groups.items():
        rest_node = mk_or(mk_and(r) for r in rests)
        if rest_node is False:
            continue
        if with_x:
            ex = dnf_node(_elim_conj(x, list(with_x), budget))
        else:
            ex = True
        disjuncts.append(mk_and([ex, rest_node]))
    budget.spend(len(disjuncts) + 1)
    return mk_and(free + [mk_or(disjuncts)])


def elim_forall(x: str, node: Node, budget: _Budget) -> Node:
    return negate(elim_exists(x, negate(node), budget))


def _qe(phi: F.Formula, budget: _Budget) -> Node:
    if isinstance(phi, F.Const):
        return phi.value
    if isinstance(phi, F.Atom):
        return atom_node(phi)
    if isinstance(phi, F.Not):
        return negate(_qe(phi.body, budget))
    if isinstance(phi, F.And):
        left = _qe(phi.left, budget)
        if left is False:
            return False
        return mk_and([left, _qe(phi.right, budget)])
    if isinstance(phi, F.Or):
        left = _qe(phi.left, budget)
        if left is True:
            return True
        return mk_or([left, _qe(phi.right, budget)])
    if isinstance(phi, F.Implies):
        left = _qe(phi.left, budget)
        if left is False:
            return True
        return mk_or([negate(left), _qe(phi.right, budget)])
    body = _qe(phi.body, budget)
    if isinstance(phi, F.Exists):
        return elim_exists(phi.var, body, budget)
    return elim_forall(phi.var, body, budget)


def eliminate_node(phi: F.Formula, budget_nodes: int | None = None) -> Node:
    budget = _Budget(DEFAULT_BUDGET_NODES if budget_nodes is None else budget_nodes)
    return _qe(phi, budget)


# --------------------------------------------------------- public API


def eliminate(phi: F.Formula, budget_nodes: int | None = None) -> F.Formula:
    """Equivalent quantifier-free formula with the same free variables.

    Atoms of the result are ``<=``, ``=``, congruences and negated
    congruences over linear terms.
    """
    return node_formula(eliminate_node(phi, budget_nodes))


def decide(phi: F.Formula, budget_nodes: int | None = None) -> bool:
    """Truth of a sentence in (N, +)."""
    fv = F.free_vars(phi)
    if fv:
        raise FreeVariablesError(f"not a sentence; free variables {sorted(fv)}")
    if F.is_quantifier_free(phi):
        return F.evaluate(phi, {})
    node = eliminate_node(phi, budget_nodes)
    if not isinstance(node, bool):
        # constant literals always fold, so this is unreachable for sentences
        return eval_node(node, {})
    return node


def simplify(phi: F.Formula) -> F.Formula:
    """Fold constants and collapse trivially true/false atoms."""
    return node_formula(qf_node(phi))


def holds(phi: F.Formula, sigma) -> bool:
    """Truth of any formula under an assignment of its free variables."""
    if F.is_quantifier_free(phi):
        return F.evaluate(phi, sigma)
    closed = F.substitute_many(phi, {k: F.Num(v) for k, v in sigma.items()})
    return decide(closed)
