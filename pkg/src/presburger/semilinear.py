"""Semilinear sets: lattices, conversion from formulas, disjoint fundamental
decomposition, dimension, membership and bounded enumeration.

A lattice (linear set) is ``{c + sum k_i p_i : k_i in N}``; it is
fundamental when the periods are linearly independent.  Every definable
subset of N^m is a finite union of lattices, and can be rewritten as a
finite *disjoint* union of fundamental lattices; the largest period count
in such a decomposition is the set's dimension.

Routes:

* ``from_formula`` puts the formula in DNF and solves each conjunction by
  minimal-solution enumeration (particular solutions become bases,
  homogeneous ones periods).
* ``ito_decompose`` splits each lattice along a rational dependency of its
  periods until the periods are independent, then subtracts earlier pieces.
  A difference ``r \\ P`` is computed in the coordinate space of ``r``: the
  coefficients that land in ``P`` form a quantifier-free set, its
  complement is split into disjoint conjunctions and each conjunction is
  decomposed by a half-open triangulation of its homogenized cone.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import formula as F
from . import qelim as Q
from .hilbert import minimal_solutions
from .linalg import det as linalg_det
from .linalg import (
    dot,
    hermite_lower,
    integer_kernel,
    lcm,
    left_inverse,
    nullspace,
    primitive,
    rank,
    rref,
    solve,
)
from .qelim import Lit

DEFAULT_BUDGET_PIECES = 10**4

Vector = tuple[int, ...]


class PieceBudgetExceeded(RuntimeError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    base: Vector
    periods: tuple[Vector, ...] = ()
    natural: bool = True

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(int(v) for v in self.base))
        object.__setattr__(self, "periods", tuple(tuple(int(v) for v in p) for p in self.periods))
        m = len(self.base)
        if any(len(p) != m for p in self.periods):
            raise ArityMismatch("period arity differs from base arity")
        if self.natural:
            if any(v < 0 for v in self.base):
                raise ValueError(f"base {self.base} leaves N^m")
            for p in self.periods:
                if any(a + b < 0 for a, b in zip(self.base, p)):
                    raise ValueError(f"base + period {p} leaves N^m")

    @property
    def arity(self) -> int:
        return len(self.base)

    @property
    def dim(self) -> int:
        return len(self.periods)

    def is_fundamental(self) -> bool:
        return rank(self.periods) == len(self.periods) if self.periods else True

    def __contains__(self, v) -> bool:
        return member(self, v)

    def to_json(self) -> dict:
        return {"base": list(self.base), "periods": [list(p) for p in self.periods]}


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of lattices.  ``disjoint`` records that the lattices are
    already pairwise disjoint and fundamental (set by constructions that
    guarantee it), which lets decomposition skip the subtraction pass."""

    arity: int
    lattices: tuple[Lattice, ...] = ()
    disjoint: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lattices", tuple(self.lattices))
        for L in self.lattices:
            if L.arity != self.arity:
                raise ArityMismatch(f"lattice of arity {L.arity} in a set of arity {self.arity}")

    def __contains__(self, v) -> bool:
        return any(member(L, v) for L in self.lattices)


@dataclass(frozen=True)
class Decomposition:
    """Pairwise disjoint fundamental lattices."""

    arity: int
    pieces: tuple[Lattice, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for L in self.pieces:
            if L.arity != self.arity:
                raise ArityMismatch("piece arity mismatch")

    @property
    def empty(self) -> bool:
        return not self.pieces

    @property
    def dimension(self) -> int:
        return dimension(self)

    def as_set(self) -> SemilinearSet:
        return SemilinearSet(self.arity, self.pieces)

    def __contains__(self, v) -> bool:
        return any(member(L, v) for L in self.pieces)

    def to_json(self) -> dict:
        return {"arity": self.arity, "pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, data: dict | str, natural: bool = True) -> "Decomposition":
        if isinstance(data, str):
            data = json.loads(data)
        pieces = [
            Lattice(tuple(p["base"]), tuple(tuple(q) for q in p.get("periods", [])), natural=natural)
            for p in data["pieces"]
        ]
        return cls(int(data["arity"]), tuple(pieces))


# ------------------------------------------------------------ membership


def member(L: Lattice, v: Sequence[int]) -> bool:
    """Whether ``v = base + sum k_i p_i`` for some ``k`` in N^k."""
    v = tuple(int(x) for x in v)
    if len(v) != L.arity:
        raise ArityMismatch(f"point of arity {len(v)} for a lattice of arity {L.arity}")
    diff = [a - b for a, b in zip(v, L.base)]
    if not L.periods:
        return not any(diff)
    if L.is_fundamental():
        cols = [[p[i] for p in L.periods] for i in range(L.arity)]
        sol = solve(cols, diff)
        if sol is None:
            return False
        return all(x.denominator == 1 and x >= 0 for x in sol)
    rows = [[p[i] for p in L.periods] for i in range(L.arity)]
    particular, _ = minimal_solutions(rows, diff, len(L.periods))
    return bool(particular)


# ------------------------------------------------------- from formulas


def from_formula(phi: F.Formula, names: Sequence[str], method: str = "polyhedral") -> SemilinearSet:
    """Semilinear representation of ``{v in N^m : phi(names := v)}``.

    Quantified input is eliminated first.  ``method="polyhedral"`` (default)
    returns disjoint fundamental lattices; ``method="hilbert"`` returns the
    classical minimal-solution lattices, which may overlap and have
    dependent periods.
    """
    names = list(names)
    extra = F.free_vars(phi) - set(names)
    if extra:
        raise ValueError(f"free variables {sorted(extra)} not among {names}")
    node = Q.eliminate_node(phi) if not F.is_quantifier_free(phi) else Q.qf_node(phi)
    if method == "hilbert":
        return from_node(node, names)
    if method != "polyhedral":
        raise ValueError(f"unknown method {method!r}")
    pieces = []
    for conj in disjoint_dnf(Q.dnf(node)):
        pieces.extend(decompose_conjunction(conj, names))
    return SemilinearSet(len(names), tuple(pieces), disjoint=True)


def from_node(node: Q.Node, names: Sequence[str]) -> SemilinearSet:
    names = list(names)
    lattices: list[Lattice] = []
    seen = set()
    for conj in Q.dnf(node):
        for L in _conj_lattices(conj, names):
            if L not in seen:
                seen.add(L)
                lattices.append(L)
    return SemilinearSet(len(names), tuple(lattices))


def disjoint_dnf(conjs: Sequence[frozenset]) -> list[list[Lit]]:
    """Rewrite a DNF so that no point satisfies two of its conjunctions."""
    out: list[list[Lit]] = []
    earlier: list[frozenset] = []
    for conj in conjs:
        cases = [sorted(conj)]
        for e in earlier:
            nxt = []
            for case in cases:
                if Q.simplify_conj(list(case) + list(e)) is None:
                    nxt.append(case)  # already disjoint from e
                    continue
                done: list[Lit] = []
                for lit in sorted(e):
                    for neg in _negation_cases(lit):
                        s = Q.simplify_conj(case + done + neg)
                        if s is not None:
                            nxt.append(sorted(s))
                    done.append(lit)
            cases = nxt
            if not cases:
                break
        out.extend(cases)
        earlier.append(conj)
    return out


def _split_nd(lits: Iterable[Lit]) -> list[list[Lit]]:
    """Expand negated congruences into disjoint positive residue cases."""
    fixed, options = [], []
    for l in lits:
        if l.kind == "nd":
            alts = []
            for r in range(1, l.mod):
                lit = Q.make_lit("dv", dict(l.coeffs), l.const - r, l.mod)
                if lit is not False:
                    alts.append(lit)
            options.append(alts)
        else:
            fixed.append(l)
    cases = []
    for combo in itertools.product(*options):
        case = list(fixed) + [c for c in combo if c is not True]
        cases.append(case)
    return cases


def _conj_lattices(conj: frozenset, names: list[str]) -> list[Lattice]:
    index = {n: i for i, n in enumerate(names)}
    m = len(names)
    out = []
    for case in _split_nd(conj):
        rows, rhs = [], []
        aux = 0
        specs = []
        for l in case:
            row = [0] * m
            for v, c in l.coeffs:
                row[index[v]] = c
            specs.append((l, row))
            if l.kind in ("le", "dv"):
                aux += 1
        ncols = m + aux
        col = m
        for l, row in specs:
            full = row + [0] * aux
            if l.kind == "le":  # a.x + s = -c
                full[col] = 1
                col += 1
                rows.append(full)
                rhs.append(-l.const)
            elif l.kind == "eq":
                rows.append(full)
                rhs.append(-l.const)
            else:  # d | a.x + c  with a, c reduced to [0, d):  a'.x + c' - d w = 0
                d = l.mod
                full = [x % d for x in row] + [0] * aux
                full[col] = -d
                col += 1
                rows.append(full)
                rhs.append(-(l.const % d))
        particular, hom = minimal_solutions(rows, rhs, ncols)
        periods = sorted({h[:m] for h in hom if any(h[:m])})
        for p in particular:
            out.append(Lattice(p[:m], tuple(periods)))
    return out


# -------------------------------------------------- fundamental pieces


def fundamentalize(L: Lattice) -> list[Lattice]:
    """Split a lattice into (possibly overlapping) fundamental lattices."""
    out: dict[Lattice, None] = {}
    _fundamentalize(L, out)
    return list(out)


def _fundamentalize(L: Lattice, out: dict) -> None:
    periods = sorted({p for p in L.periods if any(p)})
    r = rank(periods)
    if r == len(periods):
        out.setdefault(Lattice(L.base, tuple(periods), L.natural), None)
        return
    simplex = _spanning_simplex(periods, r)
    if simplex is not None:
        for g in _coset_translates(periods, simplex):
            base = tuple(b + x for b, x in zip(L.base, g))
            out.setdefault(Lattice(base, tuple(sorted(simplex)), L.natural), None)
        return
    cols = [[p[i] for p in periods] for i in range(L.arity)]
    relation = primitive(nullspace(cols, len(periods))[0])
    pos = [j for j, g in enumerate(relation) if g > 0]
    neg = [j for j, g in enumerate(relation) if g < 0]
    side = min((pos, neg), key=lambda s: (sum(abs(relation[j]) for j in s), len(s)))
    for j in side:
        rest = tuple(p for i, p in enumerate(periods) if i != j)
        for t in range(abs(relation[j])):
            base = tuple(b + t * x for b, x in zip(L.base, periods[j]))
            _fundamentalize(Lattice(base, rest, L.natural), out)


def _coords(simplex, v) -> list[Fraction] | None:
    return solve([[p[i] for p in simplex] for i in range(len(v))], list(v))


def _spanning_simplex(periods, r: int, max_tries: int = 5000):
    """``r`` independent periods whose cone contains every period, if any."""
    for combo in itertools.islice(itertools.combinations(periods, r), max_tries):
        if rank(list(combo)) < r:
            continue
        if all((c := _coords(combo, p)) is not None and min(c) >= 0 for p in periods):
            return list(combo)
    return None


def _coset_translates(periods, simplex) -> list[Vector]:
    """Translates ``g`` with ``N(periods) = union of g + N(simplex)``.

    Each remaining period ``h`` has ``k h`` in ``N(simplex)`` for ``k`` the
    common denominator of its coordinates, so only ``t h`` with ``t < k``
    matter.  Translates above another one are dropped as we go.
    """
    arity, r = len(simplex[0]), len(simplex)
    # coordinates through r independent rows, scaled to integers by det
    rows = next(c for c in itertools.combinations(range(arity), r)
                if rank([[p[i] for i in c] for p in simplex]) == r)
    adj, det = _integer_inverse([[p[i] for p in simplex] for i in rows])

    def scaled(v):
        return tuple(sum(a * v[i] for a, i in zip(row, rows)) for row in adj)

    G: dict[Vector, Vector] = {(0,) * arity: (0,) * r}
    for h in periods:
        if h in simplex:
            continue
        w = scaled(h)
        k = det // math.gcd(det, *w)
        if k == 1:
            continue
        grown = {}
        for g, wg in G.items():
            for t in range(k):
                grown[tuple(a + t * b for a, b in zip(g, h))] = tuple(a + t * b for a, b in zip(wg, w))
        classes: dict[Vector, list] = {}
        for g, wg in sorted(grown.items(), key=lambda kv: sum(kv[1])):
            cls = classes.setdefault(tuple(x % det for x in wg), [])
            if not any(all(a >= b for a, b in zip(wg, wf)) for _, wf in cls):
                cls.append((g, wg))
        G = {g: wg for cls in classes.values() for g, wg in cls}
    return list(G)


# ------------------------------------------- polyhedral decomposition


def decompose_conjunction(lits: Sequence[Lit], names: Sequence[str]) -> list[Lattice]:
    """Disjoint fundamental lattices covering a conjunction over N^k."""
    names = list(names)
    lits = [l for l in lits]
    if not names:
        return [Lattice((), ())] if all(Q.eval_lit(l, {}) for l in lits) else []
    out = []
    for case in _split_nd(lits):
        out.extend(_decompose_positive(case, names))
    return out


def _decompose_positive(lits: list[Lit], names: list[str]) -> list[Lattice]:
    k = len(names)
    D = k + 1
    index = {n: i for i, n in enumerate(names)}

    def row_of(l: Lit) -> list[int]:
        r = [0] * D
        for v, c in l.coeffs:
            r[index[v]] = c
        r[k] = l.const
        return r

    ineqs = [[int(i == j) for j in range(D)] for i in range(D)]  # x >= 0, t >= 0
    eqs, congs = [], []
    for l in lits:
        r = row_of(l)
        if l.kind == "le":
            ineqs.append([-a for a in r])
        elif l.kind == "eq":
            eqs.append(r)
        else:
            congs.append((l.mod, r))
    rays = _extreme_rays(ineqs, eqs, D)
    if not rays or all(r[k] == 0 for r in rays):
        return []
    # implicit equalities: restrict to the linear span of the cone
    eqs = eqs + [primitive(n) for n in nullspace(rays, D)]
    basis = nullspace(eqs, D)
    d = len(basis)
    coords_of = _coordinate_map(basis, D)
    ray_coords = [coords_of(r) for r in rays]
    simplices = _triangulate(ray_coords, list(range(len(rays))))
    lattice_basis = _lattice_basis(eqs, congs, D)
    w = _generic_point(ray_coords, simplices)
    result = []
    for simplex in simplices:
        gens = []
        for idx in simplex:
            g = list(rays[idx])
            s = 1
            for mod, h in congs:
                val = dot(h, g) % mod
                s = lcm(s, mod // math.gcd(mod, val)) if val else s
            gens.append([s * x for x in g])
        mu_w = solve(_columns([ray_coords[i] for i in simplex], d), w)
        closed = [x > 0 for x in mu_w]
        result.extend(_slice_points(gens, lattice_basis, closed, k))
    return result


def _columns(vectors: Sequence[Sequence], n: int) -> list[list]:
    return [[v[i] for v in vectors] for i in range(n)]


def _coordinate_map(basis: list[list[Fraction]], D: int):
    cols = _columns(basis, D)

    def coords(v: Sequence) -> list[Fraction]:
        sol = solve(cols, list(v))
        if sol is None:
            raise ValueError("vector outside the subspace")
        return sol

    return coords


def _extreme_rays(ineqs: list[list[int]], eqs: list[list[int]], D: int) -> list[tuple[int, ...]]:
    re = rank(eqs) if eqs else 0
    d = D - re
    if d <= 0:
        return []
    rays = set()
    for combo in itertools.combinations(range(len(ineqs)), d - 1):
        system = eqs + [ineqs[i] for i in combo]
        ns = nullspace(system, D)
        if len(ns) != 1:
            continue
        v = ns[0]
        for cand in (v, [-x for x in v]):
            if all(dot(g, cand) >= 0 for g in ineqs):
                p = tuple(primitive(cand))
                if any(p):
                    rays.add(p)
                break
    return sorted(rays)


def _triangulate(coords: list[list[Fraction]], idx: list[int]) -> list[list[int]]:
    """Pulling triangulation of the cone spanned by ``coords[idx]``."""
    vecs = [coords[i] for i in idx]
    r = rank(vecs)
    if len(idx) == r:
        return [list(idx)]
    apex = idx[0]
    out = []
    for facet in _facets(coords, idx, r):
        if apex in facet:
            continue
        for simplex in _triangulate(coords, facet):
            out.append([apex] + simplex)
    return out


def _facets(coords, idx: list[int], r: int) -> list[list[int]]:
    vecs = [coords[i] for i in idx]
    # coordinates inside the span of the rays
    red, pivots = rref(_columns(vecs, len(vecs[0])), len(vecs))
    span_basis = [vecs[p] for p in pivots]
    n = len(vecs[0])
    sol_cols = _columns(span_basis, n)
    local = [solve(sol_cols, v) for v in vecs]
    facets = set()
    if r == 1:
        return []
    for combo in itertools.combinations(range(len(idx)), r - 1):
        sub = [local[i] for i in combo]
        if rank(sub) != r - 1:
            continue
        normal = nullspace(sub, r)[0]
        vals = [dot(normal, v) for v in local]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            facet = tuple(idx[i] for i, x in enumerate(vals) if x == 0)
            facets.add(facet)
    return [list(f) for f in sorted(facets)]


def _generic_point(coords, simplices, attempts: int = 200) -> list[Fraction]:
    rng = random.Random(0x5EED)
    d = len(coords[0])
    n = len(coords)
    for attempt in range(attempts):
        weights = [rng.randint(1, 1000 * (attempt + 1)) for _ in range(n)]
        w = [sum(Fraction(weights[i]) * coords[i][j] for i in range(n)) for j in range(d)]
        ok = True
        for simplex in simplices:
            mu = solve(_columns([coords[i] for i in simplex], d), w)
            if mu is None or any(x == 0 for x in mu):
                ok = False
                break
        if ok:
            return w
    raise RuntimeError("no generic interior point found")


def _lattice_basis(eqs, congs, D: int) -> list[list[int]]:
    """Z-basis of {z in Z^D : eqs z = 0, h.z = 0 mod d for (d, h) in congs}."""
    nc = len(congs)
    rows = [list(r) + [0] * nc for r in eqs]
    for i, (mod, h) in enumerate(congs):
        row = list(h) + [0] * nc
        row[D + i] = -mod
        rows.append(row)
    kernel = integer_kernel(rows, D + nc)
    return [v[:D] for v in kernel]


def _integer_inverse(M: list[list[int]]) -> tuple[list[list[int]], int]:
    """``(adj, det)`` with ``M @ adj == det * I`` and ``det > 0``."""
    d = len(M)
    aug = [list(M[i]) + [int(i == j) for j in range(d)] for i in range(d)]
    red, _ = rref(aug, 2 * d)
    inv = [row[d:] for row in red]
    det = abs(linalg_det(M))
    return [[int(x * det) for x in row] for row in inv], det


def _slice_points(gens, lattice_basis, closed, k: int, chunk: int = 1 << 16) -> list[Lattice]:
    """Fundamental lattices covering the ``t = 1`` slice of a half-open cone."""
    d = len(gens)
    basis_cols = _columns(lattice_basis, k + 1)
    G = [[int(x) for x in solve(basis_cols, g)] for g in gens]
    H = hermite_lower(G)
    adj, det = _integer_inverse(_columns(G, d))
    adj = np.asarray(adj, dtype=np.int64)
    gen_arr = np.asarray(gens, dtype=np.int64)
    open_mask = np.asarray([not c for c in closed])
    taus = [g[k] for g in gens]
    periods = tuple(tuple(g[:k]) for g, t in zip(gens, taus) if t == 0)
    out = []
    ranges = [range(H[i][i]) for i in range(d)]
    reps = itertools.product(*ranges)
    while True:
        block = np.asarray(list(itertools.islice(reps, chunk)), dtype=np.int64)
        if not len(block):
            break
        # numerators of the fractional coordinates, in (0, det] on open facets
        num = np.mod(block @ adj.T, det)
        num = np.where((num == 0) & open_mask, det, num)
        pts = num @ gen_arr  # det * q
        t = pts[:, k]
        keep = t <= det
        for row in pts[keep]:
            q = [int(x) // det for x in row]
            if q[k] == 1:
                out.append(Lattice(tuple(q[:k]), periods))
                continue
            for j, tj in enumerate(taus):
                if tj == 1:
                    out.append(Lattice(tuple(q[i] + gens[j][i] for i in range(k)), periods))
    return out


# ------------------------------------------------------ set difference


def _preimage_literals(r: Lattice, P: Lattice, names: list[str]) -> list[Lit] | bool:
    """Literals over r's coefficients describing ``{lam : base + Q lam in P}``."""
    m = r.arity
    k = r.dim
    delta = [a - b for a, b in zip(r.base, P.base)]
    Qcols = r.periods
    lits: list = []
    if P.periods:
        L = left_inverse(P.periods)  # k' x m
        # mu = L (delta + Q lam)
        proj = [[sum(P.periods[j][i] * L[j][c] for j in range(len(P.periods))) for c in range(m)] for i in range(m)]
        R = [[Fraction(int(i == c)) - proj[i][c] for c in range(m)] for i in range(m)]
    else:
        L = []
        R = [[Fraction(int(i == c)) for c in range(m)] for i in range(m)]
    # consistency: R (delta + Q lam) = 0
    cons_rows = []
    for row in R:
        coeffs = [sum(row[i] * Qcols[j][i] for i in range(m)) for j in range(k)]
        const = sum(row[i] * delta[i] for i in range(m))
        cons_rows.append(coeffs + [const])
    red, _ = rref(cons_rows, k + 1) if cons_rows else ([], [])
    for row in red:
        ints = primitive(row)
        lit = Q.make_lit("eq", {names[j]: ints[j] for j in range(k)}, ints[k])
        lits.append(lit)
    for row in L:
        coeffs = [sum(row[i] * Qcols[j][i] for i in range(m)) for j in range(k)]
        const = sum(row[i] * delta[i] for i in range(m))
        den = lcm(*[Fraction(x).denominator for x in coeffs + [const]])
        ints = [int(x * den) for x in coeffs + [const]]
        cdict = {names[j]: ints[j] for j in range(k)}
        if den > 1:
            lits.append(Q.make_lit("dv", cdict, ints[k], den))
        lits.append(Q.make_lit("le", {v: -c for v, c in cdict.items()}, -ints[k]))
    if any(l is False for l in lits):
        return False
    return [l for l in lits if l is not True]


def difference(r: Lattice, P: Lattice) -> list[Lattice]:
    """Disjoint fundamental pieces of ``r \\ P`` (both fundamental)."""
    if not r.periods:
        return [] if member(P, r.base) else [r]
    if not P.periods and not member(r, P.base):
        return [r]
    names = [f"l{j}" for j in range(r.dim)]
    lits = _preimage_literals(r, P, names)
    if lits is False:
        return [r]
    simplified = Q.simplify_conj(lits) if lits else frozenset()
    if simplified is None:
        return [r]
    lits = sorted(simplified)
    if not lits:
        return []
    if not decompose_conjunction(lits, names):
        return [r]
    pieces = []
    prefix: list[Lit] = []
    for lit in lits:
        for neg_case in _negation_cases(lit):
            case = prefix + neg_case
            s = Q.simplify_conj(case)
            if s is None:
                continue
            pieces.extend(decompose_conjunction(sorted(s), names))
        prefix.append(lit)
    return [_push_forward(r, p) for p in pieces]


def _negation_cases(lit: Lit) -> list[list[Lit]]:
    neg = Q.negate_lit(lit)
    if neg is True:
        return [[]]
    if neg is False:
        return []
    if isinstance(neg, Lit):
        return [[neg]]
    return [[c] for c in neg[1]]  # eq: two disjoint strict sides


def _push_forward(r: Lattice, piece: Lattice) -> Lattice:
    m = r.arity

    def image(lam, with_base):
        v = list(r.base) if with_base else [0] * m
        for j, c in enumerate(lam):
            for i in range(m):
                v[i] += c * r.periods[j][i]
        return tuple(v)

    return Lattice(image(piece.base, True), tuple(image(p, False) for p in piece.periods), r.natural)


# ----------------------------------------------------- decomposition


def lattice_literals(L: Lattice, names: Sequence[str]) -> list[Lit] | bool:
    """Quantifier-free description of a fundamental lattice in N^m."""
    m = L.arity
    whole = Lattice((0,) * m, tuple(tuple(int(i == j) for i in range(m)) for j in range(m)))
    return _preimage_literals(whole, L, list(names))


def ito_decompose(
    S: SemilinearSet, budget_pieces: int = DEFAULT_BUDGET_PIECES, method: str = "cones"
) -> Decomposition:
    """Disjoint fundamental decomposition with the same point set as ``S``.

    Lattices are first split into fundamental ones.  ``method="cones"``
    describes each by literals and runs the disjoint-DNF/cone route;
    ``method="greedy"`` subtracts earlier pieces one lattice at a time.
    """
    if S.disjoint and all(L.is_fundamental() for L in S.lattices):
        if len(S.lattices) > budget_pieces:
            raise PieceBudgetExceeded(f"more than {budget_pieces} pieces")
        return Decomposition(S.arity, S.lattices)
    fund: list[Lattice] = []
    seen = set()
    for L in S.lattices:
        for f in fundamentalize(L):
            if f not in seen:
                seen.add(f)
                fund.append(f)
    fund.sort(key=lambda L: (-L.dim, L.base, L.periods))
    pieces: list[Lattice] = []
    if method == "cones":
        names = [f"v{i}" for i in range(S.arity)]
        conjs = []
        for L in fund:
            lits = lattice_literals(L, names)
            if lits is not False:
                conjs.append(frozenset(lits))
        for conj in disjoint_dnf(conjs):
            pieces.extend(decompose_conjunction(conj, names))
            if len(pieces) > budget_pieces:
                raise PieceBudgetExceeded(f"more than {budget_pieces} pieces")
        return Decomposition(S.arity, tuple(pieces))
    if method != "greedy":
        raise ValueError(f"unknown method {method!r}")
    for L in fund:
        remaining = [L]
        for P in pieces:
            if not remaining:
                break
            remaining = [piece for rem in remaining for piece in difference(rem, P)]
        pieces.extend(remaining)
        if len(pieces) > budget_pieces:
            raise PieceBudgetExceeded(f"more than {budget_pieces} pieces")
    return Decomposition(S.arity, tuple(pieces))


def decompose_formula(phi: F.Formula, names: Sequence[str], budget_pieces: int = DEFAULT_BUDGET_PIECES) -> Decomposition:
    return ito_decompose(from_formula(phi, names), budget_pieces)


def dimension(D: Decomposition) -> int:
    """Largest period count among the pieces; 0 for the empty set."""
    return max((p.dim for p in D.pieces), default=0)


def is_finite(S: SemilinearSet | Decomposition) -> bool:
    D = S if isinstance(S, Decomposition) else ito_decompose(S)
    return all(p.dim == 0 for p in D.pieces)


def cardinality(D: Decomposition) -> int | float:
    if any(p.dim for p in D.pieces):
        return float("inf")
    return len(D.pieces)


# ------------------------------------------------------- enumeration


def lattice_points(L: Lattice, lo: Sequence[int], hi: Sequence[int]) -> set[Vector]:
    """Points of ``L`` inside the box ``lo <= v <= hi``."""
    m = L.arity
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    base = np.asarray(L.base, dtype=np.int64)
    if not L.periods:
        return {L.base} if np.all(base >= lo) and np.all(base <= hi) else set()
    if all(all(x >= 0 for x in p) for p in L.periods):
        pts = _dfs_points(L, tuple(hi.tolist()))
        return {p for p in pts if all(a >= b for a, b in zip(p, lo))}
    periods = [p for p in L.periods]
    if rank(periods) < len(periods):
        raise ValueError("box enumeration of non-fundamental integer lattices is unsupported")
    Linv = left_inverse(periods)
    ranges = []
    for row in Linv:
        # coefficient = row . (v - base), v in box
        low = high = Fraction(0)
        for i in range(m):
            a, b = row[i] * (int(lo[i]) - L.base[i]), row[i] * (int(hi[i]) - L.base[i])
            low += min(a, b)
            high += max(a, b)
        lo_c = max(0, int(np.floor(float(low))) - 1)
        hi_c = int(np.ceil(float(high))) + 1
        if hi_c < lo_c:
            return set()
        ranges.append(np.arange(lo_c, hi_c + 1, dtype=np.int64))
    grids = np.meshgrid(*ranges, indexing="ij")
    coeffs = np.stack([g.ravel() for g in grids], axis=1)
    P = np.asarray(periods, dtype=np.int64)
    pts = base + coeffs @ P
    mask = np.all((pts >= lo) & (pts <= hi), axis=1)
    return {tuple(int(x) for x in row) for row in pts[mask]}


def _dfs_points(L: Lattice, hi: tuple) -> set[Vector]:
    periods = [p for p in L.periods if any(p)]
    out = set()
    if any(b > h for b, h in zip(L.base, hi)):
        return out
    stack = [(L.base, 0)]
    while stack:
        v, start = stack.pop()
        out.add(v)
        for j in range(start, len(periods)):
            w = tuple(a + b for a, b in zip(v, periods[j]))
            if all(a <= h for a, h in zip(w, hi)):
                stack.append((w, j))
    return out


def enumerate_points(S: SemilinearSet | Decomposition, bound: int) -> list[Vector]:
    """Members inside ``[0, bound]^m``, sorted lexicographically."""
    lattices = S.pieces if isinstance(S, Decomposition) else S.lattices
    m = S.arity
    out: set[Vector] = set()
    for L in lattices:
        out |= lattice_points(L, [0] * m, [bound] * m)
    return sorted(out)


def point_multiset(S: SemilinearSet | Decomposition, lo: Sequence[int], hi: Sequence[int]) -> dict[Vector, int]:
    """Coverage count of each box point; used to certify disjointness."""
    lattices = S.pieces if isinstance(S, Decomposition) else S.lattices
    counts: dict[Vector, int] = {}
    for L in lattices:
        for p in lattice_points(L, lo, hi):
            counts[p] = counts.get(p, 0) + 1
    return counts
