"""Counting solutions of ``A lam = u`` over N^n and fitting the count as a
piecewise polynomial in ``u``.

When the count is finite everywhere it is a piecewise polynomial of degree
at most ``n - rank(A)``.  ``fit_piecewise`` checks this on samples: it
groups samples by residue class and by the side of each hyperplane spanned
by columns of ``A``, then interpolates each group exactly over Q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import formula as F
from . import qelim as Q
from .hilbert import minimal_solutions
from .linalg import det, lcm, nullspace, primitive, rank, rref

INFINITE = math.inf


class FitFailure(RuntimeError):
    """No exact fit within the degree bound: the piecewise-polynomial claim failed."""


class EnumerationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CountingInstance:
    A: tuple[tuple[int, ...], ...]
    u: tuple[int, ...]

    def __post_init__(self):
        A = tuple(tuple(int(a) for a in row) for row in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        if A and len({len(r) for r in A}) != 1:
            raise ValueError("ragged matrix")
        if len(self.u) != len(A):
            raise ValueError(f"u has length {len(self.u)} but A has {len(A)} rows")

    @property
    def d(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0


def parse_matrix(text: str) -> list[list[int]]:
    """``"1,1;0,2"`` -> ``[[1, 1], [0, 2]]``."""
    rows = [r for r in text.split(";") if r.strip()]
    out = [[int(x) for x in r.split(",")] for r in rows]
    if len({len(r) for r in out}) > 1:
        raise ValueError("ragged matrix")
    return out


def parse_vector(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _system(A, rhs, lam: Sequence[str]) -> F.Formula:
    atoms = []
    for row, b in zip(A, rhs):
        pos = {v: a for v, a in zip(lam, row) if a > 0}
        neg = {v: -a for v, a in zip(lam, row) if a < 0}
        # row . lam = b  <=>  pos + max(-b, 0) = neg + max(b, 0)
        atoms.append(F.Atom("=", F.linear_term(pos, max(-b, 0)), F.linear_term(neg, max(b, 0))))
    return F.conj(atoms)


def kernel_sentence(A: Sequence[Sequence[int]]) -> F.Formula:
    """``exists lam != 0 in N^n with A lam = 0``."""
    n = len(A[0]) if A else 0
    lam = [f"l{i}" for i in range(n)]
    nonzero = F.Atom(">=", F.term_sum([F.Var(v) for v in lam]), F.Num(1))
    return F.exists_many(lam, F.And(nonzero, _system(A, [0] * len(A), lam)))


def solvable_sentence(A: Sequence[Sequence[int]], u: Sequence[int]) -> F.Formula:
    n = len(A[0]) if A else 0
    lam = [f"l{i}" for i in range(n)]
    return F.exists_many(lam, _system(A, u, lam))


def has_unbounded_kernel(A: Sequence[Sequence[int]]) -> bool:
    """Decided: does ``A lam = 0`` have a nonzero solution over N?"""
    return Q.decide(kernel_sentence(A))


def count_solutions(
    A: Sequence[Sequence[int]] | CountingInstance,
    u: Sequence[int] | None = None,
    max_candidates: int = 2_000_000,
) -> int | float:
    """``|{lam in N^n : A lam = u}|``, or ``math.inf``.

    The count is infinite exactly when the system is solvable and its
    homogeneous part has a nonzero solution (both decided by sentences).
    Otherwise every solution is minimal, so the count is the number of
    minimal solutions.
    """
    if isinstance(A, CountingInstance):
        A, u = A.A, A.u
    A = [list(r) for r in A]
    u = list(u)
    n = len(A[0]) if A else 0
    if n == 0:
        return 1 if all(b == 0 for b in u) else 0
    if has_unbounded_kernel(A):
        return INFINITE if Q.decide(solvable_sentence(A, u)) else 0
    try:
        particular, hom = minimal_solutions(A, u, n, max_candidates)
    except RuntimeError as exc:
        raise EnumerationBudgetExceeded(str(exc)) from exc
    if hom:
        raise AssertionError("kernel sentence and minimal solutions disagree")
    return len(particular)


def solution_bound(A: Sequence[Sequence[int]], u: Sequence[int]) -> int:
    """Largest coordinate of any solution (finite case); 0 when unsolvable."""
    n = len(A[0])
    particular, _ = minimal_solutions(A, u, n)
    return max((max(p) for p in particular), default=0)


# ----------------------------------------------------------- polynomials


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with rational coefficients, as ``{exponents: coefficient}``."""

    nvars: int
    coeffs: tuple[tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, coeffs: Mapping[Monomial, Fraction]) -> "Polynomial":
        items = tuple(sorted((tuple(k), Fraction(v)) for k, v in coeffs.items() if v != 0))
        return cls(nvars, items)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.coeffs), default=0)

    def __call__(self, *u) -> Fraction:
        total = Fraction(0)
        for exps, c in self.coeffs:
            term = c
            for x, e in zip(u, exps):
                term *= Fraction(x) ** e
            total += term
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        names = ["u"] if self.nvars == 1 else [f"u{i + 1}" for i in range(self.nvars)]
        out = ""
        for exps, c in sorted(self.coeffs, key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(names, exps) if e)
            a = abs(c)
            term = f"{a}*{mono}" if mono and a != 1 else (mono or str(a))
            if not out:
                out = term if c > 0 else "-" + term
            else:
                out += (" + " if c > 0 else " - ") + term
        return out

    def to_json(self) -> list:
        return [{"exponents": list(e), "coef": str(c)} for e, c in self.coeffs]


def monomials(nvars: int, degree: int) -> list[Monomial]:
    out = []
    for total in range(degree + 1):
        for exps in itertools.product(range(total + 1), repeat=nvars):
            if sum(exps) == total:
                out.append(exps)
    return out


def interpolate(points: Sequence[Sequence[int]], values: Sequence[int], degree: int) -> Polynomial | None:
    """A polynomial of degree <= ``degree`` through all samples, or None.

    Solved exactly over Q; when the samples leave freedom the free
    coefficients are set to zero.
    """
    nvars = len(points[0]) if points else 1
    monos = monomials(nvars, degree)
    rows = []
    for p, v in zip(points, values):
        row = []
        for e in monos:
            t = 1
            for x, k in zip(p, e):
                t *= x**k
            row.append(t)
        rows.append(row + [v])
    red, pivots = rref(rows, len(monos) + 1)
    if len(monos) in pivots:
        return None
    coef = [Fraction(0)] * len(monos)
    for row, p in zip(red, pivots):
        coef[p] = row[len(monos)]
    return Polynomial.from_dict(nvars, dict(zip(monos, coef)))


# ------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """Residue class ``u = residue (mod modulus)`` intersected with a union
    of sign cells: the sign vector of ``normals[i] . u`` must be in ``cells``.
    """

    modulus: int
    residue: tuple[int, ...]
    normals: tuple[tuple[int, ...], ...] = ()
    cells: tuple[tuple[int, ...], ...] = ((),)

    def contains(self, u: Sequence[int]) -> bool:
        if tuple(x % self.modulus for x in u) != self.residue:
            return False
        return _signs(self.normals, u) in self.cells

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "residue": list(self.residue),
            "normals": [list(n) for n in self.normals],
            "cells": [list(c) for c in self.cells],
        }


def _signs(normals, u) -> tuple[int, ...]:
    out = []
    for n in normals:
        s = sum(a * b for a, b in zip(n, u))
        out.append((s > 0) - (s < 0))
    return tuple(out)


def chamber_normals(A: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Normals of the hyperplanes spanned by ``d - 1`` columns of ``A``."""
    d = len(A)
    cols = [[A[i][j] for i in range(d)] for j in range(len(A[0]))]
    normals = set()
    for sub in itertools.combinations(range(len(cols)), d - 1):
        vecs = [cols[j] for j in sub]
        ns = nullspace(vecs, d) if vecs else nullspace([], d)
        if len(ns) == 1:
            n = primitive(ns[0])
            first = next(x for x in n if x)
            if first < 0:
                n = [-x for x in n]
            normals.add(tuple(n))
    return sorted(normals)


def maximal_minors(A: Sequence[Sequence[int]]) -> list[int]:
    d = len(A)
    n = len(A[0])
    out = []
    for sub in itertools.combinations(range(n), d):
        m = det([[A[i][j] for j in sub] for i in range(d)])
        if m:
            out.append(abs(m))
    return out


@dataclass
class PiecewisePolynomial:
    pieces: list[tuple[Region, Polynomial]] = field(default_factory=list)
    declared_degree: int = 0
    nvars: int = 1

    def piece_for(self, u: Sequence[int]) -> tuple[Region, Polynomial] | None:
        for region, poly in self.pieces:
            if region.contains(u):
                return region, poly
        return None

    def __call__(self, *u) -> Fraction:
        hit = self.piece_for(u)
        if hit is None:
            raise KeyError(f"no piece covers {u}")
        return hit[1](*u)

    @property
    def degree(self) -> int:
        return max((p.degree for _, p in self.pieces), default=0)

    def to_json(self) -> dict:
        return {
            "declared_degree": self.declared_degree,
            "pieces": [{"region": r.to_json(), "polynomial": p.to_json(), "text": str(p)} for r, p in self.pieces],
        }


def _fit_lowest(items, max_degree: int) -> Polynomial | None:
    pts = [u for u, _ in items]
    vals = [v for _, v in items]
    for deg in range(max_degree + 1):
        poly = interpolate(pts, vals, deg)
        if poly is not None:
            return poly
    return None


def fit_values(
    samples: Mapping[tuple[int, ...], int],
    max_degree: int,
    modulus: int,
    normals: Sequence[Sequence[int]] = (),
) -> PiecewisePolynomial | None:
    """Group samples by residue mod ``modulus`` and sign cell, fit each exactly.

    Sign cells of one residue class are merged whenever a single polynomial
    fits their union.  Returns None when some cell admits no polynomial of
    degree <= max_degree.
    """
    normals = tuple(tuple(n) for n in normals)
    groups: dict[tuple, dict[tuple, list]] = {}
    for u, v in samples.items():
        residue = tuple(x % modulus for x in u)
        groups.setdefault(residue, {}).setdefault(_signs(normals, u), []).append((u, v))
    nvars = len(next(iter(samples))) if samples else 1
    pieces = []
    for residue, cells in sorted(groups.items()):
        merged: list[tuple[list, list, Polynomial]] = []
        for cell, items in sorted(cells.items(), key=lambda kv: (-len(kv[1]), kv[0])):
            for i, (cs, its, _) in enumerate(merged):
                poly = _fit_lowest(its + items, max_degree)
                if poly is not None:
                    merged[i] = (cs + [cell], its + items, poly)
                    break
            else:
                poly = _fit_lowest(items, max_degree)
                if poly is None:
                    return None
                merged.append(([cell], items, poly))
        for cs, _, poly in merged:
            pieces.append((Region(modulus, residue, normals, tuple(sorted(cs))), poly))
    return PiecewisePolynomial(pieces, max_degree, nvars)


def degree_bound(A: Sequence[Sequence[int]]) -> int:
    return len(A[0]) - rank(A)


def fit_piecewise(A: Sequence[Sequence[int]], samples: Iterable[Sequence[int]]) -> PiecewisePolynomial:
    """Exact piecewise-polynomial fit of ``u -> count_solutions(A, u)``."""
    A = [list(r) for r in A]
    bound = degree_bound(A)
    data = {}
    for u in samples:
        c = count_solutions(A, u)
        if c == INFINITE:
            raise ValueError(f"count is infinite at u = {tuple(u)}")
        data[tuple(int(x) for x in u)] = int(c)
    entries = [abs(a) for row in A for a in row if a]
    base_mod = lcm(*entries) if entries else 1
    normals = chamber_normals(A)
    for modulus in (base_mod, lcm(base_mod, *maximal_minors(A))):
        pp = fit_values(data, bound, modulus, normals)
        if pp is not None:
            return pp
    raise FitFailure(f"no piecewise polynomial of degree <= {bound} fits the counts of A = {A}")


def verify_degree_bound(A: Sequence[Sequence[int]], pp: PiecewisePolynomial) -> bool:
    """Every piece has total degree at most ``n - rank(A)``."""
    bound = degree_bound(A)
    return all(poly.degree <= bound for _, poly in pp.pieces)
