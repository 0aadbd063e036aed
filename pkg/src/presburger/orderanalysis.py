"""Galaxies, condensation and VD*-rank of interpreted orders.

Two points lie in the same galaxy when only finitely many points sit
between them.  Every analysis here goes through one eliminated copy of the
"same galaxy" formula ``G(x, y)``; the sentences built on top of it are
small enough to decide directly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

from . import formula as F
from . import qelim as Q
from . import semilinear as SL
from .catalog import broken_fixture, catalog, get
from .interp import (
    galaxy_parts,
    Interpretation,
    lex_less,
    lex_min_representative_formula,
    same_galaxy_formula,
    tuple_eq,
    xs,
)

__all__ = [
    "GalaxyType",
    "CondensationResult",
    "RankResult",
    "RankBoundExceeded",
    "galaxy_formula",
    "galaxy_type",
    "condense",
    "vd_rank",
    "catalog",
    "broken_fixture",
    "get",
]

DEFAULT_COUNT_BUDGET = 64


class RankBoundExceeded(RuntimeError):
    """More condensations than the dimension allows: a bug or an invalid input."""


class GalaxyTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class GalaxyType:
    tag: str  # "N" | "NegN" | "Z" | "Finite"
    size: int | None = None

    def __post_init__(self):
        if self.tag not in ("N", "NegN", "Z", "Finite"):
            raise ValueError(f"unknown galaxy tag {self.tag!r}")
        if (self.tag == "Finite") != (self.size is not None):
            raise ValueError("exactly the Finite tag carries a size")
        if self.size is not None and self.size < 1:
            raise ValueError("finite galaxies are nonempty")

    def __str__(self) -> str:
        if self.tag == "Finite":
            return f"Finite({self.size})"
        return {"N": "TypeN", "NegN": "TypeNegN", "Z": "TypeZ"}[self.tag]

    @property
    def finite(self) -> bool:
        return self.tag == "Finite"


TYPE_N = GalaxyType("N")
TYPE_NEGN = GalaxyType("NegN")
TYPE_Z = GalaxyType("Z")


def Finite(n: int) -> GalaxyType:
    return GalaxyType("Finite", n)


@functools.lru_cache(maxsize=64)
def galaxy_formula(I: Interpretation, budget_nodes: int | None = None) -> F.Formula:
    """Quantifier-free ``G(x, y)``: x and y are domain points in one galaxy.

    The bound quantifier of ``T`` ranges over an upward-closed condition,
    so it is eliminated by passing to the limit instead of by candidates.
    """
    dom, bname, body = galaxy_parts(I)
    budget = Q._Budget(Q.DEFAULT_BUDGET_NODES if budget_nodes is None else budget_nodes)
    inner = Q._qe(body, budget)
    node = Q.mk_and([Q._qe(dom, budget), Q.limit_node(bname, inner)])
    return Q.node_formula(node)


def _galaxy_of(I: Interpretation, a: Sequence[int], budget_nodes=None) -> F.Formula:
    """``G(a, y)`` as a formula over ``y1..ym``."""
    G = galaxy_formula(I, budget_nodes)
    return F.substitute_many(G, {x: F.Num(int(v)) for x, v in zip(xs(I.dim), a)})


def _has_extreme(I: Interpretation, Ga: F.Formula, least: bool, budget_nodes=None) -> bool:
    m = I.dim
    y, z = xs(m, "y"), xs(m, "z")
    Gz = F.substitute_many(Ga, {a: F.Var(b) for a, b in zip(y, z)})
    beyond = I.less_at(z, y) if least else I.less_at(y, z)
    sentence = F.exists_many(y, F.And(Ga, F.forall_many(z, F.Implies(Gz, F.Not(beyond)))))
    return Q.decide(sentence, budget_nodes)


def galaxy_type(
    I: Interpretation,
    a: Sequence[int],
    budget_nodes: int | None = None,
    count_budget: int = DEFAULT_COUNT_BUDGET,
) -> GalaxyType:
    """Order type of the galaxy of ``a``.

    A galaxy is finite exactly when it has a least and a greatest element;
    the size of a finite galaxy is read off a decomposition of its
    (eliminated) point set.
    """
    a = tuple(int(v) for v in a)
    if len(a) != I.dim:
        raise ValueError("point arity differs from the interpretation's dimension")
    if not Q.decide(I.domain_at(list(a))):
        raise ValueError(f"point {a} is outside the domain")
    Ga = _galaxy_of(I, a, budget_nodes)
    has_min = _has_extreme(I, Ga, True, budget_nodes)
    has_max = _has_extreme(I, Ga, False, budget_nodes)
    if has_min and has_max:
        D = SL.ito_decompose(SL.from_formula(Ga, xs(I.dim, "y")))
        n = SL.cardinality(D)
        if n == float("inf"):
            raise AssertionError("a galaxy with both ends must be finite")
        if n > count_budget:
            raise GalaxyTooLarge(f"galaxy of {a} has {n} > {count_budget} points")
        return Finite(int(n))
    if has_min:
        return TYPE_N
    if has_max:
        return TYPE_NEGN
    return TYPE_Z


# ---------------------------------------------------------- condensation


@dataclass
class CondensationResult:
    interpretation: Interpretation
    decomposition: SL.Decomposition
    dimension: int
    source: Interpretation | None = None

    def to_json(self) -> dict:
        return {
            "interpretation": self.interpretation.to_json(),
            "dimension": self.dimension,
            "empty": self.decomposition.empty,
            "decomposition": self.decomposition.to_json(),
        }


def representative_formula(I: Interpretation, budget_nodes: int | None = None) -> F.Formula:
    """Eliminated ``D'(x)``: lexicographically least point of its galaxy."""
    phi = lex_min_representative_formula(I, galaxy=galaxy_formula(I, budget_nodes))
    return Q.simplify(Q.eliminate(phi, budget_nodes))


def _z_split_points(I: Interpretation, rep: F.Formula, budget_nodes=None) -> F.Formula:
    """Immediate predecessors of the representatives of Z-type galaxies."""
    m = I.dim
    x, r, y, z = xs(m), xs(m, "r"), xs(m, "y"), xs(m, "z")
    G = galaxy_formula(I, budget_nodes)
    rep_r = F.substitute_many(rep, {a: F.Var(b) for a, b in zip(x, r)})
    G_r = F.substitute_many(G, {a: F.Var(b) for a, b in zip(x, r)})
    G_rz = F.substitute_many(G_r, {a: F.Var(b) for a, b in zip(y, z)})

    def no_extreme(least: bool) -> F.Formula:
        beyond = I.less_at(z, y) if least else I.less_at(y, z)
        return F.Not(F.exists_many(y, F.And(G_r, F.forall_many(z, F.Implies(G_rz, F.Not(beyond))))))

    z_rep = F.conj([rep_r, no_extreme(True), no_extreme(False)])
    pred = F.conj(
        [
            I.domain_at(x),
            I.less_at(x, r),
            F.Not(F.exists_many(z, F.conj([I.domain_at(z), I.less_at(x, z), I.less_at(z, r)]))),
        ]
    )
    return Q.simplify(Q.eliminate(F.exists_many(r, F.And(z_rep, pred)), budget_nodes))


def condense(
    I: Interpretation,
    budget_nodes: int | None = None,
    budget_pieces: int = SL.DEFAULT_BUDGET_PIECES,
    split_z: bool = False,
) -> CondensationResult:
    """One point per galaxy, ordered as in ``I``.

    With ``split_z`` every Z-type galaxy also contributes the immediate
    predecessor of its representative, so that the galaxy is cut into a
    NegN part and an N part before condensing.
    """
    rep = representative_formula(I, budget_nodes)
    if split_z:
        rep = Q.simplify(F.Or(rep, _z_split_points(I, rep, budget_nodes)))
    cI = Interpretation(I.name + "'", I.dim, rep, I.less, I.equality, f"condensation of {I.name}")
    D = SL.ito_decompose(SL.from_formula(rep, xs(I.dim)), budget_pieces)
    return CondensationResult(cI, D, SL.dimension(D), I)


@dataclass
class RankResult:
    rank: int
    chain: list[CondensationResult] = field(default_factory=list)
    final_size: int = 0
    final: Interpretation | None = None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "final_size": self.final_size,
            "chain": [{"name": c.interpretation.name, "dimension": c.dimension} for c in self.chain],
        }


def domain_decomposition(I: Interpretation, budget_pieces: int = SL.DEFAULT_BUDGET_PIECES) -> SL.Decomposition:
    return SL.ito_decompose(SL.from_formula(I.domain, xs(I.dim)), budget_pieces)


def vd_rank(
    I: Interpretation,
    budget_nodes: int | None = None,
    budget_pieces: int = SL.DEFAULT_BUDGET_PIECES,
) -> RankResult:
    """Number of condensations needed to reach a finite order (at most m)."""
    current = I
    chain: list[CondensationResult] = []
    D = domain_decomposition(I, budget_pieces)
    while not SL.is_finite(D):
        if len(chain) >= I.dim + 1:
            raise RankBoundExceeded(f"{I.name}: still infinite after {len(chain)} condensations (bound {I.dim})")
        step = condense(current, budget_nodes, budget_pieces)
        chain.append(step)
        current, D = step.interpretation, step.decomposition
    return RankResult(len(chain), chain, int(SL.cardinality(D)), current)
