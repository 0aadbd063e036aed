"""Lexicographic representations of interpreted orders.

For an order whose condensation is omega (or finite) the order type is the
sequence of its galaxy types along the condensation.  ``construct_lex_rep``
reads that sequence off a fitted spine and emits a set ``S`` of integer
tuples whose lexicographic order has the same galaxy sequence:

* galaxy ``k`` occupies the tuples with first coordinate ``k``;
* an N-galaxy is ``{(k, n) : n >= 0}``, a NegN-galaxy ``{(k, -n)}`` and a
  Z-galaxy the union of both;
* a finite galaxy of size ``f(k)`` is ``{(k, j) : 0 <= j < f(k)}``.

Lex order on a subset of N^r is a well-order, so reversed columns need
negative coordinates; ``S`` therefore lives in Z^r.

``verify_lex_rep`` compares galaxy skeletons computed by brute force on
both sides and never trusts the construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import formula as F
from . import semilinear as SL
from .counting import PiecewisePolynomial, fit_values
from .interp import Interpretation, box_points, sort_points, stable_prefix, xs
from .orderanalysis import (
    GalaxyType,
    _galaxy_of,
    condense,
    galaxy_type,
)

Vector = tuple[int, ...]

DEFAULT_SAMPLES = 36
DEFAULT_MAX_MODULUS = 12
DEFAULT_PREFIX = 200
DEFAULT_POINT_BUDGET = 250_000


class SpineSynthesisFailed(RuntimeError):
    """No piecewise-linear enumeration of the condensation fits the samples."""

    def __init__(self, message: str, prefix: Sequence[Vector] = ()):
        super().__init__(f"spine synthesis failed: {message}")
        self.prefix = list(prefix)


class UnsupportedShape(RuntimeError):
    def __init__(self, message: str):
        super().__init__(f"unsupported condensation shape: {message}")


class CardinalityFitFailed(RuntimeError):
    pass


# ---------------------------------------------------------------- spine


@dataclass
class SpineMap:
    """Ascending enumeration of the condensation.

    ``maps`` gives one degree-1 piecewise polynomial per coordinate for the
    omega part (empty when the condensation is finite); ``tail`` lists the
    finitely many representatives after it, in order.
    """

    dim: int
    modulus: int = 1
    maps: tuple[PiecewisePolynomial, ...] = ()
    tail: tuple[Vector, ...] = ()
    samples: tuple[Vector, ...] = ()

    @property
    def infinite(self) -> bool:
        return bool(self.maps)

    def __len__(self) -> int:
        if self.infinite:
            raise TypeError("infinite spine")
        return len(self.tail)

    def __call__(self, k: int) -> Vector:
        if not self.infinite:
            return self.tail[k]
        out = []
        for pp in self.maps:
            v = pp(k)
            if v.denominator != 1:
                raise ValueError(f"spine is not integral at {k}")
            out.append(int(v))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "infinite": self.infinite,
            "modulus": self.modulus,
            "maps": [pp.to_json() for pp in self.maps],
            "tail": [list(p) for p in self.tail],
        }


def _fit_sequence(points: Sequence[Vector], max_modulus: int) -> tuple[int, tuple[PiecewisePolynomial, ...]] | None:
    """Smallest modulus whose residue classes are all affine in the index."""
    if not points:
        return None
    m = len(points[0])
    for M in range(1, max_modulus + 1):
        if len(points) < 3 * M:
            break
        maps = []
        for i in range(m):
            pp = fit_values({(k,): p[i] for k, p in enumerate(points)}, 1, M)
            if pp is None:
                break
            maps.append(pp)
        else:
            return M, tuple(maps)
    return None


def _sub_interpretation(I: Interpretation, domain: F.Formula, name: str) -> Interpretation:
    return Interpretation(name, I.dim, domain, I.less, I.equality, name)


def _rename_y(I: Interpretation, phi: F.Formula) -> F.Formula:
    return F.rename(phi, dict(zip(xs(I.dim, "y"), xs(I.dim))))


def _finite_points(I: Interpretation, phi: F.Formula) -> list[Vector]:
    D = SL.ito_decompose(SL.from_formula(phi, xs(I.dim)))
    if not SL.is_finite(D):
        raise AssertionError("expected a finite set")
    return sort_points(I, [p.base for p in D.pieces])


@dataclass
class CondensationShape:
    """Galaxies of the condensation, in order, with one point of each."""

    condensed: Interpretation
    galaxies: list[tuple[Vector, GalaxyType]]

    @property
    def tags(self) -> list[str]:
        return [str(g) for _, g in self.galaxies]


def condensation_shape(I: Interpretation, budget_nodes: int | None = None) -> CondensationShape:
    """Condense once, then classify the galaxies of the condensation."""
    cI = condense(I, budget_nodes).interpretation
    D = SL.ito_decompose(SL.from_formula(cI.domain, xs(I.dim)))
    if SL.is_finite(D):
        pts = sort_points(cI, [p.base for p in D.pieces])
        gal = [(pts[0], GalaxyType("Finite", len(pts)))] if pts else []
        return CondensationShape(cI, gal)
    reps = condense(cI, budget_nodes).interpretation
    RD = SL.ito_decompose(SL.from_formula(reps.domain, xs(I.dim)))
    if not SL.is_finite(RD):
        raise UnsupportedShape(f"{I.name} has rank above 2")
    pts = sort_points(cI, [p.base for p in RD.pieces])
    gal = [(p, galaxy_type(cI, p, budget_nodes, count_budget=10_000)) for p in pts]
    return CondensationShape(cI, gal)


def synthesize_spine(
    I: Interpretation,
    samples: int = DEFAULT_SAMPLES,
    max_modulus: int = DEFAULT_MAX_MODULUS,
    budget_nodes: int | None = None,
    shape: CondensationShape | None = None,
) -> SpineMap:
    """Fit an ascending enumeration of the galaxy representatives.

    Supported shapes: finite, omega and omega + k.  The omega part is
    enumerated by brute force and fitted by affine maps per residue class
    of the index, for moduli 1..max_modulus; the fit must be exact on every
    sample.
    """
    shape = shape or condensation_shape(I, budget_nodes)
    cI = shape.condensed
    tags = [g.tag for _, g in shape.galaxies]
    if tags == [] or tags == ["Finite"]:
        tail = _finite_points(cI, cI.domain) if tags else []
        return SpineMap(I.dim, tail=tuple(tail), samples=tuple(tail))
    if tags not in (["N"], ["N", "Finite"]):
        raise UnsupportedShape(f"{I.name}: condensation galaxies {shape.tags}")
    head = _rename_y(cI, _galaxy_of(cI, shape.galaxies[0][0], budget_nodes))
    omega = _sub_interpretation(cI, F.And(cI.domain, head), cI.name + "_omega")
    enum = stable_prefix(omega, samples, bound=4)
    if enum.truncated:
        raise SpineSynthesisFailed(f"could not enumerate {samples} representatives", enum.points)
    fit = _fit_sequence(enum.points, max_modulus)
    if fit is None:
        raise SpineSynthesisFailed(f"no affine fit modulo 1..{max_modulus}", enum.points)
    M, maps = fit
    tail: list[Vector] = []
    if len(tags) == 2:
        rest = _rename_y(cI, _galaxy_of(cI, shape.galaxies[1][0], budget_nodes))
        tail = _finite_points(cI, F.And(cI.domain, rest))
    spine = SpineMap(I.dim, M, maps, tuple(tail), tuple(enum.points))
    for k, p in enumerate(enum.points):
        if spine(k) != p:
            raise SpineSynthesisFailed(f"fit disagrees at index {k}", enum.points)
    return spine


# --------------------------------------------------------- construction


@dataclass
class LexRepresentation:
    """``S`` as disjoint fundamental lattices in Z^arity, ordered lexicographically."""

    arity: int
    S: SL.Decomposition
    provenance: list[dict] = field(default_factory=list)
    source: str = ""

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "source": self.source,
            "domain": "Z",
            "pieces": self.S.to_json()["pieces"],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LexRepresentation":
        D = SL.Decomposition.from_json({"arity": data["arity"], "pieces": data["pieces"]}, natural=False)
        return cls(int(data["arity"]), D, list(data.get("provenance", [])), data.get("source", ""))

    def points(self, radius: int) -> list[Vector]:
        lo, hi = [-radius] * self.arity, [radius] * self.arity
        out: set[Vector] = set()
        for L in self.S.pieces:
            out |= SL.lattice_points(L, lo, hi)
        return sorted(out)


def _lat(base, periods=()) -> SL.Lattice:
    return SL.Lattice(tuple(base), tuple(tuple(p) for p in periods), natural=False)


def _column(tag: str, base: Vector, step: Vector | None) -> list[SL.Lattice]:
    """Infinite column along the last coordinate at ``base``.

    ``step`` is the period moving to the next index of the same class
    (None for a single column).
    """
    r = len(base)
    up = tuple([0] * (r - 1) + [1])
    down = tuple([0] * (r - 1) + [-1])
    extra = [step] if step is not None else []
    if tag == "N":
        return [_lat(base, extra + [up])]
    if tag == "NegN":
        return [_lat(base, extra + [down])]
    if tag == "Z":
        below = tuple(base[:-1]) + (base[-1] - 1,)
        return [_lat(base, extra + [up]), _lat(below, extra + [down])]
    raise ValueError(tag)


def _box_column(prefix: Vector, M: int, c: int, alpha: int, beta: int) -> list[SL.Lattice]:
    """``{(prefix, c + M q, j) : q >= 0, 0 <= j < alpha q + beta}``.

    The part ``j < beta`` is one line per ``j``; the part above it splits by
    ``s = (j - beta) mod alpha`` into two-dimensional lattices.
    """
    pre = tuple(prefix)
    z = (0,) * len(pre)
    out = [_lat(pre + (c, j), [z + (M, 0)]) for j in range(beta)]
    for s in range(alpha):
        out.append(_lat(pre + (c + M, beta + s), [z + (M, alpha), z + (M, 0)]))
    return out


def _finite_box(prefix: Vector, size: int) -> list[SL.Lattice]:
    return [_lat(tuple(prefix) + (j,)) for j in range(size)]


def _classify_pattern(
    types: Sequence[GalaxyType], max_modulus: int
) -> tuple[int, list[tuple[str, tuple[int, int] | None]]] | None:
    """Per residue class of the index: a constant tag, and for Finite an
    affine size ``alpha q + beta`` in ``q = (k - c) / M``."""
    for M in range(1, max_modulus + 1):
        if len(types) < 3 * M:
            break
        classes = []
        for c in range(M):
            ts = types[c::M]
            tags = {t.tag for t in ts}
            if len(tags) != 1:
                break
            tag = tags.pop()
            if tag != "Finite":
                classes.append((tag, None))
                continue
            pp = fit_values({(q,): t.size for q, t in enumerate(ts)}, 1, 1)
            if pp is None:
                break
            poly = pp.pieces[0][1]
            beta, alpha = poly(0), poly(1) - poly(0)
            if alpha.denominator != 1 or beta.denominator != 1 or alpha < 0 or beta < 1:
                break
            classes.append((tag, (int(alpha), int(beta))))
        else:
            return M, classes
    return None


def construct_lex_rep(
    I: Interpretation,
    samples: int = DEFAULT_SAMPLES,
    max_modulus: int = DEFAULT_MAX_MODULUS,
    budget_nodes: int | None = None,
) -> LexRepresentation:
    """Build ``S`` with ``(S, lex)`` isomorphic to ``I`` (condensation omega or finite)."""
    shape = condensation_shape(I, budget_nodes)
    spine = synthesize_spine(I, samples, max_modulus, budget_nodes, shape)
    prov: list[dict] = [{"step": "spine", **spine.to_json()}]
    pieces: list[SL.Lattice] = []

    def gtype(p: Vector) -> GalaxyType:
        return galaxy_type(I, p, budget_nodes, count_budget=100_000)

    tail_types = [gtype(p) for p in spine.tail]

    if not spine.infinite and len(spine.tail) == 1:
        # a single galaxy needs no spine coordinate
        t = tail_types[0]
        arity = 1
        pieces = _finite_box((), t.size) if t.finite else _column(t.tag, (0,), None)
        prov.append({"step": "galaxy", "index": 0, "representative": list(spine.tail[0]), "galaxy": str(t)})
        return LexRepresentation(arity, SL.Decomposition(arity, tuple(pieces)), prov, I.name)

    lead: tuple[int, ...] = ()
    if spine.infinite and spine.tail:
        lead = (0,)
    arity = len(lead) + 2

    if spine.infinite:
        types = [gtype(spine(k)) for k in range(samples)]
        pattern = _classify_pattern(types, max_modulus)
        if pattern is None:
            raise CardinalityFitFailed(
                f"galaxy types along the spine follow no affine pattern modulo 1..{max_modulus}: "
                + ", ".join(map(str, types[:12]))
            )
        M, classes = pattern
        for c, (tag, sizes) in enumerate(classes):
            step = tuple([0] * len(lead) + [M, 0])
            if tag == "Finite":
                alpha, beta = sizes
                new = _box_column(lead, M, c, alpha, beta)
                prov.append(
                    {"step": "finite boxes", "class": c, "modulus": M, "galaxy": "Finite",
                     "size": f"{alpha}*q + {beta}", "degree": 1 if alpha else 0}
                )
            else:
                new = _column(tag, lead + (c, 0), step)
                prov.append({"step": "columns", "class": c, "modulus": M, "galaxy": str(GalaxyType(tag))})
            pieces.extend(new)

    tail_lead = (1,) if lead else ()
    for t_idx, (p, t) in enumerate(zip(spine.tail, tail_types)):
        base = tail_lead + (t_idx,)
        pieces.extend(_finite_box(base, t.size) if t.finite else _column(t.tag, base + (0,), None))
        prov.append({"step": "tail galaxy", "index": t_idx, "representative": list(p), "galaxy": str(t)})

    return LexRepresentation(arity, SL.Decomposition(arity, tuple(pieces)), prov, I.name)


# --------------------------------------------------------- verification


@dataclass(frozen=True)
class SkeletonEntry:
    tag: str
    size: int | None
    points: int  # points of the galaxy inside the middle box

    def __str__(self) -> str:
        return str(GalaxyType(self.tag, self.size))


def _runs(order: Sequence[Vector], inner: int, outer: int, inbox: Callable[[Vector, int], bool]):
    small = [p for p in order if inbox(p, inner)]
    pos = {p: i for i, p in enumerate(p for p in order if inbox(p, outer))}
    runs: list[list[Vector]] = []
    for p in small:
        if runs and pos[p] == pos[runs[-1][-1]] + 1:
            runs[-1].append(p)
        else:
            runs.append([p])
    return runs


def box_skeleton(order: Sequence[Vector], s: int, inbox: Callable[[Vector, int], bool]) -> list[SkeletonEntry]:
    """Galaxy types of the runs of box ``s``, judged against boxes ``2s`` and ``4s``.

    ``order`` is the sorted content of a box at least ``4s``.  A galaxy end
    that moves when the boxes grow is taken to be open.
    """
    r1 = _runs(order, s, 2 * s, inbox)
    r2 = _runs(order, 2 * s, 4 * s, inbox)
    where = {p: i for i, run in enumerate(r2) for p in run}
    out = []
    for run in r1:
        big = r2[where[run[0]]]
        lo, hi = big.index(run[0]), big.index(run[-1])
        # run[0] is the first point of its galaxy inside box s
        has_min = lo == 0
        has_max = hi == len(big) - 1
        if has_min and has_max:
            out.append(SkeletonEntry("Finite", len(big), len(big)))
        else:
            tag = "N" if has_min else "NegN" if has_max else "Z"
            out.append(SkeletonEntry(tag, None, len(big)))
    return out


def _common_prefix(a: Sequence[SkeletonEntry], b: Sequence[SkeletonEntry]) -> int:
    n = 0
    for x, y in zip(a, b):
        if (x.tag, x.size) != (y.tag, y.size):
            break
        n += 1
    return n


@dataclass
class TrustedSkeleton:
    entries: list[SkeletonEntry]
    complete: bool  # the whole order fits in the box
    scale: int


def _trusted(order_at: Callable[[int], list[Vector]], inbox, s: int) -> TrustedSkeleton:
    order = order_at(8 * s)
    a = box_skeleton(order, s, inbox)
    b = box_skeleton(order, 2 * s, inbox)
    n = _common_prefix(a, b)
    complete = sum(1 for p in order if inbox(p, 2 * s)) == len(order)
    if complete and n == len(a) == len(b):
        return TrustedSkeleton(b, True, s)
    return TrustedSkeleton(b[:n], False, s)


def _nat_box(p: Vector, b: int) -> bool:
    return max(p, default=0) <= b


def _int_box(p: Vector, b: int) -> bool:
    return max((abs(x) for x in p), default=0) <= b


def interp_skeleton(I: Interpretation, s: int) -> TrustedSkeleton:
    return _trusted(lambda b: sort_points(I, box_points(I, b)), _nat_box, s)


def rep_skeleton(R: LexRepresentation, s: int) -> TrustedSkeleton:
    return _trusted(R.points, _int_box, s)


@dataclass
class VerificationReport:
    ok: bool
    prefix: int
    galaxies_compared: int
    elements_covered: int
    truncated: bool
    mismatch: dict | None = None
    scale_interp: int = 0
    scale_rep: int = 0
    skeleton: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "prefix": self.prefix,
            "galaxies_compared": self.galaxies_compared,
            "elements_covered": self.elements_covered,
            "truncated": self.truncated,
            "mismatch": self.mismatch,
            "scale_interp": self.scale_interp,
            "scale_rep": self.scale_rep,
            "skeleton": self.skeleton,
        }


def _start_scale(m: int) -> int:
    return max(2, int(round(64 ** (1 / m))))


def verify_lex_rep(
    I: Interpretation,
    R: LexRepresentation,
    prefix: int = DEFAULT_PREFIX,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> VerificationReport:
    """Compare the galaxy skeletons of ``I`` and ``(R.S, lex)``.

    Galaxies of ``I`` are taken in order until they hold ``prefix`` points
    (finite galaxies count their size, infinite ones their points in the
    middle box).  Boxes on each side double until that many galaxies are
    trusted (unchanged between two scales); running out of budget yields a
    truncated, failing report.
    """
    s = _start_scale(I.dim)
    while True:
        sk = interp_skeleton(I, s)
        covered, n = 0, 0
        for e in sk.entries:
            if covered >= prefix:
                break
            covered += e.points
            n += 1
        if covered >= prefix or sk.complete:
            break
        if (16 * s + 1) ** I.dim > point_budget:
            return VerificationReport(False, prefix, n, covered, True, None, s, 0, [str(e) for e in sk.entries[:n]])
        s *= 2
    want = sk.entries[:n]

    t = _start_scale(R.arity)
    while True:
        rk = rep_skeleton(R, t)
        if len(rk.entries) >= n or rk.complete:
            break
        if (16 * t + 1) ** R.arity > point_budget * 4:
            break
        t *= 2
    got = rk.entries
    for i, e in enumerate(want):
        if i >= len(got):
            truncated = not rk.complete
            mismatch = None if truncated else {"index": i, "interpretation": str(e), "representation": None}
            return VerificationReport(False, prefix, i, covered, truncated, mismatch, s, t, [str(x) for x in want])
        if (e.tag, e.size) != (got[i].tag, got[i].size):
            mismatch = {"index": i, "interpretation": str(e), "representation": str(got[i])}
            return VerificationReport(False, prefix, i, covered, False, mismatch, s, t, [str(x) for x in want])
    if sk.complete and rk.complete and len(got) != len(want):
        mismatch = {"index": len(want), "interpretation": None, "representation": str(got[len(want)])}
        return VerificationReport(False, prefix, len(want), covered, False, mismatch, s, t, [str(x) for x in want])
    return VerificationReport(True, prefix, n, covered, False, None, s, t, [str(x) for x in want])
