"""Brute-force oracles over finite boxes.

Nothing here uses quantifier elimination on the quantities being checked:
orders are sorted explicitly and galaxies are read off how intervals grow
when the box grows.  These are test oracles, exact on the catalog entries
but heuristic in general.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import formula as F
from .interp import Interpretation, box_points, sort_points


def truth_set(phi: F.Formula, names: Sequence[str], bound: int) -> set[tuple[int, ...]]:
    """All points of ``[0, bound]^m`` satisfying a quantifier-free formula."""
    f = F.compile_formula(phi, list(names))
    return {p for p in itertools.product(range(bound + 1), repeat=len(names)) if f(*p)}


def witness_exists(phi: F.Formula, var: str, sigma: dict, bound: int) -> bool:
    """Is there ``v <= bound`` with ``phi(var := v)`` true under ``sigma``?"""
    names = sorted(set(sigma) | {var})
    f = F.compile_formula(phi, names)
    for v in range(bound + 1):
        env = dict(sigma)
        env[var] = v
        if f(*[env[n] for n in names]):
            return True
    return False


@dataclass
class BoxOrder:
    """Sorted domain points of nested boxes ``bounds[0] < bounds[1] < ...``."""

    interp: Interpretation
    bounds: tuple[int, ...]
    order: list[tuple[int, ...]]  # sorted points of the largest box

    @classmethod
    def build(cls, I: Interpretation, bounds: Sequence[int]) -> "BoxOrder":
        bounds = tuple(sorted(bounds))
        return cls(I, bounds, sort_points(I, box_points(I, bounds[-1])))

    def sorted_in(self, bound: int) -> list[tuple[int, ...]]:
        return [p for p in self.order if max(p) <= bound]


def galaxy_in_box(box: BoxOrder, a: tuple[int, ...], inner: int, outer: int) -> list[tuple[int, ...]]:
    """Points of ``[0, inner]^m`` whose interval to ``a`` does not grow from ``inner`` to ``outer``."""
    small = box.sorted_in(inner)
    big = box.sorted_in(outer)
    pos_s = {p: i for i, p in enumerate(small)}
    pos_b = {p: i for i, p in enumerate(big)}
    ia, ja = pos_s[a], pos_b[a]
    return [p for p in small if abs(pos_s[p] - ia) == abs(pos_b[p] - ja)]


def galaxy_class(box: BoxOrder, a: tuple[int, ...]) -> tuple[str, int | None]:
    """Brute-force galaxy type of ``a``: ("N" | "NegN" | "Z" | "Finite", size).

    The galaxy is computed in the two smaller boxes (each against the next
    larger one); an end of the galaxy that moves between them is open.
    """
    s, mid, big = box.bounds[0], box.bounds[1], box.bounds[2]
    g1 = galaxy_in_box(box, a, s, mid)
    g2 = galaxy_in_box(box, a, mid, big)
    has_min = g1[0] == g2[0]
    has_max = g1[-1] == g2[-1]
    if has_min and has_max:
        return "Finite", len(g2)
    if has_min:
        return "N", None
    if has_max:
        return "NegN", None
    return "Z", None


def galaxy_partition(box: BoxOrder, inner: int, outer: int) -> list[list[tuple[int, ...]]]:
    """Split the sorted inner box into runs of consecutive same-galaxy points.

    Two neighbours in the inner box are in one galaxy when no point of the
    outer box falls between them.
    """
    small = box.sorted_in(inner)
    big = box.sorted_in(outer)
    pos_b = {p: i for i, p in enumerate(big)}
    runs: list[list[tuple[int, ...]]] = []
    for p in small:
        if runs and pos_b[p] == pos_b[runs[-1][-1]] + 1:
            runs[-1].append(p)
        else:
            runs.append([p])
    return runs


def naive_count(A: Sequence[Sequence[int]], u: Sequence[int], bound: int) -> int:
    """Number of ``lam in [0, bound]^n`` with ``A lam = u``.

    Every point of the box is tested; numpy does the inner loops, one slice
    of the first coordinate at a time.
    """
    n = len(A[0]) if A else 0
    if n == 0:
        return int(all(b == 0 for b in u))
    M = np.asarray(A, dtype=np.int64)
    target = np.asarray(u, dtype=np.int64)
    rest = np.indices((bound + 1,) * (n - 1)).reshape(n - 1, -1) if n > 1 else np.zeros((0, 1), dtype=np.int64)
    partial = M[:, 1:] @ rest  # d x points
    count = 0
    for first in range(bound + 1):
        vals = partial + M[:, :1] * first
        count += int(np.all(vals == target[:, None], axis=0).sum())
    return count
