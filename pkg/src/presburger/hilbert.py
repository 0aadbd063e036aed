"""Minimal solutions of linear Diophantine systems over N.

Contejean-Devie completion: starting from the unit vectors, a candidate
``p`` that is not yet a solution is extended by ``e_j`` only when
``<A p, A e_j> < 0`` (the step moves ``A p`` towards the origin), and
candidates dominating a known solution are discarded.  The inhomogeneous
system ``A z = b`` is handled through the homogenized system
``[A | -b] (z, t) = 0`` restricted to ``t <= 1``.
"""

from __future__ import annotations

from typing import Sequence


class HilbertBudgetExceeded(RuntimeError):
    pass


def _dominates(q: tuple, sols: list[tuple]) -> bool:
    for s in sols:
        if all(a >= b for a, b in zip(q, s)):
            return True
    return False


def hilbert_basis(
    rows: Sequence[Sequence[int]],
    ncols: int,
    cap: dict[int, int] | None = None,
    max_candidates: int = 2_000_000,
) -> list[tuple[int, ...]]:
    """Minimal nonzero solutions of ``rows z = 0`` over N^ncols.

    ``cap`` maps a column index to an upper bound on that coordinate; the
    returned set is then the minimal solutions within the cap.
    """
    cols = [tuple(r[j] for r in rows) for j in range(ncols)]
    cap = cap or {}
    frontier: dict[tuple, tuple] = {}
    for j in range(ncols):
        if cap.get(j, 1) < 1:
            continue
        p = tuple(int(i == j) for i in range(ncols))
        frontier[p] = cols[j]
    solutions: list[tuple] = []
    seen = 0
    while frontier:
        level_solutions = [p for p, ap in frontier.items() if not any(ap)]
        solutions.extend(level_solutions)
        nxt: dict[tuple, tuple] = {}
        for p, ap in frontier.items():
            if not any(ap):
                continue
            for j in range(ncols):
                cj = cols[j]
                if sum(a * b for a, b in zip(ap, cj)) >= 0:
                    continue
                if j in cap and p[j] + 1 > cap[j]:
                    continue
                q = p[:j] + (p[j] + 1,) + p[j + 1 :]
                if q in nxt or _dominates(q, solutions):
                    continue
                nxt[q] = tuple(a + b for a, b in zip(ap, cj))
        seen += len(nxt)
        if seen > max_candidates:
            raise HilbertBudgetExceeded("Diophantine candidate budget exceeded")
        frontier = nxt
    return sorted(solutions)


def minimal_solutions(
    rows: Sequence[Sequence[int]],
    rhs: Sequence[int],
    ncols: int,
    max_candidates: int = 2_000_000,
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Minimal solutions of ``rows z = rhs`` over N.

    Returns ``(particular, homogeneous)``: every solution is a particular
    solution plus an N-combination of homogeneous ones.
    """
    aug = [list(r) + [-b] for r, b in zip(rows, rhs)]
    if not rows:
        hom = [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
        return [tuple([0] * ncols)], hom
    basis = hilbert_basis(aug, ncols + 1, cap={ncols: 1}, max_candidates=max_candidates)
    particular = [s[:ncols] for s in basis if s[ncols] == 1]
    hom = [s[:ncols] for s in basis if s[ncols] == 0]
    return particular, hom
