"""Exact linear algebra over Q and Z for small dense matrices.

Matrices are lists of rows.  Everything here is exact (``Fraction`` or
``int``); sizes in this package stay below ~10x10 so plain Python is fine.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Sequence

Matrix = list[list[Fraction]]


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b) if a and b else (a or b), values, 1)


def gcd_all(values: Sequence[int]) -> int:
    return reduce(math.gcd, values, 0)


def to_fractions(rows: Sequence[Sequence[int | Fraction]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)] if rows else []


def rref(rows: Sequence[Sequence[int | Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_fractions(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[int | Fraction]], ncols: int) -> Matrix:
    """Basis of the rational right kernel {v : rows v = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence[Fraction | int]) -> list[int]:
    """Smallest integer vector on the ray through ``v`` (sign preserved)."""
    fr = [Fraction(x) for x in v]
    den = lcm(*[x.denominator for x in fr])
    ints = [int(x * den) for x in fr]
    g = gcd_all(ints)
    return [x // g for x in ints] if g else ints


def solve(rows: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> list[Fraction] | None:
    """One rational solution of ``rows x = rhs`` (free variables zero), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def independent(vectors: Sequence[Sequence[int]]) -> bool:
    return rank(vectors) == len(vectors) if vectors else True


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def left_inverse(cols: Sequence[Sequence[int]]) -> Matrix:
    """Rational left inverse of the matrix with the given independent columns.

    Returns ``L`` (k x m) with ``L @ P = I`` where ``P`` is m x k.
    """
    k = len(cols)
    m = len(cols[0])
    # L = (P^T P)^{-1} P^T
    gram = [[Fraction(dot(cols[i], cols[j])) for j in range(k)] for i in range(k)]
    aug = [gram[i] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    red, pivots = rref(aug, 2 * k)
    if pivots[:k] != list(range(k)):
        raise ValueError("columns are dependent")
    inv = [row[k:] for row in red]
    return [[sum(inv[i][j] * cols[j][r] for j in range(k)) for r in range(m)] for i in range(k)]


def det(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    m = to_fractions(rows)
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return int(result)


# ---------------------------------------------------------------- Z


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of {v in Z^n : rows v = 0} by unimodular column reduction."""
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of U
    a = [list(map(int, r)) for r in rows]
    col = 0
    for r in range(len(a)):
        if col >= ncols:
            break
        # reduce entries a[r][col:] to a single nonzero at position col
        while True:
            nz = [c for c in range(col, ncols) if a[r][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda c: abs(a[r][c]))
            _swap_cols(a, u, col, piv)
            done = True
            for c in range(col + 1, ncols):
                if a[r][c]:
                    q = a[r][c] // a[r][col]
                    _add_col(a, u, c, col, -q)
                    if a[r][c]:
                        done = False
            if done:
                break
        if a[r][col] != 0:
            col += 1
    return [[u[i][c] for i in range(ncols)] for c in range(col, ncols)]


def _swap_cols(a, u, i, j):
    if i == j:
        return
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in u:
        row[i], row[j] = row[j], row[i]


def _add_col(a, u, target, source, factor):
    for row in a:
        row[target] += factor * row[source]
    for row in u:
        row[target] += factor * row[source]


def hermite_lower(cols: Sequence[Sequence[int]]) -> list[list[int]]:
    """Lower-triangular basis (as columns) of the lattice spanned by ``cols``.

    ``cols`` are d independent vectors in Z^d.  Returns columns ``h_j`` with
    ``h_j[i] == 0`` for ``i < j`` and ``h_j[j] > 0``; then
    ``{c : 0 <= c_i < h_i[i]}`` is a complete residue system of Z^d / L.
    """
    d = len(cols)
    a = [[cols[j][i] for j in range(d)] for i in range(d)]  # row-major matrix, columns = generators
    dummy = [[0] * d]
    for r in range(d):
        while True:
            nz = [c for c in range(r, d) if a[r][c] != 0]
            if not nz:
                raise ValueError("generators are dependent")
            piv = min(nz, key=lambda c: abs(a[r][c]))
            _swap_cols(a, dummy, r, piv)
            done = True
            for c in range(r + 1, d):
                if a[r][c]:
                    q = a[r][c] // a[r][r]
                    _add_col(a, dummy, c, r, -q)
                    if a[r][c]:
                        done = False
            if done:
                break
        if a[r][r] < 0:
            for row in a:
                row[r] = -row[r]
    return [[a[i][j] for i in range(d)] for j in range(d)]
