"""Built-in interpretations used as a test corpus.

Each entry records the order type it is meant to realize; the test suite
checks those claims against brute force rather than trusting them.
"""

from __future__ import annotations

from .formula import parse
from .interp import Interpretation

EVEN = "{v} == 0 mod 2"
ODD = "{v} == 1 mod 2"


def _parity(v: str, odd: bool) -> str:
    return (ODD if odd else EVEN).format(v=v)


def _omega_plus_omega_star() -> str:
    x, y = "x1", "y1"
    return (
        f"{_parity(x, False)} & {_parity(y, True)}"
        f" | {_parity(x, False)} & {_parity(y, False)} & x1 < y1"
        f" | {_parity(x, True)} & {_parity(y, True)} & y1 < x1"
    )


def _zeta() -> str:
    # odd numbers descend and come first, even numbers ascend after them
    return (
        f"{_parity('x1', True)} & {_parity('y1', False)}"
        f" | {_parity('x1', False)} & {_parity('y1', False)} & x1 < y1"
        f" | {_parity('x1', True)} & {_parity('y1', True)} & y1 < x1"
    )


def _omega_times(k: int) -> str:
    parts = [f"x1 == {i} mod {k} & y1 == {j} mod {k}" for i in range(k) for j in range(i + 1, k)]
    parts.append(f"x1 == y1 mod {k} & x1 < y1")
    return " | ".join(parts)


LEX2 = "x1 < y1 | x1 = y1 & x2 < y2"

# Column k of growing_boxes: the box (k, 0..k) ascending, then the points
# (k, n) with n > k arranged as a copy of Z: with j = n - k - 1, odd j
# descend first and even j ascend after them.  "even" below means j even,
# i.e. n == k + 1 mod 2.
_GB_FILL = (
    "(!(x2 == x1 + 1 mod 2) & y2 == y1 + 1 mod 2)"
    " | (x2 == x1 + 1 mod 2 & y2 == y1 + 1 mod 2 & x2 < y2)"
    " | (!(x2 == x1 + 1 mod 2) & !(y2 == y1 + 1 mod 2) & y2 < x2)"
)
GROWING_BOXES = (
    "x1 < y1 | x1 = y1 & ("
    "x2 <= x1 & y2 <= x1 & x2 < y2"
    " | x2 <= x1 & y2 > x1"
    f" | x2 > x1 & y2 > x1 & ({_GB_FILL}))"
)


def _make(name, dim, domain, less, description):
    return Interpretation(name, dim, parse(domain), parse(less), None, description)


def catalog() -> list[Interpretation]:
    return [
        _make("omega", 1, "0 = 0", "x1 < y1", "omega: one N-galaxy"),
        _make("finite5", 1, "x1 < 5", "x1 < y1", "the finite order 5"),
        _make(
            "omega_plus_omega_star",
            1,
            "0 = 0",
            _omega_plus_omega_star(),
            "evens ascending, then odds descending: omega + omega*",
        ),
        _make("omega_times_k", 1, "0 = 0", _omega_times(3), "residues mod 3 in turn, each ascending: omega * 3"),
        _make("lex_omega2", 2, "0 = 0", LEX2, "lexicographic N^2: omega^2"),
        _make(
            "growing_boxes",
            2,
            "0 = 0",
            GROWING_BOXES,
            "column k holds a finite box of k+1 points followed by a copy of Z: sum over k of (k+1 + zeta)",
        ),
        _make("reverse_omega", 1, "0 = 0", "y1 < x1", "omega*: one NegN-galaxy"),
        _make("zeta", 1, "0 = 0", _zeta(), "odds descending then evens ascending: zeta"),
        _make("triangle_lex", 2, "x2 <= x1", LEX2, "lexicographic order on n <= k: omega, one galaxy"),
        _make(
            "columns_omega_star",
            2,
            "0 = 0",
            "x1 < y1 | x1 = y1 & y2 < x2",
            "columns ordered ascending, each column descending: omega* * omega",
        ),
    ]


def broken_fixture() -> Interpretation:
    """An order formula that is reflexive; validation must refute irreflexivity."""
    return _make("broken_reflexive", 1, "0 = 0", "x1 = y1", "not an order")


def get(name: str) -> Interpretation:
    for entry in catalog() + [broken_fixture()]:
        if entry.name == name:
            return entry
    raise KeyError(f"unknown catalog entry {name!r}")


def names() -> list[str]:
    return [entry.name for entry in catalog()]
