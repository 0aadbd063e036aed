"""Fit the lattice-point counting function for a few matrices.

Prints each piece of the fitted piecewise polynomial, its degree and the
bound n - rank(A).  Matrices come from the command line ("1,1;0,2") or a
small default list.
"""

from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass

from presburger import counting as C

DEFAULTS = ["1,1", "2,2", "1,1,1", "1,2,3", "1,1,0;0,1,1", "2,1,1;1,0,2"]


@dataclass
class Config:
    lo: int = 0
    hi: int = 12


def report(text: str, cfg: Config) -> None:
    A = C.parse_matrix(text)
    print(f"A = {A}")
    if C.has_unbounded_kernel(A):
        print("  counts are infinite (nonzero kernel in N^n)\n")
        return
    samples = list(itertools.product(range(cfg.lo, cfg.hi + 1), repeat=len(A)))
    pp = C.fit_piecewise(A, samples)
    print(f"  {len(pp.pieces)} pieces, degree {pp.degree}, bound {C.degree_bound(A)}, "
          f"holds={C.verify_degree_bound(A, pp)}")
    for region, poly in pp.pieces:
        where = f"u == {list(region.residue)} mod {region.modulus}"
        if region.normals:
            where += f", sign cells {list(region.cells)} of {list(region.normals)}"
        print(f"    {where}: {poly}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("matrices", nargs="*")
    ap.add_argument("--range", default="0:12", help="sample range lo:hi per coordinate")
    args = ap.parse_args()
    lo, hi = map(int, args.range.split(":"))
    cfg = Config(lo, hi)
    for text in args.matrices or DEFAULTS:
        report(text, cfg)


if __name__ == "__main__":
    main()
