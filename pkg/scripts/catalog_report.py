"""Analyse every catalog interpretation and print one line per entry.

For each entry: validation verdict, VD*-rank, the galaxy types along the
first representatives, and whether a lexicographic representation could be
built and verified.  ``--out`` also writes the full results as JSON.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from presburger import catalog, lexrep, orderanalysis
from presburger.interp import validate


@dataclass
class Config:
    prefix: int = 200
    entries: tuple[str, ...] = ()
    out: str | None = None


def analyse(name: str, cfg: Config) -> dict:
    I = catalog.get(name)
    row: dict = {"name": name, "dim": I.dim}
    t0 = time.perf_counter()
    row["valid"] = validate(I).ok
    row["rank"] = orderanalysis.vd_rank(I).rank
    try:
        R = lexrep.construct_lex_rep(I)
        report = lexrep.verify_lex_rep(I, R, prefix=cfg.prefix)
        row["lexrep_arity"] = R.arity
        row["lexrep_ok"] = report.ok
        row["skeleton"] = report.skeleton[:6]
    except (lexrep.UnsupportedShape, lexrep.SpineSynthesisFailed, lexrep.CardinalityFitFailed) as exc:
        row["lexrep_ok"] = None
        row["lexrep_error"] = str(exc)
    row["seconds"] = round(time.perf_counter() - t0, 2)
    return row


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prefix", type=int, default=Config.prefix)
    ap.add_argument("--out")
    ap.add_argument("entries", nargs="*")
    args = ap.parse_args()
    cfg = Config(args.prefix, tuple(args.entries) or tuple(catalog.names()), args.out)
    rows = []
    for name in cfg.entries:
        row = analyse(name, cfg)
        rows.append(row)
        lex = {True: "ok", False: "FAIL", None: "unsupported"}[row["lexrep_ok"]]
        print(f"{name:24s} dim={row['dim']} valid={row['valid']} rank={row['rank']} lexrep={lex:11s} {row['seconds']:6.2f}s")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
