"""Compare the two formula-to-lattice routes on random formulas.

For each formula the polyhedral route and the minimal-solution route are
run through the disjoint decomposition; the script records piece counts,
wall time and timeouts.  The minimal-solution route can produce cones with
many periods, which is where the slow cases come from.
"""

from __future__ import annotations

import argparse
import random
import signal
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from generators import random_qf  # noqa: E402

from presburger import formula as F  # noqa: E402
from presburger import semilinear as SL  # noqa: E402


@dataclass
class Config:
    formulas: int = 100
    arity: int = 2
    depth: int = 2
    seed: int = 0
    timeout: int = 10


class Timeout(Exception):
    pass


def _alarm(*_):
    raise Timeout


def run_route(phi, names, method: str, cfg: Config):
    signal.signal(signal.SIGALRM, _alarm)
    signal.alarm(cfg.timeout)
    t0 = time.perf_counter()
    try:
        D = SL.ito_decompose(SL.from_formula(phi, names, method))
        return len(D.pieces), time.perf_counter() - t0
    except (Timeout, SL.PieceBudgetExceeded, MemoryError):
        return None, time.perf_counter() - t0
    finally:
        signal.alarm(0)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for f, default in vars(Config()).items():
        ap.add_argument(f"--{f}", type=int, default=default)
    cfg = Config(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    names = ["x", "y", "z"][: cfg.arity]
    stats = {m: {"pieces": [], "times": [], "failed": []} for m in ("polyhedral", "hilbert")}
    for _ in range(cfg.formulas):
        phi = random_qf(rng, names, cfg.depth)
        for method, st in stats.items():
            n, dt = run_route(phi, names, method, cfg)
            st["times"].append(dt)
            if n is None:
                st["failed"].append(F.format_formula(phi))
            else:
                st["pieces"].append(n)
    for method, st in stats.items():
        p = st["pieces"] or [0]
        print(f"{method:10s} median pieces {statistics.median(p):6.1f}  max {max(p):5d}  "
              f"total {sum(st['times']):7.1f}s  over {cfg.timeout}s: {len(st['failed'])}")
        for text in st["failed"][:3]:
            print(f"    {text}")


if __name__ == "__main__":
    main()
