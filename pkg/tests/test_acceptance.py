"""Acceptance gate: nine criteria, each printed as one PASS/FAIL line.

Run with pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time

import numpy as np
import pytest

from generators import close, random_prenex, random_qf
from presburger import bruteforce as BF
from presburger import counting as CNT
from presburger import formula as F
from presburger import lexrep as LR
from presburger import orderanalysis as OA
from presburger import qelim as Q
from presburger import semilinear as SL
from presburger.catalog import broken_fixture, catalog, get
from presburger.interp import validate, xs

RESULTS: dict[int, str] = {}

# pinned limits
QE_FORMULAS, QE_BOUND, QE_SECONDS = 200, 200, 120
SL_FORMULAS, SL_BOUND, SL_SECONDS = 100, 40, 120
GALAXY_BOXES = (50, 100, 200)
GALAXY_POINTS = 20
RANK_SECONDS = 300
COUNT_SECONDS, COUNT_INSTANCES, FIT_MATRICES = 180, 150, 50
LEX_PREFIX, LEX_SECONDS = 200, 300


def record(n: int, ok: bool, detail: str, seconds: float) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {detail}"
    RESULTS[n] = line
    print(line)


# ---------------------------------------------------------------- 1


def _qe_check(rng: random.Random):
    """One prenex formula: check every elimination level and the closure."""
    quants, matrix, free = random_prenex(rng)
    # level i: the formula with the innermost i quantifiers applied
    levels = [matrix]
    for kind, v in reversed(quants):
        levels.append(F.Exists(v, levels[-1]) if kind == "exists" else F.Forall(v, levels[-1]))
    elim = [matrix] + [Q.eliminate(phi) for phi in levels[1:]]
    mismatches = 0
    checks = 0
    for i, (kind, v) in enumerate(reversed(quants)):
        body, result = elim[i], elim[i + 1]
        outer = [w for _, w in quants[: len(quants) - i - 1]] + free
        names = outer + [v]
        body_f = F.compile_formula(body, names)
        res_f = F.compile_formula(result, outer) if outer else None
        res_const = None if outer else F.evaluate(result, {})
        for _ in range(4):
            sigma = [rng.randint(0, 20) for _ in outer]
            truth = res_f(*sigma) if res_f else res_const
            hit = next((x for x in range(QE_BOUND + 1) if body_f(*sigma, x) == (kind == "exists")), None)
            if hit is not None:
                checks += 1
                # a witness for exists, a counterexample for forall
                if truth != (kind == "exists"):
                    mismatches += 1
    sentence = F.forall_many(free, F.Or(levels[-1], F.Not(levels[-1]))) if free else F.Or(levels[-1], F.Not(levels[-1]))
    tautology = Q.decide(sentence)
    return mismatches, checks, tautology


def test_criterion_1_qe_soundness():
    t0 = time.time()
    rng = random.Random(1)
    bad = total = 0
    taut_fail = 0
    for _ in range(QE_FORMULAS):
        m, c, taut = _qe_check(rng)
        bad += m
        total += c
        taut_fail += not taut
    dt = time.time() - t0
    ok = bad == 0 and taut_fail == 0 and dt < QE_SECONDS
    record(1, ok, f"{QE_FORMULAS} formulas, {total} witness checks, {bad} disagreements, {taut_fail} failed tautologies", dt)
    assert ok


# ---------------------------------------------------------------- 2


def _sl_check(rng: random.Random, m: int) -> str | None:
    names = xs(m)
    phi = random_qf(rng, names, depth=2)
    D = SL.ito_decompose(SL.from_formula(phi, names))
    if not all(p.is_fundamental() for p in D.pieces):
        return "non-fundamental piece"
    counts = SL.point_multiset(D, [0] * m, [SL_BOUND] * m)
    if any(c > 1 for c in counts.values()):
        return "overlapping pieces"
    grid = np.array(list(itertools.product(range(SL_BOUND + 1), repeat=m)))
    f = F.compile_formula(phi, names)
    truth = {tuple(int(v) for v in p) for p in grid if f(*p)}
    if truth != set(counts):
        return f"point set differs for {F.format_formula(phi)}"
    return None


def test_criterion_2_semilinear_fidelity():
    t0 = time.time()
    rng = random.Random(2)
    errors = []
    for i in range(SL_FORMULAS):
        err = _sl_check(rng, 1 + i % 3)
        if err:
            errors.append(err)
    dt = time.time() - t0
    ok = not errors and dt < SL_SECONDS
    record(2, ok, f"{SL_FORMULAS} formulas on [0,{SL_BOUND}]^m, {len(errors)} failures {errors[:2]}", dt)
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_dimension():
    t0 = time.time()
    dims = [SL.decompose_formula(F.parse("0 = 0"), xs(k)).dimension for k in (1, 2, 3)]
    line = SL.decompose_formula(F.parse("y = 2*x"), ["x", "y"]).dimension
    singles = [SL.decompose_formula(F.parse(s), n).dimension for s, n in (("x = 5 & y = 7", ["x", "y"]), ("x = 3", ["x"]))]
    ok = dims == [1, 2, 3] and line == 1 and singles == [0, 0]
    record(3, ok, f"N^k -> {dims}, y=2x -> {line}, singletons -> {singles}", time.time() - t0)
    assert ok


# ---------------------------------------------------------------- 4


def _sample_points(I, rng: random.Random):
    side = 20 if I.dim == 1 else 12
    pts = [p for p in itertools.product(range(side + 1), repeat=I.dim)]
    D = F.compile_formula(I.domain, xs(I.dim))
    pts = [p for p in pts if D(*p)]
    return rng.sample(pts, min(len(pts), GALAXY_POINTS + 5)), len(pts)


def test_criterion_4_galaxy_classification():
    t0 = time.time()
    rng = random.Random(4)
    problems = []
    sampled = {}
    for I in catalog():
        box = BF.BoxOrder.build(I, GALAXY_BOXES)
        pts, available = _sample_points(I, rng)
        # a finite domain smaller than the quota is sampled completely
        sampled[I.name] = (len(pts), min(available, GALAXY_POINTS))
        for p in pts:
            tag, size = BF.galaxy_class(box, p)
            got = OA.galaxy_type(I, p, count_budget=10_000)
            if (got.tag, got.size) != (tag, size):
                problems.append(f"{I.name}{p}: {got} vs brute force {tag}{size or ''}")
    oo = get("omega_plus_omega_star")
    oo_types = {str(OA.galaxy_type(oo, (a,))) for a in range(20)}
    if oo_types != {"TypeN", "TypeNegN"}:
        problems.append(f"omega_plus_omega_star types {oo_types}")
    zeta = {str(OA.galaxy_type(get("zeta"), (a,))) for a in range(20)}
    if zeta != {"TypeZ"}:
        problems.append(f"zeta types {zeta}")
    gb = get("growing_boxes")
    for k in range(31):
        t = OA.galaxy_type(gb, (k, k // 2), count_budget=10_000)
        if str(t) != f"Finite({k + 1})":
            problems.append(f"growing_boxes column {k}: {t}")
    few = [n for n, (c, need) in sampled.items() if c < need]
    dt = time.time() - t0
    ok = not problems and not few
    record(4, ok, f"{sum(c for c, _ in sampled.values())} sampled points, {len(problems)} problems {problems[:3]}", dt)
    assert ok


# ---------------------------------------------------------------- 5


def test_criterion_5_condensation_dimension():
    t0 = time.time()
    dims = {n: OA.condense(get(n)).dimension for n in ("lex_omega2", "growing_boxes", "omega")}
    ok = dims == {"lex_omega2": 1, "growing_boxes": 1, "omega": 0}
    record(5, ok, f"{dims}", time.time() - t0)
    assert ok


# ---------------------------------------------------------------- 6


def test_criterion_6_rank():
    t0 = time.time()
    ranks = {I.name: (OA.vd_rank(I).rank, I.dim) for I in catalog()}
    expected = {"finite5": 0, "omega": 1, "omega_plus_omega_star": 1, "lex_omega2": 2, "growing_boxes": 2}
    dt = time.time() - t0
    over = [n for n, (r, m) in ranks.items() if r > m]
    wrong = [n for n, r in expected.items() if ranks[n][0] != r]
    ok = not over and not wrong and dt < RANK_SECONDS
    record(6, ok, "ranks " + ", ".join(f"{n}={r}" for n, (r, _) in ranks.items()), dt)
    assert ok


# ---------------------------------------------------------------- 7


ORACLE_BOX = {1: 400, 2: 200, 3: 60, 4: 30}


def _oracle(A, u):
    """Box count, repeated in the doubled box to tell finite from infinite."""
    b = ORACLE_BOX[len(A[0])]
    small = BF.naive_count(A, u, b)
    big = BF.naive_count(A, u, 2 * b)
    return CNT.INFINITE if big > small else small


def test_criterion_7_counting():
    t0 = time.time()
    rng = random.Random(7)
    bad = []
    for _ in range(COUNT_INSTANCES):
        d, n = rng.randint(1, 2), rng.randint(1, 4)
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(d)]
        u = [rng.randint(0, 20) for _ in range(d)]
        got, want = CNT.count_solutions(A, u), _oracle(A, u)
        if got != want:
            bad.append((A, u, got, want))
    fitted = 0
    while fitted < FIT_MATRICES:
        d, n = rng.randint(1, 2), rng.randint(1, 4)
        A = [[rng.randint(0, 4) for _ in range(n)] for _ in range(d)]
        if CNT.has_unbounded_kernel(A):
            continue
        samples = list(itertools.product(range(13), repeat=d))
        try:
            pp = CNT.fit_piecewise(A, samples)
        except CNT.FitFailure:
            bad.append((A, "fit failed"))
            fitted += 1
            continue
        if not CNT.verify_degree_bound(A, pp):
            bad.append((A, "degree bound"))
        if any(pp(*u) != CNT.count_solutions(A, u) for u in samples):
            bad.append((A, "evaluation"))
        fitted += 1
    p1 = CNT.fit_piecewise([[1, 1]], [(u,) for u in range(31)])
    p2 = CNT.fit_piecewise([[1, 1, 1]], [(u,) for u in range(26)])
    shapes_ok = (
        len(p1.pieces) == 1
        and all(p1(u) == u + 1 for u in range(31))
        and len(p2.pieces) == 1
        and all(p2(u) == (u + 1) * (u + 2) // 2 for u in range(26))
    )
    dt = time.time() - t0
    ok = not bad and shapes_ok and dt < COUNT_SECONDS
    record(7, ok, f"{COUNT_INSTANCES} oracle instances, {FIT_MATRICES} fits, {len(bad)} problems {bad[:2]}", dt)
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_lex_representation():
    t0 = time.time()
    results = {}
    for I in catalog():
        if I.dim != 2:
            continue
        shape = LR.condensation_shape(I)
        if [g.tag for _, g in shape.galaxies] not in ([], ["Finite"], ["N"]):
            continue
        try:
            R = LR.construct_lex_rep(I)
            rep = LR.verify_lex_rep(I, R, LEX_PREFIX)
            results[I.name] = "ok" if rep.ok else f"mismatch {rep.mismatch} truncated={rep.truncated}"
        except Exception as exc:  # reported, never swallowed
            results[I.name] = f"{type(exc).__name__}: {exc}"
    dt = time.time() - t0
    ok = bool(results) and all(v == "ok" for v in results.values()) and dt < LEX_SECONDS
    record(8, ok, f"{results}", dt)
    assert ok


# ---------------------------------------------------------------- 9


def test_criterion_9_validation():
    t0 = time.time()
    failing = [I.name for I in catalog() if not validate(I).ok]
    broken = validate(broken_fixture()).verdict("irreflexive")
    ok = not failing and broken is False
    record(9, ok, f"{len(catalog())} entries, failing {failing}, broken fixture irreflexive={broken}", time.time() - t0)
    assert ok


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
