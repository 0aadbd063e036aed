import itertools

import pytest

from presburger import bruteforce as BF
from presburger import catalog
from presburger import formula as F
from presburger import orderanalysis as OA
from presburger import semilinear as SL
from presburger.interp import Interpretation, xs


@pytest.mark.parametrize(
    "entry, point, expected",
    [
        ("omega_plus_omega_star", (0,), OA.TYPE_N),
        ("omega_plus_omega_star", (1,), OA.TYPE_NEGN),
        ("growing_boxes", (3, 1), OA.Finite(4)),
        ("growing_boxes", (3, 9), OA.TYPE_Z),
        ("zeta", (4,), OA.TYPE_Z),
        ("finite5", (2,), OA.Finite(5)),
        ("reverse_omega", (7,), OA.TYPE_NEGN),
        ("columns_omega_star", (2, 3), OA.TYPE_NEGN),
    ],
)
def test_galaxy_type_examples(entry, point, expected):
    assert OA.galaxy_type(catalog.get(entry), point) == expected


def test_galaxy_type_rejects_bad_points():
    with pytest.raises(ValueError):
        OA.galaxy_type(catalog.get("finite5"), (9,))
    with pytest.raises(ValueError):
        OA.galaxy_type(catalog.get("omega"), (1, 2))


def test_galaxy_too_large():
    big = Interpretation("finite100", 1, F.parse("x1 < 100"), F.parse("x1 < y1"))
    with pytest.raises(OA.GalaxyTooLarge):
        OA.galaxy_type(big, (0,), count_budget=10)


def test_galaxy_type_str():
    assert str(OA.Finite(3)) == "Finite(3)"
    assert OA.Finite(3).finite and not OA.TYPE_Z.finite
    with pytest.raises(ValueError):
        OA.Finite(0)


@pytest.mark.parametrize("entry", ["omega_plus_omega_star", "zeta", "growing_boxes"])
def test_galaxy_formula_matches_boxes(entry):
    interp = catalog.get(entry)
    G = F.compile_formula(OA.galaxy_formula(interp), xs(interp.dim) + xs(interp.dim, "y"))
    box = BF.BoxOrder.build(interp, (8, 16, 32))
    for a in box.sorted_in(6):
        same = set(BF.galaxy_in_box(box, a, 8, 16))
        for b in box.sorted_in(6):
            assert G(*a, *b) == (b in same), (a, b)


def _points(phi, m, bound):
    f = F.compile_formula(phi, xs(m))
    return {p for p in itertools.product(range(bound + 1), repeat=m) if f(*p)}


def test_condense_lex():
    c = OA.condense(catalog.get("lex_omega2"))
    assert _points(c.interpretation.domain, 2, 40) == {(k, 0) for k in range(41)}
    assert c.dimension == 1


@pytest.mark.parametrize("entry, reps", [("omega", {(0,)}), ("omega_plus_omega_star", {(0,), (1,)}), ("finite5", {(0,)})])
def test_condense_one_dimensional(entry, reps):
    c = OA.condense(catalog.get(entry))
    assert _points(c.interpretation.domain, 1, 60) == reps
    assert c.dimension == 0


def test_condense_split_z():
    c = OA.condense(catalog.get("zeta"), split_z=True)
    # the representative 0 and its immediate predecessor 1
    assert _points(c.interpretation.domain, 1, 60) == {(0,), (1,)}


@pytest.mark.parametrize(
    "entry, rank",
    [
        ("omega", 1),
        ("finite5", 0),
        ("omega_plus_omega_star", 1),
        ("omega_times_k", 1),
        ("lex_omega2", 2),
        ("growing_boxes", 2),
        ("zeta", 1),
        ("columns_omega_star", 2),
    ],
)
def test_rank_examples(entry, rank):
    result = OA.vd_rank(catalog.get(entry))
    assert result.rank == rank
    assert result.rank <= catalog.get(entry).dim
    assert result.final_size >= 1


def test_rank_chain_dimensions_decrease():
    result = OA.vd_rank(catalog.get("lex_omega2"))
    dims = [2] + [c.dimension for c in result.chain]
    assert all(a > b for a, b in zip(dims, dims[1:]))


@pytest.mark.parametrize("entry", ["lex_omega2", "growing_boxes", "omega_times_k", "columns_omega_star"])
def test_one_representative_per_galaxy(entry):
    interp = catalog.get(entry)
    c = OA.condense(interp)
    rep = F.compile_formula(c.interpretation.domain, xs(interp.dim))
    box = BF.BoxOrder.build(interp, (10, 20, 40))
    # galaxies lying entirely inside the inner box: their first and last
    # points are interior, so the run in the box is the whole galaxy
    for run in BF.galaxy_partition(box, 10, 40)[1:-1]:
        if all(max(p) < 10 for p in run) and len(run) < len(box.sorted_in(10)):
            hits = [p for p in run if rep(*p)]
            assert len(hits) <= 1
    # and every representative found is the lexicographic least of its run
    for run in BF.galaxy_partition(box, 10, 40):
        for p in run:
            if rep(*p):
                assert p == min(run) or any(max(q) >= 10 for q in run)


def test_condensation_count_matches_brute_force():
    # lex order on {0,1,2} x N: three copies of omega, one galaxy per column
    interp = Interpretation("cols3", 2, F.parse("x1 < 3"), F.parse(catalog.LEX2))
    c = OA.condense(interp)
    reps = _points(c.interpretation.domain, 2, 20)
    box = BF.BoxOrder.build(interp, (20, 40))
    runs = BF.galaxy_partition(box, 20, 40)
    assert reps == {min(run) for run in runs} == {(0, 0), (1, 0), (2, 0)}
    assert c.dimension == 0
    # N x {0,1,2} in lex order is omega again: a single galaxy
    rows = Interpretation("rows3", 2, F.parse("x2 < 3"), F.parse(catalog.LEX2))
    assert _points(OA.condense(rows).interpretation.domain, 2, 20) == {(0, 0)}


def test_domain_decomposition():
    D = OA.domain_decomposition(catalog.get("triangle_lex"))
    assert SL.dimension(D) == 2
    assert SL.point_multiset(D, [0, 0], [5, 5]).keys() == {(k, n) for k in range(6) for n in range(k + 1)}
