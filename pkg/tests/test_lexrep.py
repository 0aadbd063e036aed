import itertools

import pytest

from presburger import catalog
from presburger import formula as F
from presburger import lexrep as LR
from presburger import orderanalysis as OA
from presburger import semilinear as SL
from presburger.interp import Interpretation, sort_points

L = SL.Lattice


def lex_points(R: LR.LexRepresentation, radius: int):
    return sorted(R.points(radius))


def test_spine_lex():
    spine = LR.synthesize_spine(catalog.get("lex_omega2"))
    assert spine.infinite
    assert [spine(k) for k in range(6)] == [(k, 0) for k in range(6)]


def test_spine_single_galaxy():
    spine = LR.synthesize_spine(catalog.get("omega"))
    assert not spine.infinite and len(spine) == 1
    assert spine.tail == ((0,),)


def test_spine_finite():
    spine = LR.synthesize_spine(catalog.get("finite5"))
    assert len(spine) == 1


def test_condensation_shapes():
    assert LR.condensation_shape(catalog.get("omega_plus_omega_star")).tags == ["Finite(2)"]
    assert LR.condensation_shape(catalog.get("lex_omega2")).tags == ["TypeN"]


def test_spine_omega_plus_k():
    # omega copies of omega followed by two more copies: omega^2 + omega * 2
    less = "x1 < 2 & y1 >= 2 | (x1 < 2 & y1 < 2 | x1 >= 2 & y1 >= 2) & (x1 < y1 | x1 = y1 & x2 < y2)"
    less = f"(x1 >= 2 & y1 < 2) | ({less}) & !(x1 < 2 & y1 >= 2)"
    I = Interpretation("omega2_plus_omega2", 2, F.parse("0 = 0"), F.parse(less))
    shape = LR.condensation_shape(I)
    assert shape.tags == ["TypeN", "Finite(2)"]
    spine = LR.synthesize_spine(I, shape=shape)
    assert spine(0) == (2, 0) and spine(5) == (7, 0)
    assert spine.tail == ((0, 0), (1, 0))


def test_unsupported_shape():
    # zeta many copies of omega: the condensation is a Z-galaxy
    I = Interpretation("zeta_omega", 2, F.parse("0 = 0"),
                       F.parse(f"({catalog._zeta()}) | x1 = y1 & x2 < y2"))
    with pytest.raises(LR.UnsupportedShape):
        LR.synthesize_spine(I)


@pytest.mark.parametrize(
    "entry, arity, first",
    [
        ("omega", 1, [(0,), (1,), (2,)]),
        ("finite5", 1, [(0,), (1,), (2,), (3,), (4,)]),
        ("lex_omega2", 2, [(0, 0), (0, 1), (0, 2)]),
    ],
)
def test_construct_examples(entry, arity, first):
    R = LR.construct_lex_rep(catalog.get(entry))
    assert R.arity == arity
    pts = [p for p in lex_points(R, 40) if all(x >= 0 for x in p)]
    assert pts[: len(first)] == first


def test_finite5_is_five_points():
    R = LR.construct_lex_rep(catalog.get("finite5"))
    assert SL.cardinality(R.S) == 5


def test_reverse_omega_descends():
    R = LR.construct_lex_rep(catalog.get("reverse_omega"))
    assert R.arity == 1
    pts = lex_points(R, 30)
    assert pts[-1] == (0,) and all(p[0] <= 0 for p in pts)


@pytest.mark.parametrize("entry", ["omega", "finite5", "omega_plus_omega_star", "zeta", "lex_omega2", "omega_times_k"])
def test_construct_then_verify(entry):
    I = catalog.get(entry)
    R = LR.construct_lex_rep(I)
    report = LR.verify_lex_rep(I, R, prefix=60)
    assert report.ok, report.to_json()
    assert all(p.is_fundamental() for p in R.S.pieces)


def test_verify_detects_mismatch():
    evens = LR.LexRepresentation(1, SL.Decomposition(1, (L((0,), ((2,),), natural=False),)))
    assert LR.verify_lex_rep(catalog.get("omega"), evens, prefix=50).ok
    five = LR.LexRepresentation(1, SL.Decomposition(1, tuple(L((i,), natural=False) for i in range(5))))
    report = LR.verify_lex_rep(catalog.get("omega"), five, prefix=50)
    assert not report.ok and report.mismatch is not None
    # the first 50 elements of omega + omega* all lie in its omega part
    assert LR.verify_lex_rep(catalog.get("omega_plus_omega_star"), evens, prefix=50).ok
    assert not LR.verify_lex_rep(catalog.get("finite5"), evens, prefix=50).ok


def test_verify_truncates_on_small_budget():
    I = catalog.get("lex_omega2")
    R = LR.construct_lex_rep(I)
    report = LR.verify_lex_rep(I, R, prefix=5000, point_budget=500)
    assert report.truncated and not report.ok


def test_growing_boxes_cardinalities():
    I = catalog.get("growing_boxes")
    R = LR.construct_lex_rep(I)
    steps = [p for p in R.provenance if p["step"] == "finite boxes"]
    assert steps and all(p["degree"] <= 1 for p in steps)
    # finite galaxies of the representation, read off by brute force on a box
    pts = lex_points(R, 80)
    finite_sizes = []
    for key, group in itertools.groupby(pts, key=lambda p: p[:-1]):
        g = list(group)
        if max(abs(x) for x in g[-1]) < 80 and max(abs(x) for x in g[0]) < 80 and len(g) < 80:
            finite_sizes.append(len(g))
    assert finite_sizes[:31] == [k + 1 for k in range(31)]


def test_json_round_trip():
    R = LR.construct_lex_rep(catalog.get("lex_omega2"))
    back = LR.LexRepresentation.from_json(R.to_json())
    assert back.S == R.S and back.arity == R.arity


def test_provenance_records_galaxies():
    R = LR.construct_lex_rep(catalog.get("omega_plus_omega_star"))
    galaxies = [p["galaxy"] for p in R.provenance if "galaxy" in p]
    assert galaxies == ["TypeN", "TypeNegN"]


def test_condensation_brute_force_order():
    # representatives listed by the spine are increasing in the order
    I = catalog.get("growing_boxes")
    spine = LR.synthesize_spine(I)
    reps = [spine(k) for k in range(8)]
    assert sort_points(I, reps) == reps
    # column k contributes a box of k+1 points and then a Z-galaxy
    assert [OA.galaxy_type(I, p) for p in reps[:6]] == [
        OA.Finite(1), OA.TYPE_Z, OA.Finite(2), OA.TYPE_Z, OA.Finite(3), OA.TYPE_Z
    ]
