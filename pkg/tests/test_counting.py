import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from presburger import counting as C
from presburger.bruteforce import naive_count


@pytest.mark.parametrize(
    "A, u, expected",
    [
        ([[1, 1]], [5], 6),
        ([[1]], [3], 1),
        ([[1, -1]], [0], C.INFINITE),
        ([[1, -1]], [2], C.INFINITE),
        ([[1, 1], [1, -1]], [4, 0], 1),
        ([[2]], [3], 0),
        ([[1, 2, 3]], [6], 7),
    ],
)
def test_count_examples(A, u, expected):
    assert C.count_solutions(A, u) == expected


def test_unsolvable_system_with_kernel_has_no_solutions():
    # lam0 - lam1 = 0 has a kernel, but 2 lam0 - 2 lam1 = 1 has no solution
    assert C.has_unbounded_kernel([[2, -2]])
    assert C.count_solutions([[2, -2]], [1]) == 0


def test_counting_instance():
    inst = C.CountingInstance(C.parse_matrix("1,1;0,2"), C.parse_vector("4,2"))
    assert (inst.d, inst.n) == (2, 2)
    assert C.count_solutions(inst) == 1
    with pytest.raises(ValueError):
        C.CountingInstance([[1, 1]], [1, 2])
    with pytest.raises(ValueError):
        C.parse_matrix("1,1;2")


def test_enumeration_budget():
    with pytest.raises(C.EnumerationBudgetExceeded):
        C.count_solutions([[1, 1, 1, 1]], [40], max_candidates=10)


def test_solution_bound():
    assert C.solution_bound([[1, 1]], [5]) == 5
    assert C.solution_bound([[2]], [3]) == 0


@settings(max_examples=60)
@given(
    st.integers(1, 2).flatmap(
        lambda d: st.tuples(
            st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=d, max_size=d),
            st.lists(st.integers(0, 12), min_size=d, max_size=d),
        )
    )
)
def test_count_matches_nested_loops(case):
    A, u = case
    got = C.count_solutions(A, u)
    near, far = naive_count(A, u, 30), naive_count(A, u, 60)
    if got == C.INFINITE:
        assert far > near
    else:
        assert got == near == far


def test_fit_sum_of_two():
    pp = C.fit_piecewise([[1, 1]], [(u,) for u in range(31)])
    assert len(pp.pieces) == 1
    poly = pp.pieces[0][1]
    assert all(poly(u) == u + 1 for u in range(31))
    assert poly.degree == 1 == C.degree_bound([[1, 1]])


def test_fit_sum_of_three():
    pp = C.fit_piecewise([[1, 1, 1]], [(u,) for u in range(25)])
    assert all(pp(u) == Fraction((u + 1) * (u + 2), 2) for u in range(25))
    assert C.verify_degree_bound([[1, 1, 1]], pp)


def test_fit_splits_by_parity():
    pp = C.fit_piecewise([[2, 2]], [(u,) for u in range(31)])
    assert len(pp.pieces) == 2
    for region, poly in pp.pieces:
        if region.residue == (1,):
            assert all(poly(u) == 0 for u in range(1, 31, 2))
        else:
            assert all(poly(u) == u // 2 + 1 for u in range(0, 31, 2))


def test_fit_two_rows_needs_chambers():
    A = [[1, 1, 0], [0, 1, 1]]
    samples = list(itertools.product(range(12), repeat=2))
    pp = C.fit_piecewise(A, samples)
    for u in samples:
        assert pp(*u) == min(u) + 1
    assert C.verify_degree_bound(A, pp)


def test_fit_rejects_infinite_counts():
    with pytest.raises(ValueError):
        C.fit_piecewise([[1, -1]], [(0,), (1,)])


def test_verify_degree_bound_examples():
    pp = C.fit_piecewise([[1, 1]], [(u,) for u in range(10)])
    assert C.verify_degree_bound([[1, 1]], pp)
    ident = C.fit_piecewise([[1, 0], [0, 1]], list(itertools.product(range(6), repeat=2)))
    assert ident.degree == 0 and C.verify_degree_bound([[1, 0], [0, 1]], ident)
    cubic = C.Polynomial.from_dict(1, {(3,): Fraction(1)})
    fake = C.PiecewisePolynomial([(C.Region(1, (0,)), cubic)], 3, 1)
    assert not C.verify_degree_bound([[1, 1]], fake)


def test_polynomial_printing_and_json():
    poly = C.interpolate([(u,) for u in range(5)], [(u + 1) * (u + 2) // 2 for u in range(5)], 2)
    assert poly.degree == 2
    assert poly(10) == 66
    assert "u" in str(poly) or "x" in str(poly)
    assert isinstance(poly.to_json(), list)


def test_interpolate_reports_no_fit():
    assert C.interpolate([(u,) for u in range(5)], [u * u for u in range(5)], 1) is None


@settings(max_examples=20)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=2))
def test_fit_evaluates_back(A):
    if any(not any(col) for col in zip(*A)) or C.has_unbounded_kernel(A):
        return
    samples = list(itertools.product(range(7), repeat=len(A)))
    pp = C.fit_piecewise(A, samples)
    assert C.verify_degree_bound(A, pp)
    for u in samples:
        assert pp(*u) == C.count_solutions(A, u)
