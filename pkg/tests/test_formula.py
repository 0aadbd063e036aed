import pytest
from hypothesis import given

from generators import assignments, formulas, qf_formulas
from presburger import formula as F


def test_parse_existential():
    phi = F.parse("exists z. y = x + z + 1")
    assert isinstance(phi, F.Exists)
    assert F.free_vars(phi) == {"x", "y"}


def test_parse_closed_atom():
    phi = F.parse("0 = 0")
    assert isinstance(phi, F.Atom)
    assert F.free_vars(phi) == frozenset()


@pytest.mark.parametrize("text", ["x == 1 mod 0", "x = ", "exists . x = 1", "x < y y", "3 * 4 = x"])
def test_parse_errors(text):
    with pytest.raises((F.ParseError, ValueError)):
        F.parse(text)


def test_numeral_overflow():
    with pytest.raises(F.NumeralOverflow):
        F.parse("x = 99999999999999999999999")


@pytest.mark.parametrize(
    "text, sigma, expected",
    [
        ("x == 0 mod 2", {"x": 4}, True),
        ("x < y", {"x": 3, "y": 3}, False),
        ("y = 2*x + 1", {"x": 5, "y": 11}, True),
        ("true & !false", {}, True),
    ],
)
def test_evaluate_examples(text, sigma, expected):
    assert F.evaluate(F.parse(text), sigma) is expected


def test_evaluate_rejects_quantifiers():
    with pytest.raises(ValueError):
        F.evaluate(F.parse("exists x. x = 1"), {})


def test_unbound_variable():
    with pytest.raises(F.UnboundVariable):
        F.evaluate(F.parse("x = 1"), {})


def test_substitute_examples():
    phi = F.substitute(F.parse("exists z. y = x + z + 1"), "x", 2)
    assert F.format_formula(phi) == "exists z. y = 2 + z + 1"
    assert F.format_formula(F.substitute(F.parse("x = x"), "x", 7)) == "7 = 7"
    bound = F.parse("exists x. x = y")
    assert F.substitute(bound, "x", 1) == bound


def test_substitution_avoids_capture():
    phi = F.substitute_many(F.parse("exists z. x < z"), {"x": F.Var("z")})
    # the bound variable is renamed, so the result still mentions the free z
    assert F.free_vars(phi) == {"z"}
    assert isinstance(phi, F.Exists) and phi.var != "z"


@given(formulas())
def test_print_parse_round_trip(phi):
    assert F.parse(F.format_formula(phi)) == phi


@given(qf_formulas(), qf_formulas(), assignments())
def test_evaluate_respects_connectives(a, b, sigma):
    ea, eb = F.evaluate(a, sigma), F.evaluate(b, sigma)
    assert F.evaluate(F.Not(a), sigma) == (not ea)
    assert F.evaluate(F.And(a, b), sigma) == (ea and eb)
    assert F.evaluate(F.Or(a, b), sigma) == (ea or eb)
    assert F.evaluate(F.Implies(a, b), sigma) == ((not ea) or eb)


@given(qf_formulas(), assignments())
def test_substitute_then_evaluate(phi, sigma):
    k = sigma["x"]
    rest = {v: n for v, n in sigma.items() if v != "x"}
    assert F.evaluate(F.substitute(phi, "x", k), {**rest, "x": 0}) == F.evaluate(phi, sigma)


@given(qf_formulas(), assignments())
def test_compiled_matches_evaluate(phi, sigma):
    names = sorted(sigma)
    f = F.compile_formula(phi, names)
    assert f(*[sigma[n] for n in names]) == F.evaluate(phi, sigma)
