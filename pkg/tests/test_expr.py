import math
from fractions import Fraction

import numpy as np
import pytest

from expr import (
    Const, DomainError, ParseError, UnknownSymbolError, Verdict, differentiate, equivalent, evaluate, jet_name,
    parse_expression, parse_number, print_expression, simplify, substitute,
)
from mech import JetChart


def _symbol(e, name):
    return next(s for s in e.free_symbols if s.name == name)


# (source template, float function) per node; every function stays on the real domain
UNARY = [
    ("({0})^2", lambda a: a * a),
    ("sin({0})", math.sin),
    ("cos({0})", math.cos),
    ("exp(sin({0}))", lambda a: math.exp(math.sin(a))),
    ("sqrt(1 + ({0})^2)", lambda a: math.sqrt(1 + a * a)),
    ("log(2 + sin({0}))", lambda a: math.log(2 + math.sin(a))),
]
BINARY = [
    ("({0} + {1})", lambda a, b: a + b),
    ("({0} - {1})", lambda a, b: a - b),
    ("({0})*({1})", lambda a, b: a * b),
    ("({0})/(1 + ({1})^2)", lambda a, b: a / (1 + b * b)),
]
LEAVES = ["x", "y", "z", "2", "3", "(1/2)"]


def random_tree(rng, depth=5, budget=None):
    """A random expression of depth <= ``depth`` as (source, evaluator)."""
    budget = budget if budget is not None else [8]
    if depth == 0 or budget[0] <= 0 or rng.random() < 0.25:
        leaf = LEAVES[rng.integers(len(LEAVES))]
        if leaf in ("x", "y", "z"):
            return leaf, lambda b, leaf=leaf: b[leaf]
        value = float(Fraction(leaf.strip("()")))
        return leaf, lambda b, value=value: value
    budget[0] -= 1
    if rng.random() < 0.4:
        template, op = UNARY[rng.integers(len(UNARY))]
        source, f = random_tree(rng, depth - 1, budget)
        return template.format(source), lambda b: op(f(b))
    template, op = BINARY[rng.integers(len(BINARY))]
    left, f = random_tree(rng, depth - 1, budget)
    right, g = random_tree(rng, depth - 1, budget)
    return template.format(left, right), lambda b: op(f(b), g(b))


@pytest.mark.parametrize("source", [
    "x + 1",
    "(x + 1)^2 - 3*x/y",
    "q'^2/2 - q^2*th'^2/2 - lam*q''^2/2",
    "exp(rho)*(rho'^2/4 + rho''')",
    "sqrt(2*(chi'' - 6*chi*chi' + 4*chi^3))",
    "x^(3/4)*y^(-1/2) + log(x)*sin(y) - cos(x*y)",
    "q[5]*q[4] - p0_q*pi1_chi",
    "(-3)^(1/2)*x",
    "(2/3)^(1/2)*y - (-2)^(1/3)",
])
def test_print_then_parse_gives_the_same_expression(source):
    e = parse_expression(source)
    assert parse_expression(print_expression(e)) == e


def test_sqrt_is_the_half_power():
    assert parse_expression("sqrt(x + 1)") == parse_expression("(x + 1)^(1/2)")


def test_decimal_literals_are_exact_rationals():
    assert parse_number("0.05") == Fraction(1, 20)
    assert parse_number("1/3") == Fraction(1, 3)
    assert parse_expression("0.5*x") == parse_expression("x/2")


def test_parse_number_rejects_symbols():
    with pytest.raises(ParseError):
        parse_number("x + 1")


def test_jet_names():
    assert jet_name("q", 0) == "q"
    assert jet_name("q", 2) == "q''"
    assert jet_name("q", 4) == "q[4]"
    assert parse_expression("q[2]") == parse_expression("q''")


def test_chart_rejects_unknown_names():
    chart = JetChart({"q": 1}, name="strict")
    with pytest.raises(UnknownSymbolError):
        chart.parse("q + w")


@pytest.mark.parametrize("source", ["q +", "(q", "q * * 2", "exp(q"])
def test_malformed_input_raises_parse_error(source):
    with pytest.raises(ParseError):
        parse_expression(source)


def test_python_operators_build_canonical_expressions():
    x = parse_expression("x")
    y = parse_expression("y")
    assert x + 1 == parse_expression("1 + x")
    assert (x + y) * (x - y) == parse_expression("x^2 - y^2")
    assert x / y == parse_expression("x*y^(-1)")
    assert x ** Fraction(1, 2) == parse_expression("sqrt(x)")
    assert simplify(x - x) == Const(0)


def test_substitute_replaces_symbols():
    e = parse_expression("x^2 + y")
    x = _symbol(e, "x")
    assert substitute(e, {x: parse_expression("2*z")}) == parse_expression("4*z^2 + y")


@pytest.mark.parametrize("source, name", [
    ("x^3*sin(y) + exp(x*y)/y", "x"),
    ("sqrt(x^2 + y)*log(x)", "x"),
    ("(x + y^2)^(2/3) - cos(x)*y", "y"),
    ("exp(-x)*x^(5/2)/(1 + y^2)", "x"),
])
def test_derivatives_agree_with_central_differences(source, name):
    e = parse_expression(source)
    s = _symbol(e, name)
    de = differentiate(e, s)
    rng = np.random.default_rng(7)
    names = sorted(v.name for v in e.free_symbols)
    for _ in range(8):
        binding = dict(zip(names, rng.uniform(0.5, 2.0, size=len(names)).tolist()))
        h = 1e-6 * (1 + abs(binding[name]))
        up, down = dict(binding), dict(binding)
        up[name] += h
        down[name] -= h
        numeric = (evaluate(e, up) - evaluate(e, down)) / (2 * h)
        exact = evaluate(de, binding)
        assert abs(numeric - exact) <= 1e-6 * max(1.0, abs(exact))


@pytest.mark.parametrize("seed", range(12))
def test_sum_and_product_rules_on_random_trees(seed):
    rng = np.random.default_rng(seed)
    f_source, _ = random_tree(rng)
    g_source, _ = random_tree(rng)
    f, g = parse_expression(f_source), parse_expression(g_source)
    x = parse_expression("x")
    df, dg = differentiate(f, x), differentiate(g, x)
    assert equivalent(differentiate(f + g, x), df + dg).holds
    assert equivalent(differentiate(f * g, x), df * g + f * dg).holds


@pytest.mark.parametrize("seed", range(12))
def test_simplify_keeps_values_on_random_trees(seed):
    rng = np.random.default_rng(100 + seed)
    source, exact = random_tree(rng)
    e = parse_expression(source)
    simplified = simplify(e)
    for _ in range(32):
        binding = dict(zip("xyz", rng.uniform(0.5, 2.0, size=3).tolist()))
        expected = exact(binding)
        tolerance = 1e-8 * max(1.0, abs(expected))
        assert abs(evaluate(simplified, binding) - expected) <= tolerance, source
        assert abs(evaluate(e, binding) - evaluate(simplified, binding)) <= tolerance, source


def test_odd_roots_of_negatives_are_real():
    assert evaluate(parse_expression("x^(1/3)"), {"x": -8.0}) == pytest.approx(-2.0)
    assert evaluate(parse_expression("x^(2/3)"), {"x": -8.0}) == pytest.approx(4.0)


def test_even_roots_of_negatives_raise_domain_error():
    with pytest.raises(DomainError):
        evaluate(parse_expression("sqrt(x)"), {"x": -4.0})
    with pytest.raises(DomainError):
        evaluate(parse_expression("log(x)"), {"x": 0.0})


def test_equivalence_verdicts():
    assert equivalent(parse_expression("(x + 1)^2"), parse_expression("x^2 + 2*x + 1")).verdict is Verdict.PROVED_EQUAL
    different = equivalent(parse_expression("x + 1"), parse_expression("x"))
    assert different.verdict is Verdict.PROVED_DIFFERENT
    assert not different.holds
    assert "x" in different.witness
    trig = equivalent(parse_expression("sin(x)^2 + cos(x)^2"), parse_expression("1"))
    assert trig.holds


def test_equivalence_is_reproducible_for_a_seed():
    a = parse_expression("sin(x)^2 + cos(x)^2 + y")
    b = parse_expression("1 + y")
    first = equivalent(a, b, seed=3)
    second = equivalent(a, b, seed=3)
    assert first == second
