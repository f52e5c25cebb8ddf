import random

import pytest

from astgen import ExprGen
from examdown.mathexpr import LATEX, SPACE_MATH, parse_math
from examdown.mathexpr.ast import (
    Add, Apply, Bracketed, Frac, Ident, Integer, Matrix, Power, Times, walk,
    contains_errors, ErrorNode,
)
from examdown.mathrender import render_latex, render_presentation, render_spacemath

x, n, t = Ident("x"), Ident("n"), Ident("t")


# ----------------------------------------------------------------------
# spec examples

def test_spacemath_apply_vs_times_spacing():
    add = Add(t, Integer(1))
    assert render_spacemath(Apply(x, (add,))) == "x(t+1)"
    assert render_spacemath(Times(x, Bracketed("paren", add))) == "x (t+1)"


def test_spacemath_fraction_minimal_parens():
    expr = Frac(Integer(1), Add(Integer(1), Power(x, Integer(2))))
    assert render_spacemath(expr) == "1/(1+x^2)"


def test_spacemath_integer_zero():
    assert render_spacemath(Integer(0)) == "0"


def test_latex_atom_identity():
    assert render_latex(x) == "x"


def test_latex_braces_every_script():
    assert render_latex(Power(x, Integer(23))) == "x^{23}"
    assert render_latex(parse_math("i^3").expr) == "i^{3}"


def test_latex_of_paper_formula_reparses_to_same_ast():
    source = "sum_(i=1)^n i^3=((n(n+1))/2)^2"
    expr = parse_math(source).expr
    rendered = render_latex(expr)
    reparsed = parse_math(rendered, dialect=LATEX)
    assert reparsed.expr == expr
    paper = parse_math(r"\sum_{i=1}^n i^3=\left(\frac{n(n+1)}{2}\right)^2").expr
    assert reparsed.expr == paper
    # auto-sized delimiters around the fraction
    assert "\\left(" in rendered and "\\frac" in rendered


def test_latex_error_nodes_render_as_texttt():
    assert render_latex(ErrorNode("@?")) == "\\texttt{@?}"


def test_lossy_flag_predicate():
    assert contains_errors(ErrorNode("oops"))
    assert not contains_errors(parse_math("x+1").expr)


def test_determinism():
    expr = parse_math("sum_(i=1)^n i^3=((n(n+1))/2)^2").expr
    assert render_latex(expr) == render_latex(expr)
    assert render_spacemath(expr) == render_spacemath(expr)
    assert render_presentation(expr) == render_presentation(expr)


# ----------------------------------------------------------------------
# round-trip properties (the acceptance suite runs the full 10k corpus)

def _round_trip_spacemath(e):
    rendered = render_spacemath(e)
    result = parse_math(rendered, dialect=SPACE_MATH)
    assert result.expr == e, f"{rendered!r} reparsed as {result.expr!r}"


def _round_trip_latex(e):
    rendered = render_latex(e)
    result = parse_math(rendered, dialect=LATEX)
    assert result.expr == e, f"{rendered!r} reparsed as {result.expr!r}"


@pytest.mark.parametrize("seed", range(4))
def test_round_trip_sample(seed):
    gen = ExprGen(random.Random(seed))
    for _ in range(500):
        e = gen.expr(6)
        assert not contains_errors(e)
        _round_trip_spacemath(e)
        if not any(isinstance(node, Matrix) for node in walk(e)):
            _round_trip_latex(e)


@pytest.mark.parametrize("src", [
    "x(t+1)", "x (t+1)", "-x^2", "x^23", "[[a,b],[c,d]]", "a/b/c", "2^3^2",
    "sum_(i=1)^n i^3=((n(n+1))/2)^2", "x=1 or x=9", "sqrt(a^2+b^2)",
    "falling(7,3)", "1/(1+x^2)", "x_1^2", "x in RR", '"note" x',
    "sum_(k=0)^(5) falling(k,3)", "(x-5)^2-16=0", "root(3)(x+1)",
])
def test_round_trip_for_paper_sources(src):
    expr = parse_math(src).expr
    _round_trip_spacemath(expr)
