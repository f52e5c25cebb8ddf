from examdown.calcengine import (
    EQUIVALENT_PROBABLY, NOT_EQUIVALENT, UNDECIDED, check_equiv, eval_exact,
)
from examdown.mathexpr import parse_math


def expr(src):
    return parse_math(src).expr


def test_factored_quadratic_equivalent():
    verdict = check_equiv(expr("(x-1)*(x-9)"), expr("x^2-10x+9"), ["x"],
                          trials=12, seed=0)
    assert verdict.kind == EQUIVALENT_PROBABLY


def test_square_vs_self_product():
    assert check_equiv(expr("x^2"), expr("x*x"), ["x"]).kind == EQUIVALENT_PROBABLY


def test_not_equivalent_with_witness():
    verdict = check_equiv(expr("x+1"), expr("x-1"), ["x"], trials=12, seed=0)
    assert verdict.kind == NOT_EQUIVALENT
    assert verdict.witness is not None
    left = eval_exact(expr("x+1"), verdict.witness)
    right = eval_exact(expr("x-1"), verdict.witness)
    assert left != right


def test_deterministic_per_seed():
    a = check_equiv(expr("x+1"), expr("x-1"), ["x"], trials=12, seed=7)
    b = check_equiv(expr("x+1"), expr("x-1"), ["x"], trials=12, seed=7)
    assert a == b
    c = check_equiv(expr("(x-1)*(x-9)"), expr("x^2-10x+9"), ["x"], seed=7)
    d = check_equiv(expr("(x-1)*(x-9)"), expr("x^2-10x+9"), ["x"], seed=7)
    assert c == d


def test_multivariate():
    verdict = check_equiv(expr("(a+b)^2"), expr("a^2+2a b+b^2"), ["a", "b"])
    assert verdict.kind == EQUIVALENT_PROBABLY


def test_poles_resample():
    # 1/(x-1) has a pole at a sampleable point; resampling should cope
    verdict = check_equiv(expr("1/(x-1)"), expr("1/(x-1)"), ["x"])
    assert verdict.kind == EQUIVALENT_PROBABLY


def test_numeric_path_equivalence():
    verdict = check_equiv(expr("sqrt(x^2)"), expr("abs(x)"), ["x"])
    assert verdict.kind == EQUIVALENT_PROBABLY


def test_undecided_when_nothing_evaluates():
    verdict = check_equiv(expr("ln(-1-x^2)"), expr("ln(-1-x^2)"), ["x"])
    assert verdict.kind == UNDECIDED


def test_close_but_not_equal_numeric():
    verdict = check_equiv(expr("sqrt(x^2+1)"), expr("sqrt(x^2)+1"), ["x"], seed=3)
    assert verdict.kind == NOT_EQUIVALENT
