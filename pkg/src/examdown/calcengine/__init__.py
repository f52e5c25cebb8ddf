"""Exact rational calculator, equivalence helper, and SVG plotting."""

from examdown.calcengine.engine import (
    DEFAULT_BUDGET,
    Approx,
    Boolean,
    Calculator,
    EvalError,
    Exact,
    Rational,
    Value,
    eval_exact,
    eval_numeric,
    format_value,
    make_env,
    value_to_expr,
)
from examdown.calcengine.equiv import (
    EQUIVALENT_PROBABLY,
    NOT_EQUIVALENT,
    UNDECIDED,
    EquivVerdict,
    check_equiv,
)
from examdown.calcengine.plot import plot_svg, plot_svg_element, sample_curve

__all__ = [
    "Approx",
    "Boolean",
    "Calculator",
    "DEFAULT_BUDGET",
    "EQUIVALENT_PROBABLY",
    "EquivVerdict",
    "EvalError",
    "Exact",
    "NOT_EQUIVALENT",
    "Rational",
    "UNDECIDED",
    "Value",
    "check_equiv",
    "eval_exact",
    "eval_numeric",
    "format_value",
    "make_env",
    "plot_svg",
    "plot_svg_element",
    "sample_curve",
    "value_to_expr",
]
