"""Deterministic serializers: Space Math, canonical LaTeX, and MathML."""

from __future__ import annotations

from typing import Optional

from examdown.mathexpr.ast import Expr, contains_errors
from examdown.mathrender.latex import escape_text, render_latex
from examdown.mathrender.mathml import presentation_element, render_presentation
from examdown.mathrender.options import RenderOptions
from examdown.mathrender.spacemath import render_spacemath


def render(expr: Expr, opts: Optional[RenderOptions] = None) -> str:
    """Dispatch on ``opts.target``."""
    opts = opts or RenderOptions()
    if opts.target == "spacemath":
        return render_spacemath(expr)
    if opts.target == "mathml-html":
        return render_presentation(expr, opts)
    return render_latex(expr)


__all__ = [
    "RenderOptions",
    "contains_errors",
    "escape_text",
    "presentation_element",
    "render",
    "render_latex",
    "render_presentation",
    "render_spacemath",
]
