"""Function plotting as standalone SVG.

201 uniform samples; non-finite samples break the polyline into separate
segments (a pole never draws a vertical stroke).  Viewport 480x320 with 8%
margins, axes drawn when 0 lies in range.  Output is deterministic and
well-formed SVG 1.1.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from examdown.calcengine.engine import EvalError, eval_numeric
from examdown.mathexpr import ast

SVG_NS = "http://www.w3.org/2000/svg"
WIDTH = 480.0
HEIGHT = 320.0
MARGIN_FRACTION = 0.08
SAMPLES = 201

NumberLike = Union[int, float, Fraction]


def sample_curve(expr: ast.Expr, binder: str, lower: NumberLike, upper: NumberLike,
                 samples: int = SAMPLES) -> Tuple[List[float], List[float]]:
    """Uniform samples of the curve; non-finite points come back as nan."""
    lo, hi = float(lower), float(upper)
    if not lo < hi:
        raise EvalError("empty-plot", "plot range must satisfy lower < upper")
    xs: List[float] = []
    ys: List[float] = []
    steps = samples - 1
    for i in range(samples):
        x = lo + (hi - lo) * (i / steps)
        try:
            value = eval_numeric(expr, {binder: x})
            y = value.value
        except EvalError:
            y = math.nan
        xs.append(x)
        ys.append(y if math.isfinite(y) else math.nan)
    return xs, ys


def plot_svg(expr: ast.Expr, binder: str, lower: NumberLike, upper: NumberLike,
             samples: int = SAMPLES, width: float = WIDTH, height: float = HEIGHT) -> str:
    element = plot_svg_element(expr, binder, lower, upper, samples, width, height)
    return ET.tostring(element, encoding="unicode")


def plot_svg_element(expr: ast.Expr, binder: str, lower: NumberLike, upper: NumberLike,
                     samples: int = SAMPLES, width: float = WIDTH,
                     height: float = HEIGHT) -> ET.Element:
    """The <svg> element itself, for embedding into a larger XHTML tree."""
    xs, ys = sample_curve(expr, binder, lower, upper, samples)
    finite = [y for y in ys if math.isfinite(y)]
    if not finite:
        raise EvalError("empty-plot", "no finite samples in the plot range")

    y_min, y_max = min(finite), max(finite)
    if y_min == y_max:
        y_min -= 1.0
        y_max += 1.0
    x_min, x_max = xs[0], xs[-1]

    mx = width * MARGIN_FRACTION
    my = height * MARGIN_FRACTION

    def px(x: float) -> float:
        return mx + (x - x_min) / (x_max - x_min) * (width - 2 * mx)

    def py(y: float) -> float:
        return height - my - (y - y_min) / (y_max - y_min) * (height - 2 * my)

    svg = ET.Element("svg", {
        "xmlns": SVG_NS,
        "version": "1.1",
        "width": f"{width:g}",
        "height": f"{height:g}",
        "viewBox": f"0 0 {width:g} {height:g}",
    })
    ET.SubElement(svg, "rect", {
        "x": "0", "y": "0", "width": f"{width:g}", "height": f"{height:g}",
        "fill": "white", "stroke": "#ccc",
    })
    axes = ET.SubElement(svg, "g", {"stroke": "#999", "stroke-width": "1"})
    if x_min <= 0.0 <= x_max:
        x0 = f"{px(0.0):.2f}"
        ET.SubElement(axes, "line", {"x1": x0, "y1": f"{my:.2f}",
                                     "x2": x0, "y2": f"{height - my:.2f}"})
    if y_min <= 0.0 <= y_max:
        y0 = f"{py(0.0):.2f}"
        ET.SubElement(axes, "line", {"x1": f"{mx:.2f}", "y1": y0,
                                     "x2": f"{width - mx:.2f}", "y2": y0})

    curve = ET.SubElement(svg, "g", {
        "stroke": "#1f6feb", "stroke-width": "1.5", "fill": "none",
    })
    segment: List[str] = []
    lone: Optional[Tuple[float, float]] = None

    def flush() -> None:
        nonlocal segment, lone
        if len(segment) >= 2:
            ET.SubElement(curve, "polyline", {"points": " ".join(segment)})
        elif len(segment) == 1 and lone is not None:
            ET.SubElement(curve, "circle", {
                "cx": f"{lone[0]:.2f}", "cy": f"{lone[1]:.2f}", "r": "1.5",
                "fill": "#1f6feb", "stroke": "none",
            })
        segment = []
        lone = None

    for x, y in zip(xs, ys):
        if math.isfinite(y):
            cx, cy = px(x), py(y)
            segment.append(f"{cx:.2f},{cy:.2f}")
            lone = (cx, cy)
        else:
            flush()
    flush()

    return svg
