"""Document rendering: XHTML for the preview, LaTeX and JSON for the CLI.

The HTML tree is built with ElementTree, so output is well-formed XML by
construction and byte-deterministic for a given document.  Calculator and
plot placeholders are evaluated only when a calculator handle is supplied;
failures degrade to the raw source with a warning, never an abort.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import List, Optional, Tuple

from examdown.calcengine import Calculator, EvalError, plot_svg_element, value_to_expr
from examdown.diagnostics import Diagnostic, Span, warning
from examdown.document import (
    AnswerLine, CalcPlaceholder, CodeFence, CodeSpan, Derivation, DisplayMath,
    Document, Emphasis, Heading, InlineMath, ListItemGroup, Paragraph,
    PlotPlaceholder, Strong, Text,
)
from examdown.mathexpr import ast
from examdown.mathrender import (
    RenderOptions, escape_text, presentation_element, render_latex, render_spacemath,
)
from examdown.mathrender.mathml import xml_text

_STYLE = """
body { font-family: sans-serif; max-width: 46em; margin: 1em auto; padding: 0 1em; }
table.derivation { border-collapse: collapse; margin: 0.6em 0; }
table.derivation td { padding: 0.15em 0.6em; vertical-align: baseline; }
table.derivation td.rel { text-align: right; min-width: 2em; }
table.derivation td.just { color: #555; font-style: italic; }
div.answer { background: #fdf6d8; border-left: 4px solid #e0a800; padding: 0.4em 0.8em; margin: 0.6em 0; }
span.answer-label { font-weight: bold; margin-right: 0.5em; }
span.calc-raw code { background: #f3f3f3; padding: 0 0.2em; }
span.badge { font-size: 0.75em; background: #d8e6fd; border-radius: 0.6em; padding: 0 0.5em; margin-left: 0.3em; color: #234; }
span.badge.warn { background: #fdd8d8; }
div.display-math { margin: 0.6em 0; text-align: center; }
""".strip()

_DERIV_GLYPHS = {"<=>": "\u21d4", "=>": "\u21d2", "=": "=", "<=": "\u2264",
                 "<": "<", ">": ">"}


def _append_text(parent: ET.Element, text: str) -> None:
    text = xml_text(text)
    if not text:
        return
    if len(parent):
        last = parent[-1]
        last.tail = (last.tail or "") + text
    else:
        parent.text = (parent.text or "") + text


class _HtmlRenderer:
    def __init__(self, calc: Optional[Calculator]):
        self.calc = calc
        self.diagnostics: List[Diagnostic] = []

    def warn(self, block_span: Span, code: str, message: str) -> None:
        self.diagnostics.append(warning(block_span, code, message))

    # -- inline rendering ------------------------------------------------

    def math_el(self, expr: ast.Expr, display: bool = False) -> ET.Element:
        opts = RenderOptions(target="mathml-html", display_mode=display)
        return presentation_element(expr, opts)

    def render_inlines(self, parent: ET.Element, inlines: List[object],
                       span: Span) -> None:
        for inline in inlines:
            if isinstance(inline, Text):
                _append_text(parent, inline.text)
            elif isinstance(inline, Emphasis):
                el = ET.SubElement(parent, "em")
                self.render_inlines(el, inline.inlines, span)
            elif isinstance(inline, Strong):
                el = ET.SubElement(parent, "strong")
                self.render_inlines(el, inline.inlines, span)
            elif isinstance(inline, CodeSpan):
                el = ET.SubElement(parent, "code")
                el.text = xml_text(inline.text)
            elif isinstance(inline, InlineMath):
                parent.append(self.math_el(inline.expr))
            elif isinstance(inline, CalcPlaceholder):
                self.render_calc(parent, inline, span)
            elif isinstance(inline, PlotPlaceholder):
                self.render_plot(parent, inline, span)
            else:
                raise TypeError(f"unknown inline {inline!r}")

    def raw_badge(self, parent: ET.Element, raw: str, badge: str,
                  warn: bool = False) -> None:
        holder = ET.SubElement(parent, "span", {"class": "calc-raw"})
        code = ET.SubElement(holder, "code")
        code.text = xml_text(raw)
        label = ET.SubElement(holder, "span",
                              {"class": "badge warn" if warn else "badge"})
        label.text = badge

    def render_calc(self, parent: ET.Element, ph: CalcPlaceholder, span: Span) -> None:
        if self.calc is None:
            self.raw_badge(parent, ph.raw, "calculator off")
            return
        try:
            value = self.calc.eval(ph.expr, {})
        except EvalError as err:
            self.warn(span, "calc-error", f"{ph.raw}: {err.message} ({err.code})")
            self.raw_badge(parent, ph.raw, err.code, warn=True)
            return
        holder = ET.SubElement(parent, "span", {"class": "calc-value"})
        holder.append(self.math_el(value_to_expr(value)))

    def render_plot(self, parent: ET.Element, ph: PlotPlaceholder, span: Span) -> None:
        if self.calc is None:
            self.raw_badge(parent, ph.raw, "calculator off")
            return
        try:
            parent.append(plot_svg_element(ph.expr, ph.binder, ph.lower, ph.upper))
        except EvalError as err:
            self.warn(span, "calc-error", f"{ph.raw}: {err.message} ({err.code})")
            self.raw_badge(parent, ph.raw, err.code, warn=True)

    # -- block rendering ---------------------------------------------------

    def render_block(self, body: ET.Element, block: object) -> None:
        if isinstance(block, Heading):
            el = ET.SubElement(body, f"h{block.level}")
            self.render_inlines(el, block.inlines, block.span)
        elif isinstance(block, Paragraph):
            if not block.inlines:
                return
            el = ET.SubElement(body, "p")
            self.render_inlines(el, block.inlines, block.span)
        elif isinstance(block, ListItemGroup):
            el = ET.SubElement(body, "ol" if block.ordered else "ul")
            for item in block.items:
                li = ET.SubElement(el, "li")
                self.render_inlines(li, item, block.span)
        elif isinstance(block, CodeFence):
            pre = ET.SubElement(body, "pre")
            code = ET.SubElement(pre, "code")
            code.text = xml_text(block.text)
        elif isinstance(block, DisplayMath):
            div = ET.SubElement(body, "div", {"class": "display-math"})
            div.append(self.math_el(block.expr, display=True))
        elif isinstance(block, Derivation):
            table = ET.SubElement(body, "table", {"class": "derivation"})
            for row in block.rows:
                tr = ET.SubElement(table, "tr")
                rel = ET.SubElement(tr, "td", {"class": "rel"})
                rel.text = _DERIV_GLYPHS.get(row.relator, "") if row.relator else ""
                expr_td = ET.SubElement(tr, "td", {"class": "expr"})
                expr_td.append(self.math_el(row.expr))
                just = ET.SubElement(tr, "td", {"class": "just"})
                just.text = xml_text(row.justification or "")
        elif isinstance(block, AnswerLine):
            div = ET.SubElement(body, "div", {"class": "answer"})
            label = ET.SubElement(div, "span", {"class": "answer-label"})
            label.text = xml_text(f"answer[{block.label}]:" if block.label else "answer:")
            div.append(self.math_el(block.expr))
        else:
            raise TypeError(f"unknown block {block!r}")


def render_document_html(doc: Document,
                         calc: Optional[Calculator] = None) -> Tuple[str, List[Diagnostic]]:
    """Deterministic XHTML for a parsed document; never aborts."""
    renderer = _HtmlRenderer(calc)
    html = ET.Element("html")
    head = ET.SubElement(html, "head")
    ET.SubElement(head, "meta", {"charset": "utf-8"})
    title = ET.SubElement(head, "title")
    title.text = "answer preview"
    style = ET.SubElement(head, "style")
    style.text = _STYLE
    body = ET.SubElement(html, "body")
    for block in doc.blocks:
        renderer.render_block(body, block)
    text = ET.tostring(html, encoding="unicode")
    return "<!DOCTYPE html>\n" + text, renderer.diagnostics


# ----------------------------------------------------------------------
# LaTeX document output (CLI --format latex)

_SECTIONS = ["\\section*", "\\subsection*", "\\subsubsection*",
             "\\paragraph*", "\\subparagraph*", "\\subparagraph*"]


def render_document_latex(doc: Document, calc: Optional[Calculator] = None) -> str:
    out: List[str] = []
    for block in doc.blocks:
        if isinstance(block, Heading):
            out.append(_SECTIONS[block.level - 1] + "{"
                       + _inlines_latex(block.inlines, calc) + "}")
        elif isinstance(block, Paragraph):
            if block.inlines:
                out.append(_inlines_latex(block.inlines, calc))
        elif isinstance(block, ListItemGroup):
            env = "enumerate" if block.ordered else "itemize"
            lines = [f"\\begin{{{env}}}"]
            for item in block.items:
                lines.append("  \\item " + _inlines_latex(item, calc))
            lines.append(f"\\end{{{env}}}")
            out.append("\n".join(lines))
        elif isinstance(block, CodeFence):
            out.append("\\begin{verbatim}\n" + block.text + "\n\\end{verbatim}")
        elif isinstance(block, DisplayMath):
            out.append("\\[\n" + render_latex(block.expr) + "\n\\]")
        elif isinstance(block, Derivation):
            rows = []
            for row in block.rows:
                rel = {"<=>": "\\Leftrightarrow", "=>": "\\Rightarrow",
                       "<=": "\\leq"}.get(row.relator, row.relator or "")
                just = f"\\mbox{{{escape_text(row.justification)}}}" if row.justification else ""
                rows.append(f"{rel} & {render_latex(row.expr)} & {just} \\\\")
            out.append("\\[\n\\begin{array}{lll}\n" + "\n".join(rows)
                       + "\n\\end{array}\n\\]")
        elif isinstance(block, AnswerLine):
            label = f"answer[{block.label}]" if block.label else "answer"
            out.append(f"\\noindent\\textbf{{{label}:}} \\({render_latex(block.expr)}\\)")
    return "\n\n".join(out) + "\n"


def _inlines_latex(inlines: List[object], calc: Optional[Calculator]) -> str:
    parts: List[str] = []
    for inline in inlines:
        if isinstance(inline, Text):
            parts.append(escape_text(inline.text))
        elif isinstance(inline, Emphasis):
            parts.append("\\emph{" + _inlines_latex(inline.inlines, calc) + "}")
        elif isinstance(inline, Strong):
            parts.append("\\textbf{" + _inlines_latex(inline.inlines, calc) + "}")
        elif isinstance(inline, CodeSpan):
            parts.append("\\texttt{" + escape_text(inline.text) + "}")
        elif isinstance(inline, InlineMath):
            parts.append("\\(" + render_latex(inline.expr) + "\\)")
        elif isinstance(inline, CalcPlaceholder):
            if calc is None:
                parts.append("\\texttt{" + escape_text(inline.raw) + "}")
            else:
                try:
                    value = calc.eval(inline.expr, {})
                    parts.append("\\(" + render_latex(value_to_expr(value)) + "\\)")
                except EvalError:
                    parts.append("\\texttt{" + escape_text(inline.raw) + "}")
        elif isinstance(inline, PlotPlaceholder):
            parts.append("\\texttt{" + escape_text(inline.raw) + "}")
    return "".join(parts)


# ----------------------------------------------------------------------
# JSON AST output (CLI --format json-ast)

def document_to_json_obj(doc: Document) -> dict:
    return {
        "blocks": [_block_json(b) for b in doc.blocks],
        "diagnostics": [
            {"line": d.span.line, "start": d.span.start, "end": d.span.end,
             "severity": d.severity, "code": d.code, "message": d.message}
            for d in doc.diagnostics
        ],
    }


def _block_json(block: object) -> dict:
    base = {"type": type(block).__name__.lower(),
            "span": [block.span.start, block.span.end]}
    if isinstance(block, Heading):
        base["level"] = block.level
        base["inlines"] = [_inline_json(i) for i in block.inlines]
    elif isinstance(block, Paragraph):
        base["inlines"] = [_inline_json(i) for i in block.inlines]
    elif isinstance(block, ListItemGroup):
        base["ordered"] = block.ordered
        base["items"] = [[_inline_json(i) for i in item] for item in block.items]
    elif isinstance(block, CodeFence):
        base["text"] = block.text
    elif isinstance(block, DisplayMath):
        base["dialect"] = block.dialect
        base["spacemath"] = render_spacemath(block.expr)
    elif isinstance(block, Derivation):
        base["rows"] = [
            {"relator": r.relator, "spacemath": render_spacemath(r.expr),
             "justification": r.justification}
            for r in block.rows
        ]
    elif isinstance(block, AnswerLine):
        base["label"] = block.label
        base["spacemath"] = render_spacemath(block.expr)
        base["malformed"] = block.malformed
    return base


def _inline_json(inline: object) -> dict:
    if isinstance(inline, Text):
        return {"type": "text", "text": inline.text}
    if isinstance(inline, Emphasis):
        return {"type": "em", "inlines": [_inline_json(i) for i in inline.inlines]}
    if isinstance(inline, Strong):
        return {"type": "strong", "inlines": [_inline_json(i) for i in inline.inlines]}
    if isinstance(inline, CodeSpan):
        return {"type": "code", "text": inline.text}
    if isinstance(inline, InlineMath):
        return {"type": "math", "dialect": inline.dialect,
                "spacemath": render_spacemath(inline.expr)}
    if isinstance(inline, CalcPlaceholder):
        return {"type": "calc", "raw": inline.raw,
                "spacemath": render_spacemath(inline.expr)}
    if isinstance(inline, PlotPlaceholder):
        return {"type": "plot", "raw": inline.raw, "binder": inline.binder,
                "lower": str(inline.lower), "upper": str(inline.upper)}
    raise TypeError(f"unknown inline {inline!r}")
