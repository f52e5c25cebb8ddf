"""Canonical LaTeX serializer.

Deterministic output; every exponent and subscript is braced, fractions
use ``\\frac``, and a bracketed group containing a fraction or big
operator gets auto-sized ``\\left(...\\right)`` delimiters.  For trees in
the supported subset the output reparses (via the LaTeX subset parser) to
a structurally equal tree.
"""

from __future__ import annotations

from typing import Optional

from examdown.mathexpr import ast
from examdown.mathexpr.symbols import SymbolTable, default_table
from examdown.mathrender.options import RenderOptions
from examdown.mathrender.spacemath import (
    PREC_ADD, PREC_MUL, PREC_POSTFIX, PREC_REL, PREC_SEQ, PREC_UNARY,
    ends_open, prec,
)

_RELATOR_LATEX = {
    "=": "=", "<": "<", ">": ">",
    "<=": " \\leq ", ">=": " \\geq ", "!=": " \\neq ",
    "->": " \\rightarrow ", "=>": " \\Rightarrow ", "<=>": " \\Leftrightarrow ",
    "in": " \\in ", "or": " \\text{ or } ", "and": " \\text{ and } ",
}

_TEXT_ESCAPES = {
    "\\": "\\textbackslash{}", "{": "\\{", "}": "\\}", "$": "\\$",
    "&": "\\&", "#": "\\#", "%": "\\%", "_": "\\_", "^": "\\^{}", "~": "\\~{}",
}


def escape_text(text: str) -> str:
    return "".join(_TEXT_ESCAPES.get(ch, ch) for ch in text)


class _LatexWriter:
    def __init__(self, table: SymbolTable):
        self.table = table

    def render(self, expr: ast.Expr, min_prec: int, absorbing: bool = False) -> str:
        if prec(expr) < min_prec or (absorbing and isinstance(expr, ast.Bracketed)):
            return self.group(expr)
        return self.node(expr)

    def group(self, expr: ast.Expr) -> str:
        if self.wants_sized(expr):
            return "\\left(" + self.node(expr) + "\\right)"
        return "(" + self.node(expr) + ")"

    @staticmethod
    def wants_sized(expr: ast.Expr) -> bool:
        return any(isinstance(n, (ast.Frac, ast.BigOp)) for n in ast.walk(expr))

    def name(self, name: str) -> str:
        hint = self.table.latex_hint(name)
        return hint if hint is not None else name

    def node(self, expr: ast.Expr) -> str:
        if isinstance(expr, ast.Integer):
            return str(expr.value)
        if isinstance(expr, ast.Decimal):
            return expr.text
        if isinstance(expr, (ast.Ident, ast.Greek, ast.SymbolConst)):
            return self.name(expr.name)
        if isinstance(expr, ast.BlackboardSet):
            return "\\mathbb{" + expr.name + "}"
        if isinstance(expr, ast.Add):
            return self.render(expr.left, PREC_ADD) + "+" + self.render(expr.right, PREC_MUL)
        if isinstance(expr, ast.Sub):
            return self.render(expr.left, PREC_ADD) + "-" + self.render(expr.right, PREC_MUL)
        if isinstance(expr, ast.Neg):
            return "-" + self.render(expr.arg, PREC_UNARY)
        if isinstance(expr, ast.Times):
            left = self.render(expr.left, PREC_MUL)
            if ends_open(expr.left):
                left = self.group(expr.left)
            right = self.render(expr.right, PREC_UNARY)
            if expr.explicit:
                return left + " \\times " + right
            if right.startswith("-"):
                right = self.group(expr.right)
            return left + " " + right
        if isinstance(expr, ast.Frac):
            return ("\\frac{" + self.render(expr.numerator, PREC_SEQ) + "}{"
                    + self.render(expr.denominator, PREC_SEQ) + "}")
        if isinstance(expr, ast.Power):
            base = self.render(expr.base, PREC_POSTFIX, absorbing=True)
            return base + "^{" + self.render(expr.exponent, PREC_SEQ) + "}"
        if isinstance(expr, ast.Subscript):
            base = self.render(expr.base, PREC_POSTFIX, absorbing=True)
            return base + "_{" + self.render(expr.index, PREC_SEQ) + "}"
        if isinstance(expr, ast.Apply):
            head = self.render(expr.head, PREC_POSTFIX)
            return head + "(" + ",".join(self.render(a, PREC_REL) for a in expr.args) + ")"
        if isinstance(expr, ast.Sqrt):
            return "\\sqrt{" + self.render(expr.arg, PREC_SEQ) + "}"
        if isinstance(expr, ast.Root):
            return ("\\sqrt[" + self.render(expr.index, PREC_SEQ) + "]{"
                    + self.render(expr.arg, PREC_SEQ) + "}")
        if isinstance(expr, ast.BigOp):
            parts = ["\\" + expr.op]
            if expr.binder is not None and expr.lower is not None:
                parts.append("_{" + self.render(expr.binder, PREC_ADD) + "="
                             + self.render(expr.lower, PREC_ADD) + "}")
            elif expr.lower is not None:
                parts.append("_{" + self.render(expr.lower, PREC_SEQ) + "}")
            elif expr.binder is not None:
                parts.append("_{" + self.render(expr.binder, PREC_SEQ) + "}")
            if expr.upper is not None:
                parts.append("^{" + self.render(expr.upper, PREC_SEQ) + "}")
            if expr.body is not None:
                body = self.render(expr.body, PREC_MUL)
                parts.append(" " + body)
            return "".join(parts)
        if isinstance(expr, ast.Matrix):
            rows = [" & ".join(self.render(c, PREC_REL) for c in row) for row in expr.rows]
            return "\\begin{pmatrix}" + " \\\\ ".join(rows) + "\\end{pmatrix}"
        if isinstance(expr, ast.Relation):
            parts = [self.render(expr.chain[0], PREC_ADD)]
            for rel, operand in zip(expr.chain[1::2], expr.chain[2::2]):
                parts.append(_RELATOR_LATEX[rel])
                parts.append(self.render(operand, PREC_ADD))
            return "".join(parts)
        if isinstance(expr, ast.Bracketed):
            inner = self.render(expr.inner, PREC_SEQ)
            sized = self.wants_sized(expr.inner)
            if expr.style == "square":
                return ("\\left[" + inner + "\\right]") if sized else ("[" + inner + "]")
            if expr.style == "brace":
                return "\\left\\{" + inner + "\\right\\}"
            return ("\\left(" + inner + "\\right)") if sized else ("(" + inner + ")")
        if isinstance(expr, ast.Sequence):
            return ",".join(self.render(item, PREC_REL) for item in expr.items)
        if isinstance(expr, ast.TextFragment):
            # Keep the group well-formed even for hostile text.
            safe = expr.text.replace("\\", "/").replace("{", "(").replace("}", ")")
            return "\\text{" + safe + "}"
        if isinstance(expr, ast.ErrorNode):
            return "\\texttt{" + escape_text(expr.raw) + "}"
        raise TypeError(f"unknown expression node {expr!r}")


def render_latex(expr: ast.Expr, opts: Optional[RenderOptions] = None,
                 table: Optional[SymbolTable] = None) -> str:
    """Canonical LaTeX; ``opts`` is accepted for interface parity (the
    LaTeX target has no display-mode or apply-distinction variants)."""
    del opts
    return _LatexWriter(table or default_table()).render(expr, PREC_SEQ)
