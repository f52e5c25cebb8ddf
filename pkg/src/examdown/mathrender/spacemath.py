"""Space Math serializer with minimal parenthesization.

The contract is the round trip: for any parser-shaped, Error-free tree
``e``, ``parse(render_spacemath(e)) == e`` structurally.  Parentheses are
emitted only where the precedence table requires them; operand positions
that absorb grouping parens (fractions, scripts, radicals) may always add
them safely.
"""

from __future__ import annotations

from examdown.mathexpr import ast

PREC_SEQ = 0
PREC_REL = 1
PREC_ADD = 2
PREC_MUL = 3
PREC_UNARY = 4
PREC_POW = 5
PREC_POSTFIX = 6
PREC_ATOM = 7


def prec(expr: ast.Expr) -> int:
    if isinstance(expr, ast.Sequence):
        return PREC_SEQ
    if isinstance(expr, ast.Relation):
        return PREC_REL
    if isinstance(expr, (ast.Add, ast.Sub)):
        return PREC_ADD
    if isinstance(expr, (ast.Times, ast.Frac)):
        return PREC_MUL
    if isinstance(expr, (ast.Neg, ast.BigOp)):
        return PREC_UNARY
    if isinstance(expr, (ast.Power, ast.Subscript)):
        return PREC_POW
    if isinstance(expr, ast.Apply):
        return PREC_POSTFIX
    if isinstance(expr, ast.Integer) and expr.value < 0:
        return PREC_UNARY
    return PREC_ATOM


def ends_open(expr: ast.Expr) -> bool:
    """True when the rendering could swallow a following factor (big-op body)."""
    if isinstance(expr, ast.BigOp):
        return True
    if isinstance(expr, ast.Times):
        return ends_open(expr.right)
    if isinstance(expr, ast.Frac):
        return ends_open(expr.denominator)
    if isinstance(expr, ast.Neg):
        return ends_open(expr.arg)
    if isinstance(expr, (ast.Add, ast.Sub)):
        return ends_open(expr.right)
    if isinstance(expr, ast.Relation):
        return ends_open(expr.chain[-1])
    return False


_REL_WORDS = {"in", "or", "and"}

_SIMPLE_SCRIPT = (ast.Integer, ast.Decimal, ast.Ident, ast.Greek,
                  ast.SymbolConst, ast.BlackboardSet)


def render_spacemath(expr: ast.Expr) -> str:
    """Serialize to Space Math.  ``ast.contains_errors`` reports lossiness:
    ErrorNode leaves emit their raw text verbatim."""
    return _render(expr, PREC_SEQ)


def _render(expr: ast.Expr, min_prec: int, absorbing: bool = False) -> str:
    wrap = prec(expr) < min_prec or (absorbing and isinstance(expr, ast.Bracketed))
    text = _node(expr)
    if wrap:
        return "(" + text + ")"
    return text


def _absorbed(expr: ast.Expr, min_prec: int) -> str:
    """Operand of an absorbing position (fraction bar, script, radical)."""
    if ends_open(expr) and prec(expr) >= min_prec:
        return "(" + _node(expr) + ")"
    return _render(expr, min_prec, absorbing=True)


def _script(expr: ast.Expr) -> str:
    if isinstance(expr, _SIMPLE_SCRIPT) and prec(expr) == PREC_ATOM:
        return _node(expr)
    if isinstance(expr, ast.Neg) and isinstance(expr.arg, _SIMPLE_SCRIPT) \
            and prec(expr.arg) == PREC_ATOM:
        return "-" + _node(expr.arg)
    return "(" + _node(expr) + ")"


def _node(expr: ast.Expr) -> str:
    if isinstance(expr, ast.Integer):
        return str(expr.value)
    if isinstance(expr, ast.Decimal):
        return expr.text
    if isinstance(expr, (ast.Ident, ast.SymbolConst, ast.Greek)):
        return expr.name
    if isinstance(expr, ast.BlackboardSet):
        return expr.name * 2
    if isinstance(expr, ast.Add):
        return _render(expr.left, PREC_ADD) + "+" + _render(expr.right, PREC_MUL)
    if isinstance(expr, ast.Sub):
        return _render(expr.left, PREC_ADD) + "-" + _render(expr.right, PREC_MUL)
    if isinstance(expr, ast.Neg):
        return "-" + _render(expr.arg, PREC_UNARY)
    if isinstance(expr, ast.Times):
        left = _render(expr.left, PREC_MUL)
        if ends_open(expr.left):
            left = "(" + _node(expr.left) + ")"
        right = _render(expr.right, PREC_UNARY)
        if expr.explicit:
            return left + "*" + right
        if right.startswith("-"):
            right = "(" + right + ")"
        return left + " " + right
    if isinstance(expr, ast.Frac):
        num = _absorbed(expr.numerator, PREC_MUL)
        den = _render(expr.denominator, PREC_UNARY, absorbing=True)
        return num + "/" + den
    if isinstance(expr, ast.Power):
        return _render(expr.base, PREC_POSTFIX, absorbing=True) + "^" + _script(expr.exponent)
    if isinstance(expr, ast.Subscript):
        return _render(expr.base, PREC_POSTFIX, absorbing=True) + "_" + _script(expr.index)
    if isinstance(expr, ast.Apply):
        head = _render(expr.head, PREC_POSTFIX)
        return head + "(" + ",".join(_render(a, PREC_REL) for a in expr.args) + ")"
    if isinstance(expr, ast.Sqrt):
        return "sqrt(" + _render(expr.arg, PREC_SEQ) + ")"
    if isinstance(expr, ast.Root):
        return ("root(" + _render(expr.index, PREC_SEQ) + ")("
                + _render(expr.arg, PREC_SEQ) + ")")
    if isinstance(expr, ast.BigOp):
        parts = [expr.op]
        if expr.binder is not None and expr.lower is not None:
            parts.append("_(" + _render(expr.binder, PREC_ADD) + "="
                         + _render(expr.lower, PREC_ADD) + ")")
        elif expr.lower is not None:
            parts.append("_" + _bigop_bound(expr.lower))
        elif expr.binder is not None:
            parts.append("_(" + _render(expr.binder, PREC_ADD) + ")")
        if expr.upper is not None:
            parts.append("^" + _bigop_bound(expr.upper))
        if expr.body is not None:
            parts.append(" " + _render(expr.body, PREC_MUL))
        return "".join(parts)
    if isinstance(expr, ast.Matrix):
        rows = ["[" + ",".join(_render(c, PREC_REL) for c in row) + "]"
                for row in expr.rows]
        return "[" + ",".join(rows) + "]"
    if isinstance(expr, ast.Relation):
        parts = [_render(expr.chain[0], PREC_ADD)]
        for rel, operand in zip(expr.chain[1::2], expr.chain[2::2]):
            if rel in _REL_WORDS:
                parts.append(f" {rel} ")
            else:
                parts.append(rel)
            parts.append(_render(operand, PREC_ADD))
        return "".join(parts)
    if isinstance(expr, ast.Bracketed):
        opener, closer = {"paren": "()", "square": "[]", "brace": "{}"}[expr.style]
        return opener + _render(expr.inner, PREC_SEQ) + closer
    if isinstance(expr, ast.Sequence):
        return ",".join(_render(item, PREC_REL) for item in expr.items)
    if isinstance(expr, ast.TextFragment):
        return '"' + expr.text.replace('"', "'") + '"'
    if isinstance(expr, ast.ErrorNode):
        return expr.raw
    raise TypeError(f"unknown expression node {expr!r}")


def _bigop_bound(expr: ast.Expr) -> str:
    """Bound of a big operator: bare for one-token atoms, else parens.

    Unlike power scripts, bounds never take a bare leading minus (the
    parser reads bare bounds as single atoms).
    """
    if isinstance(expr, _SIMPLE_SCRIPT) and prec(expr) == PREC_ATOM:
        return _node(expr)
    return "(" + _node(expr) + ")"
