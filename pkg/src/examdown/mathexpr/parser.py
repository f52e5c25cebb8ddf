"""Error-tolerant precedence-climbing parser for Space Math.

Precedence, loosest to tightest: relation chain; additive; multiplicative
(explicit ``*``, ``/`` as fraction constructor, implicit juxtaposition);
unary minus; ``^``/``_``; postfix application; atoms.

Whitespace carries meaning at exactly one boundary: an identifier directly
followed by ``(`` is function application, with whitespace it is
multiplication.  Recovery never fails: unclosed brackets auto-close, stray
closers are skipped, and unparseable runs become ErrorNode leaves.
"""

from __future__ import annotations

from typing import List, Optional, Sequence as Seq, Tuple

from examdown.diagnostics import Diagnostic, Span, warning
from examdown.mathexpr import ast
from examdown.mathexpr.lexer import (
    BRACKET, IDENT, NUMBER, OPERATOR, SYMBOL, TEXTQUOTE, UNKNOWN, WHITESPACE, Token,
)
from examdown.mathexpr.symbols import SymbolTable, default_table

_RELATOR_OPS = {"=", "<", ">", "<=", ">=", "!=", "->", "=>", "<=>"}
_OPENERS = {"(": ")", "[": "]", "{": "}"}
_STYLE = {"(": "paren", "[": "square", "{": "brace"}
_CLOSERS = set(")]}")

#: Nesting cap: real formulas stay in single digits; beyond this the input
#: degrades to Error nodes instead of exhausting the interpreter stack.
MAX_NESTING = 64

#: Overall tree-depth cap (flat operator chains build left-leaning trees
#: iteratively, so they bypass MAX_NESTING); deeper trees are kept verbatim.
MAX_TREE_DEPTH = 200


class BaseParser:
    """Shared precedence ladder; dialects override the atom layer."""

    def __init__(self, tokens: Seq[Token], table: Optional[SymbolTable] = None):
        self.raw: List[Token] = list(tokens)
        self.idx: List[int] = [i for i, t in enumerate(self.raw) if t.kind != WHITESPACE]
        self.pos = 0
        self.table = table or default_table()
        self.diags: List[Diagnostic] = []
        self._active_closers: List[str] = []
        self._depth = 0

    # ------------------------------------------------------------------
    # token plumbing

    def peek(self, k: int = 0) -> Optional[Token]:
        j = self.pos + k
        return self.raw[self.idx[j]] if j < len(self.idx) else None

    def ws_before(self, k: int = 0) -> bool:
        j = self.pos + k
        if j >= len(self.idx):
            return False
        r = self.idx[j]
        return r > 0 and self.raw[r - 1].kind == WHITESPACE

    def bump(self) -> Token:
        tok = self.raw[self.idx[self.pos]]
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.idx)

    def here(self) -> Span:
        tok = self.peek()
        if tok is not None:
            return tok.span
        if self.raw:
            last = self.raw[-1].span
            return Span(last.end, last.end, last.line)
        return Span(0, 0, 1)

    def warn(self, code: str, message: str, span: Optional[Span] = None) -> None:
        self.diags.append(warning(span or self.here(), code, message))

    # ------------------------------------------------------------------
    # dialect hooks

    def symbol_category(self, tok: Token) -> Optional[str]:
        if tok.kind != SYMBOL:
            return None
        return self.table.category(tok.lexeme)

    def peek_relator(self) -> Optional[str]:
        tok = self.peek()
        if tok is None:
            return None
        if tok.kind == OPERATOR and tok.lexeme in _RELATOR_OPS:
            return tok.lexeme
        if self.symbol_category(tok) == "rel":
            return tok.lexeme
        return None

    def consume_relator(self, rel: str) -> None:
        self.bump()

    def mult_op(self, tok: Token) -> Optional[str]:
        """'times' / 'div' when the token is an explicit multiplicative op."""
        if tok.kind == OPERATOR:
            if tok.lexeme == "*":
                return "times"
            if tok.lexeme == "/":
                return "div"
        if self.symbol_category(tok) == "mulop":
            return "times" if tok.lexeme == "xx" else "div"
        return None

    def starts_factor(self, tok: Token) -> bool:
        if tok.kind in (NUMBER, IDENT, TEXTQUOTE, UNKNOWN):
            return True
        if tok.kind == BRACKET and tok.lexeme in _OPENERS:
            return True
        if tok.kind == SYMBOL:
            if tok.lexeme.startswith("\\"):
                return False
            return self.table.category(tok.lexeme) not in ("rel", "mulop")
        return False

    # ------------------------------------------------------------------
    # grammar ladder

    def parse_items(self, closers: Tuple[str, ...],
                    stop_syms: Tuple[str, ...] = ()) -> Tuple[List[ast.Expr], bool]:
        """Comma-separated expressions until a closer; returns (items, closed).

        With no closers expected (top level) this consumes all input.
        """
        items: List[ast.Expr] = []
        expect_item = True
        self._active_closers.extend(closers)
        try:
            return self._parse_items_loop(items, expect_item, closers, stop_syms)
        finally:
            if closers:
                del self._active_closers[-len(closers):]

    def _parse_items_loop(self, items: List[ast.Expr], expect_item: bool,
                          closers: Tuple[str, ...],
                          stop_syms: Tuple[str, ...]) -> Tuple[List[ast.Expr], bool]:
        while True:
            if self.at_end():
                return items, False
            tok = self.peek()
            if tok.kind == SYMBOL and tok.lexeme in stop_syms:
                self.bump()
                self.after_stop_symbol()
                return items, True
            if tok.kind == BRACKET and tok.lexeme in _CLOSERS:
                if not closers:
                    self.warn("stray-close", f"stray {tok.lexeme!r} skipped", tok.span)
                    self.bump()
                    continue
                if tok.lexeme not in closers:
                    outer = self._active_closers[:-len(closers)]
                    if tok.lexeme in outer:
                        # an enclosing group owns this closer: auto-close here
                        self.warn("unclosed-bracket",
                                  f"group auto-closed before {tok.lexeme!r}", tok.span)
                        return items, True
                    self.warn("mismatched-bracket",
                              f"expected {closers[0]!r} but found {tok.lexeme!r}; closing group",
                              tok.span)
                    self.bump()
                    return items, True
                self.bump()
                if expect_item and items:
                    items.append(ast.ErrorNode(""))
                    self.warn("missing-operand", "expected an expression after ','", tok.span)
                return items, True
            if tok.kind == OPERATOR and tok.lexeme == ",":
                self.bump()
                if expect_item:
                    items.append(ast.ErrorNode(""))
                    self.warn("missing-operand", "expected an expression before ','", tok.span)
                expect_item = True
                continue
            before = self.pos
            expr = self.parse_relation()
            if expect_item or not items:
                items.append(expr)
            else:
                items[-1] = ast.Times(items[-1], expr)
            expect_item = False
            if self.pos == before:
                # Safety net: never loop without progress.
                junk = self.bump()
                items[-1] = ast.Times(items[-1], ast.ErrorNode(junk.lexeme))
                self.warn("unexpected-token", f"could not parse {junk.lexeme!r}", junk.span)

    def parse_full(self) -> ast.Expr:
        if self.at_end():
            self.diags.append(warning(self.here(), "empty-expression", "empty expression"))
            return ast.ErrorNode("")
        items, _ = self.parse_items(())
        if not items:
            return ast.ErrorNode("")
        expr = items[0] if len(items) == 1 else ast.Sequence(tuple(items))
        # Renderers and the evaluator recurse over the tree; degrade
        # pathologically deep input to its verbatim text instead.
        if ast.tree_depth(expr, MAX_TREE_DEPTH) > MAX_TREE_DEPTH:
            raw = "".join(t.lexeme for t in self.raw)
            span = self.raw[0].span if self.raw else self.here()
            self.warn("nesting-too-deep",
                      "expression tree too deep to lay out; kept verbatim", span)
            return ast.ErrorNode(raw)
        return expr

    def parse_relation(self) -> ast.Expr:
        left = self.parse_additive()
        chain: List[object] = [left]
        while True:
            self.skip_stray_closers()
            rel = self.peek_relator()
            if rel is None:
                break
            span = self.here()
            self.consume_relator(rel)
            tok = self.peek()
            if tok is None or not (self.starts_factor(tok) or
                                   (tok.kind == OPERATOR and tok.lexeme in "+-")):
                chain.append(rel)
                chain.append(ast.ErrorNode(""))
                self.warn("missing-operand", f"expected an expression after {rel!r}", span)
                continue
            chain.append(rel)
            chain.append(self.parse_additive())
        if len(chain) == 1:
            return left
        return ast.Relation(tuple(chain))

    def parse_additive(self) -> ast.Expr:
        left = self.parse_mult()
        while True:
            self.skip_stray_closers()
            tok = self.peek()
            if tok is None or tok.kind != OPERATOR or tok.lexeme not in ("+", "-"):
                break
            op = self.bump()
            right = self._operand(self.parse_mult, op)
            left = ast.Add(left, right) if op.lexeme == "+" else ast.Sub(left, right)
        return left

    def parse_mult(self) -> ast.Expr:
        left = self.parse_unary()
        while True:
            self.skip_stray_closers()
            tok = self.peek()
            if tok is None:
                break
            op = self.mult_op(tok)
            if op == "times":
                sym = self.bump()
                right = self._operand(self.parse_unary, sym)
                left = ast.Times(left, right, explicit=True)
            elif op == "div":
                sym = self.bump()
                right = self._operand(self.parse_unary, sym)
                left = ast.Frac(self.absorb(left), self.absorb(right))
            elif self.starts_factor(tok):
                right = self.parse_unary()
                left = ast.Times(left, right, explicit=False)
            else:
                break
        return left

    def _operand(self, production, op_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is None or not (self.starts_factor(tok) or
                               (tok.kind == OPERATOR and tok.lexeme in "+-")):
            self.warn("missing-operand", f"expected an expression after {op_tok.lexeme!r}",
                      op_tok.span)
            return ast.ErrorNode("")
        return production()

    def _too_deep(self) -> ast.Expr:
        tok = self.peek()
        span = tok.span if tok is not None else self.here()
        raw = ""
        if tok is not None:
            self.bump()
            raw = tok.lexeme
        self.warn("nesting-too-deep", "expression nests too deeply; giving up here", span)
        return ast.ErrorNode(raw)

    def parse_unary(self) -> ast.Expr:
        if self._depth >= MAX_NESTING:
            return self._too_deep()
        self._depth += 1
        try:
            tok = self.peek()
            if tok is not None and tok.kind == OPERATOR and tok.lexeme == "-":
                self.bump()
                return ast.Neg(self._operand(self.parse_unary, tok))
            if tok is not None and tok.kind == OPERATOR and tok.lexeme == "+":
                self.bump()
                return self._operand(self.parse_unary, tok)
            return self.parse_power()
        finally:
            self._depth -= 1

    def parse_power(self) -> ast.Expr:
        base = self.parse_postfix()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != OPERATOR or tok.lexeme not in ("^", "_"):
                break
            self.bump()
            operand = self.parse_script_operand(tok.lexeme, tok)
            base = self.absorb(base)
            base = ast.Power(base, operand) if tok.lexeme == "^" else ast.Subscript(base, operand)
        return base

    def parse_script_operand(self, op: str, op_tok: Token) -> ast.Expr:
        if self._depth >= MAX_NESTING:
            return self._too_deep()
        self._depth += 1
        try:
            tok = self.peek()
            negate = False
            if tok is not None and tok.kind == OPERATOR and tok.lexeme == "-":
                self.bump()
                negate = True
            inner = self.script_primary(op_tok)
            if negate:
                inner = ast.Neg(inner)
            nxt = self.peek()
            if nxt is not None and nxt.kind == OPERATOR and nxt.lexeme == op:
                # Same-operator chains are right-associative: x^a^b == x^(a^b).
                self.bump()
                rhs = self.parse_script_operand(op, nxt)
                inner = ast.Power(inner, rhs) if op == "^" else ast.Subscript(inner, rhs)
            return inner
        finally:
            self._depth -= 1

    def script_primary(self, op_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is None or not self.starts_factor(tok):
            self.warn("missing-operand", f"expected a script after {op_tok.lexeme!r}",
                      op_tok.span)
            return ast.ErrorNode("")
        return self.absorb(self.parse_postfix())

    def parse_postfix(self) -> ast.Expr:
        atom = self.parse_atom()
        if isinstance(atom, (ast.Ident, ast.Greek)):
            tok = self.peek()
            if (tok is not None and tok.kind == BRACKET and tok.lexeme == "("
                    and not self.ws_before()):
                self.bump()
                args, closed = self.parse_items((")",))
                if not closed:
                    self.warn("unclosed-bracket", "'(' auto-closed at end of expression",
                              tok.span)
                return ast.Apply(atom, tuple(args))
        return atom

    # ------------------------------------------------------------------
    # atoms

    def parse_atom(self) -> ast.Expr:
        if self._depth >= MAX_NESTING:
            return self._too_deep()
        self._depth += 1
        try:
            return self._parse_atom_inner()
        finally:
            self._depth -= 1

    def _parse_atom_inner(self) -> ast.Expr:
        while True:
            tok = self.peek()
            if tok is None:
                self.warn("missing-operand", "expected an expression")
                return ast.ErrorNode("")
            if tok.kind == NUMBER:
                self.bump()
                if "." in tok.lexeme:
                    return ast.Decimal(tok.lexeme)
                return ast.Integer(int(tok.lexeme))
            if tok.kind == IDENT:
                self.bump()
                return ast.Ident(tok.lexeme)
            if tok.kind == TEXTQUOTE:
                self.bump()
                return ast.TextFragment(tok.lexeme.strip('"'))
            if tok.kind == BRACKET:
                if tok.lexeme in _OPENERS:
                    return self.parse_group_atom(tok)
                self.warn("stray-close", f"stray {tok.lexeme!r} skipped", tok.span)
                self.bump()
                continue
            if tok.kind == SYMBOL:
                return self.parse_symbol_atom(tok)
            if tok.kind == UNKNOWN:
                self.bump()
                return ast.ErrorNode(tok.lexeme)
            # Operator in operand position.
            self.bump()
            self.warn("unexpected-token", f"unexpected {tok.lexeme!r}", tok.span)
            return ast.ErrorNode(tok.lexeme)

    def parse_group_atom(self, opener: Token) -> ast.Expr:
        self.bump()
        closer = _OPENERS[opener.lexeme]
        items, closed = self.parse_items((closer,))
        if not closed:
            self.warn("unclosed-bracket",
                      f"{opener.lexeme!r} auto-closed at end of expression", opener.span)
        style = _STYLE[opener.lexeme]
        if style == "square" and items and all(
                isinstance(it, ast.Bracketed) and it.style == "square" for it in items):
            return self._build_matrix(items, opener.span)
        if len(items) == 1:
            return ast.Bracketed(style, items[0])
        return ast.Bracketed(style, ast.Sequence(tuple(items)))

    def _build_matrix(self, items: List[ast.Expr], span: Span) -> ast.Expr:
        rows: List[Tuple[ast.Expr, ...]] = []
        for item in items:
            inner = item.inner
            if isinstance(inner, ast.Sequence):
                rows.append(tuple(inner.items))
            else:
                rows.append((inner,))
        width = max(len(r) for r in rows)
        if any(len(r) != width for r in rows):
            self.warn("ragged-matrix",
                      "matrix rows have unequal length; padded with error cells", span)
            rows = [r + tuple(ast.ErrorNode("") for _ in range(width - len(r))) for r in rows]
        return ast.Matrix(tuple(rows))

    def parse_symbol_atom(self, tok: Token) -> ast.Expr:
        category = self.table.category(tok.lexeme)
        if category == "greek":
            self.bump()
            return ast.Greek(tok.lexeme)
        if category == "const":
            self.bump()
            return ast.SymbolConst(tok.lexeme)
        if category == "set":
            self.bump()
            return ast.BlackboardSet(tok.lexeme[0])
        if category == "func":
            self.bump()
            return ast.Ident(tok.lexeme)
        if category == "op":
            self.bump()
            return ast.SymbolConst(tok.lexeme)
        if category == "bigop":
            self.bump()
            return self.parse_bigop(tok.lexeme)
        if category == "radical":
            self.bump()
            return self.parse_radical(tok.lexeme, tok)
        # rel / mulop names and LaTeX commands in operand position.
        self.bump()
        self.warn("unexpected-token", f"unexpected {tok.lexeme!r}", tok.span)
        return ast.ErrorNode(tok.lexeme)

    # ------------------------------------------------------------------
    # structured atoms shared between dialects

    def parse_bigop(self, op: str) -> ast.Expr:
        binder = lower = upper = None
        saw_lower = saw_upper = False
        while True:
            tok = self.peek()
            if tok is None or tok.kind != OPERATOR:
                break
            if tok.lexeme == "_" and not saw_lower:
                self.bump()
                binder, lower = self.parse_bigop_bound(tok, split_binder=True)
                saw_lower = True
            elif tok.lexeme == "^" and not saw_upper:
                self.bump()
                _, upper = self.parse_bigop_bound(tok, split_binder=False)
                saw_upper = True
            else:
                break
        body = None
        tok = self.peek()
        if tok is not None and self.starts_factor(tok):
            body = self.parse_mult()
        return ast.BigOp(op, binder, lower, upper, body)

    def parse_bigop_bound(self, op_tok: Token,
                          split_binder: bool) -> Tuple[Optional[ast.Expr], Optional[ast.Expr]]:
        tok = self.peek()
        if tok is None:
            self.warn("missing-operand", f"expected a bound after {op_tok.lexeme!r}",
                      op_tok.span)
            return None, ast.ErrorNode("")
        if tok.kind == BRACKET and tok.lexeme == "(":
            self.bump()
            items, closed = self.parse_items((")",))
            if not closed:
                self.warn("unclosed-bracket", "'(' auto-closed at end of expression", tok.span)
            inner = items[0] if len(items) == 1 else ast.Sequence(tuple(items)) if items else ast.ErrorNode("")
            return self._split_binder(inner, split_binder)
        if self.starts_factor(tok):
            return None, self.parse_atom()
        self.warn("missing-operand", f"expected a bound after {op_tok.lexeme!r}", op_tok.span)
        return None, ast.ErrorNode("")

    @staticmethod
    def _split_binder(inner: ast.Expr,
                      split: bool) -> Tuple[Optional[ast.Expr], Optional[ast.Expr]]:
        if (split and isinstance(inner, ast.Relation) and len(inner.chain) == 3
                and inner.chain[1] == "=" and isinstance(inner.chain[0], (ast.Ident, ast.Greek))):
            return inner.chain[0], inner.chain[2]
        return None, inner

    def parse_radical(self, name: str, name_tok: Token) -> ast.Expr:
        if name == "sqrt":
            return ast.Sqrt(self.parse_radical_arg(name_tok))
        index = self.parse_radical_arg(name_tok)
        arg = self.parse_radical_arg(name_tok)
        return ast.Root(index, arg)

    def parse_radical_arg(self, name_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is None:
            self.warn("missing-operand", f"expected an argument for {name_tok.lexeme!r}",
                      name_tok.span)
            return ast.ErrorNode("")
        if tok.kind == BRACKET and tok.lexeme == "(":
            self.bump()
            items, closed = self.parse_items((")",))
            if not closed:
                self.warn("unclosed-bracket", "'(' auto-closed at end of expression", tok.span)
            if not items:
                return ast.ErrorNode("")
            if len(items) == 1:
                return items[0]
            return ast.Sequence(tuple(items))
        if self.starts_factor(tok):
            return self.parse_power()
        self.warn("missing-operand", f"expected an argument for {name_tok.lexeme!r}",
                  name_tok.span)
        return ast.ErrorNode("")

    def after_stop_symbol(self) -> None:
        """Hook: consume trailing delimiter after a stop symbol (LaTeX \\right)."""

    def skip_stray_closers(self) -> None:
        """Drop closing brackets no surrounding group is waiting for."""
        while True:
            tok = self.peek()
            if (tok is None or tok.kind != BRACKET or tok.lexeme not in _CLOSERS
                    or tok.lexeme in self._active_closers):
                return
            self.warn("stray-close", f"stray {tok.lexeme!r} skipped", tok.span)
            self.bump()

    @staticmethod
    def absorb(expr: ast.Expr) -> ast.Expr:
        """AsciiMath grouping-paren absorption for script/fraction operands."""
        if isinstance(expr, ast.Bracketed) and expr.style == "paren":
            return expr.inner
        return expr


class SpaceMathParser(BaseParser):
    pass


def parse_space_math(tokens: Seq[Token],
                     table: Optional[SymbolTable] = None) -> Tuple[ast.Expr, List[Diagnostic]]:
    parser = SpaceMathParser(tokens, table)
    expr = parser.parse_full()
    return expr, parser.diags
