"""LaTeX mathematics subset parser, producing the same Expr type.

Supports the command set students actually use in short answers: \\frac,
\\sqrt (with optional index), the big operators, \\left...\\right, braced
scripts, Greek commands, \\mathbb, \\times/\\cdot/\\div, the common
relation commands, \\infty and the named functions.  Anything else becomes
an ErrorNode preserved verbatim with an ``unsupported-latex`` warning.
"""

from __future__ import annotations

from typing import List, Optional, Sequence as Seq, Tuple

from examdown.diagnostics import Diagnostic, Span
from examdown.mathexpr import ast
from examdown.mathexpr.lexer import BRACKET, NUMBER, OPERATOR, SYMBOL, WHITESPACE, Token
from examdown.mathexpr.parser import BaseParser, _OPENERS, _STYLE
from examdown.mathexpr.symbols import SymbolTable

_SPACING = {"\\,", "\\;", "\\:", "\\!", "\\ ", "\\quad", "\\qquad"}

_RELATOR_COMMANDS = {
    "\\leq": "<=", "\\le": "<=", "\\geq": ">=", "\\ge": ">=",
    "\\neq": "!=", "\\ne": "!=", "\\in": "in",
    "\\to": "->", "\\rightarrow": "->",
    "\\Rightarrow": "=>", "\\implies": "=>",
    "\\Leftrightarrow": "<=>", "\\iff": "<=>",
}

_STRUCTURAL = {"\\frac", "\\sqrt", "\\left", "\\mathbb", "\\text", "\\mbox",
               "\\operatorname"}


class LatexParser(BaseParser):
    def __init__(self, tokens: Seq[Token], table: Optional[SymbolTable] = None):
        super().__init__(tokens, table)
        self.idx = [i for i in self.idx
                    if not (self.raw[i].kind == SYMBOL and self.raw[i].lexeme in _SPACING)]
        self._atoms = self._atom_commands()

    def _atom_commands(self) -> set:
        atoms = set(_STRUCTURAL)
        for name in self.table.names():
            entry = self.table.lookup(name)
            if entry.latex.startswith("\\") and "{" not in entry.latex:
                if entry.category in ("greek", "const", "func", "op", "bigop", "radical"):
                    atoms.add(entry.latex)
        return atoms

    def ws_before(self, k: int = 0) -> bool:
        j = self.pos + k
        if j >= len(self.idx):
            return False
        r = self.idx[j]
        if r == 0:
            return False
        prev = self.raw[r - 1]
        return prev.kind == WHITESPACE or (prev.kind == SYMBOL and prev.lexeme in _SPACING)

    # ------------------------------------------------------------------
    # hooks

    def peek_relator(self) -> Optional[str]:
        tok = self.peek()
        if tok is not None and tok.kind == SYMBOL:
            if tok.lexeme in _RELATOR_COMMANDS:
                return _RELATOR_COMMANDS[tok.lexeme]
            if tok.lexeme in ("\\text", "\\mbox"):
                conn = self._text_connective()
                if conn is not None:
                    return conn
        return super().peek_relator()

    def _text_connective(self) -> Optional[str]:
        t1, t2, t3 = self.peek(1), self.peek(2), self.peek(3)
        if (t1 is not None and t1.kind == BRACKET and t1.lexeme == "{"
                and t2 is not None and t2.lexeme in ("or", "and")
                and t3 is not None and t3.kind == BRACKET and t3.lexeme == "}"):
            return t2.lexeme
        return None

    def consume_relator(self, rel: str) -> None:
        tok = self.peek()
        if (tok is not None and tok.kind == SYMBOL and tok.lexeme in ("\\text", "\\mbox")
                and self._text_connective() is not None):
            for _ in range(4):
                self.bump()
            return
        self.bump()

    def mult_op(self, tok: Token) -> Optional[str]:
        if tok.kind == SYMBOL:
            if tok.lexeme in ("\\times", "\\cdot"):
                return "times"
            if tok.lexeme == "\\div":
                return "div"
        return super().mult_op(tok)

    def starts_factor(self, tok: Token) -> bool:
        if tok.kind == SYMBOL and tok.lexeme.startswith("\\"):
            if (tok.lexeme in ("\\text", "\\mbox") and tok is self.peek()
                    and self._text_connective() is not None):
                return False  # it is a relation-level connective, not a factor
            return tok.lexeme in self._atoms
        return super().starts_factor(tok)

    def after_stop_symbol(self) -> None:
        tok = self.peek()
        if tok is None:
            return
        if tok.kind == BRACKET and tok.lexeme in ")]}":
            self.bump()
        elif tok.kind == SYMBOL and tok.lexeme in ("\\}", "\\{"):
            self.bump()
        elif tok.kind == OPERATOR and tok.lexeme == ".":
            self.bump()

    # ------------------------------------------------------------------
    # atoms

    def parse_group_atom(self, opener: Token) -> ast.Expr:
        if opener.lexeme == "{":
            return self._brace_group()
        return super().parse_group_atom(opener)

    def _brace_group(self) -> ast.Expr:
        """``{...}`` is invisible grouping: the inner expression, no node."""
        opener = self.bump()
        items, closed = self.parse_items(("}",))
        if not closed:
            self.warn("unclosed-group", "'{' auto-closed at end of expression", opener.span)
        if not items:
            return ast.ErrorNode("")
        if len(items) == 1:
            return items[0]
        return ast.Sequence(tuple(items))

    def parse_symbol_atom(self, tok: Token) -> ast.Expr:
        lex = tok.lexeme
        if not lex.startswith("\\"):
            return super().parse_symbol_atom(tok)
        if lex == "\\frac":
            self.bump()
            num = self.parse_latex_arg(tok)
            den = self.parse_latex_arg(tok)
            return ast.Frac(num, den)
        if lex == "\\sqrt":
            self.bump()
            nxt = self.peek()
            if nxt is not None and nxt.kind == BRACKET and nxt.lexeme == "[":
                self.bump()
                items, closed = self.parse_items(("]",))
                if not closed:
                    self.warn("unclosed-bracket", "'[' auto-closed", nxt.span)
                index = items[0] if items else ast.ErrorNode("")
                return ast.Root(index, self.parse_latex_arg(tok))
            return ast.Sqrt(self.parse_latex_arg(tok))
        if lex == "\\left":
            self.bump()
            return self._left_group(tok)
        if lex == "\\right":
            self.warn("stray-close", "\\right without matching \\left", tok.span)
            self.bump()
            self.after_stop_symbol()
            return self.parse_atom() if not self.at_end() else ast.ErrorNode("")
        if lex == "\\mathbb":
            self.bump()
            return self._mathbb(tok)
        if lex in ("\\text", "\\mbox"):
            self.bump()
            return ast.TextFragment(self._raw_brace_content(tok))
        if lex == "\\operatorname":
            self.bump()
            name = self._raw_brace_content(tok).strip()
            if name:
                return ast.Ident(name)
            return ast.ErrorNode(lex)
        entry = self.table.from_latex(lex)
        if entry is not None:
            if entry.category == "greek":
                self.bump()
                return ast.Greek(entry.name)
            if entry.category == "const":
                self.bump()
                return ast.SymbolConst(entry.name)
            if entry.category == "func":
                self.bump()
                return ast.Ident(entry.name)
            if entry.category == "op":
                self.bump()
                return ast.SymbolConst(entry.name)
            if entry.category == "bigop":
                self.bump()
                return self.parse_bigop(entry.name)
            if entry.category == "radical":
                self.bump()
                return ast.Sqrt(self.parse_latex_arg(tok))
        if lex in _RELATOR_COMMANDS or lex in ("\\times", "\\cdot", "\\div"):
            self.bump()
            self.warn("unexpected-token", f"unexpected {lex!r}", tok.span)
            return ast.ErrorNode(lex)
        return self._unsupported_command(tok)

    def _left_group(self, left_tok: Token) -> ast.Expr:
        style, closer = "paren", ")"
        tok = self.peek()
        if tok is not None:
            if tok.kind == BRACKET and tok.lexeme in _OPENERS:
                style, closer = _STYLE[tok.lexeme], _OPENERS[tok.lexeme]
                self.bump()
            elif tok.kind == SYMBOL and tok.lexeme == "\\{":
                style, closer = "brace", "}"
                self.bump()
            elif tok.kind == OPERATOR and tok.lexeme == ".":
                self.warn("unsupported-latex", "\\left. treated as a plain group", tok.span)
                self.bump()
        items, closed = self.parse_items((closer,), stop_syms=("\\right",))
        if not closed:
            self.warn("unclosed-bracket", "\\left group auto-closed at end of expression",
                      left_tok.span)
        if not items:
            inner: ast.Expr = ast.ErrorNode("")
        elif len(items) == 1:
            inner = items[0]
        else:
            inner = ast.Sequence(tuple(items))
        return ast.Bracketed(style, inner)

    def _mathbb(self, cmd_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is not None and tok.kind == BRACKET and tok.lexeme == "{":
            letter = self.peek(1)
            close = self.peek(2)
            if (letter is not None and letter.lexeme in ("N", "Z", "Q", "R", "C")
                    and close is not None and close.lexeme == "}"):
                for _ in range(3):
                    self.bump()
                return ast.BlackboardSet(letter.lexeme)
        self.warn("unsupported-latex", "\\mathbb needs a single letter from N Z Q R C",
                  cmd_tok.span)
        return ast.ErrorNode("\\mathbb" + self._raw_following_braces())

    def parse_latex_arg(self, cmd_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is None:
            self.warn("missing-operand", f"expected an argument for {cmd_tok.lexeme!r}",
                      cmd_tok.span)
            return ast.ErrorNode("")
        if tok.kind == BRACKET and tok.lexeme == "{":
            return self._brace_group()
        if tok.kind == NUMBER:
            return self._single_number_char()
        if self.starts_factor(tok):
            return self.parse_atom()
        self.warn("missing-operand", f"expected an argument for {cmd_tok.lexeme!r}",
                  cmd_tok.span)
        return ast.ErrorNode("")

    def script_primary(self, op_tok: Token) -> ast.Expr:
        tok = self.peek()
        if tok is not None and tok.kind == BRACKET and tok.lexeme == "{":
            return self._brace_group()
        if tok is not None and tok.kind == NUMBER:
            # Unbraced LaTeX scripts take one character: x^23 is (x^2)*3.
            return self._single_number_char()
        return super().script_primary(op_tok)

    def parse_bigop_bound(self, op_tok: Token,
                          split_binder: bool) -> Tuple[Optional[ast.Expr], Optional[ast.Expr]]:
        tok = self.peek()
        if tok is not None and tok.kind == BRACKET and tok.lexeme == "{":
            inner = self._brace_group()
            return self._split_binder(inner, split_binder)
        if tok is not None and tok.kind == NUMBER:
            return None, self._single_number_char()
        return super().parse_bigop_bound(op_tok, split_binder)

    def _single_number_char(self) -> ast.Expr:
        tok = self.peek()
        if len(tok.lexeme) > 1 and tok.lexeme[0].isdigit():
            first, rest = tok.lexeme[0], tok.lexeme[1:]
            ridx = self.idx[self.pos]
            old = self.raw[ridx].span
            self.raw[ridx] = Token(NUMBER, rest, Span(old.start + 1, old.end, old.line))
            return ast.Integer(int(first))
        self.bump()
        if "." in tok.lexeme:
            return ast.Decimal(tok.lexeme)
        return ast.Integer(int(tok.lexeme))

    # ------------------------------------------------------------------
    # raw-text helpers (verbatim recovery)

    def _raw_brace_content(self, cmd_tok: Token) -> str:
        tok = self.peek()
        if tok is None or tok.kind != BRACKET or tok.lexeme != "{":
            self.warn("missing-operand", f"expected '{{' after {cmd_tok.lexeme!r}",
                      cmd_tok.span)
            return ""
        return self._scan_raw_braces()[1:-1]

    def _scan_raw_braces(self) -> str:
        """Consume a brace group, returning its raw text including braces."""
        start_raw = self.idx[self.pos]
        depth = 0
        r = start_raw
        end_raw = len(self.raw) - 1
        while r < len(self.raw):
            t = self.raw[r]
            if t.kind == BRACKET and t.lexeme == "{":
                depth += 1
            elif t.kind == BRACKET and t.lexeme == "}":
                depth -= 1
                if depth == 0:
                    end_raw = r
                    break
            r += 1
        else:
            self.warn("unclosed-group", "'{' auto-closed at end of expression",
                      self.raw[start_raw].span)
        text = "".join(t.lexeme for t in self.raw[start_raw:end_raw + 1])
        while self.pos < len(self.idx) and self.idx[self.pos] <= end_raw:
            self.pos += 1
        return text

    def _raw_following_braces(self) -> str:
        parts: List[str] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind != BRACKET or tok.lexeme != "{":
                break
            parts.append(self._scan_raw_braces())
        return "".join(parts)

    def _unsupported_command(self, tok: Token) -> ast.Expr:
        self.bump()
        raw = tok.lexeme + self._raw_following_braces()
        self.warn("unsupported-latex", f"unsupported LaTeX command {tok.lexeme!r}", tok.span)
        return ast.ErrorNode(raw)


def parse_latex_subset(tokens: Seq[Token],
                       table: Optional[SymbolTable] = None) -> Tuple[ast.Expr, List[Diagnostic]]:
    parser = LatexParser(tokens, table)
    expr = parser.parse_full()
    return expr, parser.diags
