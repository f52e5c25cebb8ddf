"""Tokenizer over normalized expression text.

Greedy longest-match against the symbol-name table; every byte of input is
covered by exactly one token, so concatenating lexemes reproduces the
input.  Unmatched bytes become ``unknown`` tokens with a warning; nothing
is dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from examdown.diagnostics import Diagnostic, Span, warning
from examdown.mathexpr.symbols import SymbolTable, default_table

NUMBER = "number"
IDENT = "identifier"
SYMBOL = "symbol-name"
OPERATOR = "operator"
BRACKET = "bracket"
WHITESPACE = "whitespace"
TEXTQUOTE = "text-quote"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: Span


_WS_RE = re.compile(r"[ \t\r\n]+")
_NUM_RE = re.compile(r"\d+(?:\.\d+)?|\.\d+")
_CMD_RE = re.compile(r"\\[A-Za-z]+")
_MULTI_OPS = ("<=>", "=>", "<=", ">=", "!=", "->")
_SINGLE_OPS = set("+-*/^_=<>,")
_BRACKETS = set("()[]{}")


def tokenize(text: str, table: Optional[SymbolTable] = None) -> Tuple[List[Token], List[Diagnostic]]:
    table = table or default_table()
    tokens: List[Token] = []
    diags: List[Diagnostic] = []
    pos = 0
    line = 1
    n = len(text)

    def push(kind: str, lexeme: str) -> None:
        nonlocal pos, line
        tokens.append(Token(kind, lexeme, Span(pos, pos + len(lexeme), line)))
        line += lexeme.count("\n")
        pos += len(lexeme)

    def matchable(i: int) -> bool:
        ch = text[i]
        if ch.isascii() and (ch.isalnum() or ch in _SINGLE_OPS or ch in _BRACKETS):
            return True
        if ch in ' \t\r\n"\\.':
            return True
        return table.match_longest(text, i) is not None

    while pos < n:
        ch = text[pos]
        m = _WS_RE.match(text, pos)
        if m:
            push(WHITESPACE, m.group())
            continue
        m = _NUM_RE.match(text, pos)
        if m:
            push(NUMBER, m.group())
            continue
        if ch == "\\":
            m = _CMD_RE.match(text, pos)
            if m:
                push(SYMBOL, m.group())
            elif pos + 1 < n:
                push(SYMBOL, text[pos:pos + 2])
            else:
                push(SYMBOL, "\\")
            continue
        name = table.match_longest(text, pos)
        if name is not None:
            push(SYMBOL, name)
            continue
        for op in _MULTI_OPS:
            if text.startswith(op, pos):
                push(OPERATOR, op)
                break
        else:
            if ch in _SINGLE_OPS:
                push(OPERATOR, ch)
            elif ch in _BRACKETS:
                push(BRACKET, ch)
            elif ch == '"':
                close = text.find('"', pos + 1)
                if close == -1:
                    span = Span(pos, n, line)
                    diags.append(warning(span, "unclosed-quote", "quoted text never closes"))
                    push(TEXTQUOTE, text[pos:])
                else:
                    push(TEXTQUOTE, text[pos:close + 1])
            elif ch.isascii() and ch.isalpha():
                push(IDENT, ch)
            elif ch == ".":
                push(OPERATOR, ch)
            else:
                end = pos + 1
                while end < n and not matchable(end):
                    end += 1
                lexeme = text[pos:end]
                diags.append(warning(
                    Span(pos, end, line),
                    "unknown-token",
                    f"unrecognised input {lexeme!r}",
                ))
                push(UNKNOWN, lexeme)

    return tokens, diags
