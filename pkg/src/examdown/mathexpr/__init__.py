"""Expression front end: normalize, classify, tokenize, parse.

The whole pipeline is total: any UTF-8 input yields an Expr plus a list of
diagnostics whose spans point into the original text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence as Seq, Tuple

from examdown.diagnostics import Diagnostic
from examdown.mathexpr import ast
from examdown.mathexpr.ast import Expr
from examdown.mathexpr.latex import LatexParser, parse_latex_subset
from examdown.mathexpr.lexer import Token, tokenize
from examdown.mathexpr.parser import SpaceMathParser, parse_space_math
from examdown.mathexpr.symbols import SymbolTable, default_table, load_table
from examdown.mathexpr.unicodemap import NormalizedSource, normalize_unicode

SPACE_MATH = "space-math"
LATEX = "latex"


def classify_dialect(expr_source: str) -> str:
    """LaTeX iff the source contains a backslash or braced scripts."""
    if "\\" in expr_source or "^{" in expr_source or "_{" in expr_source:
        return LATEX
    return SPACE_MATH


def parse_expression(tokens: Seq[Token], dialect: str,
                     table: Optional[SymbolTable] = None) -> Tuple[Expr, List[Diagnostic]]:
    """Parse a token stream in the given dialect; never fails."""
    if dialect == LATEX:
        return parse_latex_subset(tokens, table)
    return parse_space_math(tokens, table)


@dataclass
class ParsedMath:
    """End-to-end result for one expression source string."""

    source: str
    expr: Expr
    dialect: str
    diagnostics: List[Diagnostic] = field(default_factory=list)


def parse_math(source: str, dialect: Optional[str] = None,
               table: Optional[SymbolTable] = None) -> ParsedMath:
    """normalize -> classify -> tokenize -> parse, spans in source coordinates."""
    table = table or default_table()
    norm = normalize_unicode(source)
    if dialect is None:
        dialect = classify_dialect(source)
    tokens, tok_diags = tokenize(norm.text, table)
    expr, parse_diags = parse_expression(tokens, dialect, table)
    diags = list(norm.diagnostics)
    for diag in tok_diags + parse_diags:
        diags.append(Diagnostic(norm.original_span(diag.span), diag.severity,
                                diag.code, diag.message))
    return ParsedMath(source=source, expr=expr, dialect=dialect, diagnostics=diags)


__all__ = [
    "LATEX",
    "SPACE_MATH",
    "LatexParser",
    "NormalizedSource",
    "ParsedMath",
    "SpaceMathParser",
    "SymbolTable",
    "Token",
    "ast",
    "classify_dialect",
    "default_table",
    "load_table",
    "normalize_unicode",
    "parse_expression",
    "parse_latex_subset",
    "parse_math",
    "parse_space_math",
    "tokenize",
]
