"""The extended-Markdown answer document: parsing and answer extraction.

Recognized structure: ``#`` headings, ``-``/``1.`` lists, ``*em*`` and
``**strong**``, backtick code (always verbatim; math never uses backticks),
``$...$`` / ``\\(...\\)`` inline and ``$$...$$`` / ``\\[...\\]`` display
math, ``:::derivation`` fences, ``{@expr@}`` calculator and plot
placeholders, and ``answer:`` lines.  Parsing is total: every input yields
a Document whose block spans tile the source exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from examdown.calcengine import EvalError, eval_exact
from examdown.diagnostics import Diagnostic, Span, info, line_of, warning
from examdown.mathexpr import ast, parse_math
from examdown.mathexpr.symbols import SymbolTable, default_table

# ----------------------------------------------------------------------
# document model


@dataclass
class Text:
    text: str


@dataclass
class Emphasis:
    inlines: List["Inline"]


@dataclass
class Strong:
    inlines: List["Inline"]


@dataclass
class CodeSpan:
    text: str


@dataclass
class InlineMath:
    expr: ast.Expr
    dialect: str


@dataclass
class CalcPlaceholder:
    expr: ast.Expr
    raw: str


@dataclass
class PlotPlaceholder:
    expr: ast.Expr
    binder: str
    lower: Fraction
    upper: Fraction
    raw: str


Inline = (Text, Emphasis, Strong, CodeSpan, InlineMath, CalcPlaceholder, PlotPlaceholder)


@dataclass
class Heading:
    level: int
    inlines: List[object]
    span: Span = field(default=Span(0, 0))


@dataclass
class Paragraph:
    inlines: List[object]
    span: Span = field(default=Span(0, 0))


@dataclass
class ListItemGroup:
    ordered: bool
    items: List[List[object]]
    span: Span = field(default=Span(0, 0))


@dataclass
class CodeFence:
    text: str
    span: Span = field(default=Span(0, 0))


@dataclass
class DisplayMath:
    expr: ast.Expr
    dialect: str
    span: Span = field(default=Span(0, 0))


@dataclass
class DerivRow:
    relator: Optional[str]
    expr: ast.Expr
    justification: Optional[str]


@dataclass
class Derivation:
    rows: List[DerivRow]
    span: Span = field(default=Span(0, 0))


@dataclass
class AnswerLine:
    label: Optional[str]
    expr: ast.Expr
    malformed: bool = False
    line: int = 1
    span: Span = field(default=Span(0, 0))


Block = (Heading, Paragraph, ListItemGroup, CodeFence, DisplayMath, Derivation, AnswerLine)


@dataclass
class Document:
    blocks: List[object]
    source: str
    diagnostics: List[Diagnostic]


@dataclass
class ManifestEntry:
    index: int
    label: Optional[str]
    spacemath: str
    latex: str
    span: Span


@dataclass
class AnswerManifest:
    entries: List[ManifestEntry]

    def to_json_obj(self) -> List[dict]:
        return [
            {"index": e.index, "label": e.label, "spacemath": e.spacemath,
             "latex": e.latex, "line": e.span.line}
            for e in self.entries
        ]


# ----------------------------------------------------------------------
# parsing

_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*)$")
_ANSWER_RE = re.compile(r"^\s*answer(?:\[([^\]]*)\])?:\s*(.*)$")
_LIST_RE = re.compile(r"^\s*(?:([-*])|(\d+[.)]))\s+(.*)$")
_FENCE_RE = re.compile(r"^```")
_EXT_FENCE_RE = re.compile(r"^:::\s*(\S*)\s*$")
_DERIV_ROW_RE = re.compile(r"^\s*(<=>|=>|<=|=|<|>)?\s*(.*)$")

_DERIV_RELATORS = ("<=>", "=>", "<=", "=", "<", ">")


def parse_document(source: str, table: Optional[SymbolTable] = None) -> Document:
    return _DocParser(source, table or default_table()).parse()


class _DocParser:
    def __init__(self, source: str, table: SymbolTable):
        self.source = source
        self.table = table
        self.diagnostics: List[Diagnostic] = []
        self.lines: List[Tuple[int, str]] = []
        offset = 0
        for raw_line in source.splitlines(keepends=True):
            self.lines.append((offset, raw_line.rstrip("\n")))
            offset += len(raw_line)

    # -- diagnostics helpers -------------------------------------------

    def diag(self, make, offset_start: int, offset_end: int, code: str, message: str) -> None:
        span = Span(offset_start, offset_end, line_of(self.source, offset_start))
        self.diagnostics.append(make(span, code, message))

    def _math(self, start: int, end: int) -> Tuple[ast.Expr, str]:
        segment = self.source[start:end]
        parsed = parse_math(segment, table=self.table)
        for d in parsed.diagnostics:
            span = Span(d.span.start + start, d.span.end + start,
                        line_of(self.source, d.span.start + start))
            self.diagnostics.append(Diagnostic(span, d.severity, d.code, d.message))
        return parsed.expr, parsed.dialect

    # -- block scanning -------------------------------------------------

    def parse(self) -> Document:
        blocks: List[object] = []
        firsts: List[int] = []
        li = 0
        n = len(self.lines)
        while li < n:
            offset, line = self.lines[li]
            stripped = line.strip()
            if not stripped:
                li += 1
                continue
            first = offset
            if _FENCE_RE.match(stripped):
                block, li = self._code_fence(li)
            elif stripped.startswith(":::"):
                m = _EXT_FENCE_RE.match(stripped)
                name = m.group(1) if m else ""
                if name == "derivation":
                    block, li = self._derivation(li)
                else:
                    self.diag(warning, offset, offset + len(line), "unknown-fence",
                              f"unknown fence {stripped!r}; treated as a paragraph")
                    block, li = self._paragraph(li, force_first_line=True)
            elif _HEADING_RE.match(stripped):
                m = _HEADING_RE.match(stripped)
                inls = self._inlines(offset + line.find(m.group(2), len(m.group(1))),
                                     offset + len(line))
                block = Heading(len(m.group(1)), inls)
                li += 1
            elif _ANSWER_RE.match(line):
                block = self._answer(offset, line)
                li += 1
            elif stripped.startswith("$$") or stripped.startswith("\\["):
                block, li = self._display_math(li)
            elif _LIST_RE.match(line):
                block, li = self._list_group(li)
            else:
                block, li = self._paragraph(li)
            blocks.append(block)
            firsts.append(first)

        if not blocks and self.source:
            blocks.append(Paragraph([]))
            firsts.append(0)

        # Block spans tile the source: each block runs to the start of the
        # next one; the first starts at 0 and the last ends at the end.
        for i, block in enumerate(blocks):
            start = 0 if i == 0 else firsts[i]
            end = firsts[i + 1] if i + 1 < len(blocks) else len(self.source)
            block.span = Span(start, end, line_of(self.source, firsts[i]))
        return Document(blocks=blocks, source=self.source, diagnostics=self.diagnostics)

    def _block_starts_here(self, line: str) -> bool:
        stripped = line.strip()
        if not stripped:
            return True
        return bool(_FENCE_RE.match(stripped) or stripped.startswith(":::")
                    or _HEADING_RE.match(stripped) or _ANSWER_RE.match(line)
                    or stripped.startswith("$$") or stripped.startswith("\\[")
                    or _LIST_RE.match(line))

    def _paragraph(self, li: int, force_first_line: bool = False) -> Tuple[Paragraph, int]:
        start_offset = self.lines[li][0]
        end_offset = start_offset + len(self.lines[li][1])
        li += 1
        while li < len(self.lines) and not self._block_starts_here(self.lines[li][1]):
            end_offset = self.lines[li][0] + len(self.lines[li][1])
            li += 1
        return Paragraph(self._inlines(start_offset, end_offset)), li

    def _code_fence(self, li: int) -> Tuple[CodeFence, int]:
        open_offset, open_line = self.lines[li]
        li += 1
        body: List[str] = []
        while li < len(self.lines):
            _, line = self.lines[li]
            if line.strip().startswith("```"):
                li += 1
                break
            body.append(line)
            li += 1
        else:
            self.diag(warning, open_offset, open_offset + len(open_line),
                      "unclosed-fence", "code fence never closes; runs to end of document")
        return CodeFence("\n".join(body)), li

    def _derivation(self, li: int) -> Tuple[Derivation, int]:
        open_offset, open_line = self.lines[li]
        li += 1
        rows: List[DerivRow] = []
        closed = False
        while li < len(self.lines):
            offset, line = self.lines[li]
            if line.strip() == ":::":
                li += 1
                closed = True
                break
            if line.strip():
                rows.append(self._deriv_row(offset, line))
            li += 1
        if not closed:
            self.diag(warning, open_offset, open_offset + len(open_line),
                      "unclosed-fence", "derivation fence never closes")
        if not rows:
            self.diag(warning, open_offset, open_offset + len(open_line),
                      "empty-derivation", "derivation block has no rows")
            rows.append(DerivRow(None, ast.ErrorNode(""), None))
        return Derivation(rows), li

    def _deriv_row(self, offset: int, line: str) -> DerivRow:
        m = _DERIV_ROW_RE.match(line)
        relator = m.group(1)
        rest = m.group(2)
        rest_offset = offset + m.start(2)
        justification: Optional[str] = None
        if "|" in rest:
            expr_text, justification = rest.split("|", 1)
            justification = justification.strip() or None
        else:
            expr_text = rest
        expr, _ = self._math(rest_offset, rest_offset + len(expr_text.rstrip()))
        return DerivRow(relator, expr, justification)

    def _answer(self, offset: int, line: str) -> AnswerLine:
        m = _ANSWER_RE.match(line)
        label = m.group(1)
        rest = m.group(2)
        rest_offset = offset + m.start(2)
        malformed = False
        if not rest.strip():
            expr: ast.Expr = ast.ErrorNode("")
            malformed = True
        else:
            expr, _ = self._math(rest_offset, rest_offset + len(rest.rstrip()))
            malformed = isinstance(expr, ast.ErrorNode)
        if malformed:
            self.diag(warning, offset, offset + len(line), "malformed-answer",
                      "answer line has no parseable expression")
        return AnswerLine(label=label, expr=expr, malformed=malformed,
                          line=line_of(self.source, offset))

    def _display_math(self, li: int) -> Tuple[DisplayMath, int]:
        offset, line = self.lines[li]
        stripped = line.strip()
        opener = "$$" if stripped.startswith("$$") else "\\["
        closer = "$$" if opener == "$$" else "\\]"
        content_start = offset + line.find(opener) + 2
        block_end = len(self.source)
        scan_limit = li + 1
        while scan_limit < len(self.lines):
            if not self.lines[scan_limit][1].strip():
                block_end = self.lines[scan_limit][0]
                break
            scan_limit += 1
        close_at = self.source.find(closer, content_start, block_end)
        close_at = -1 if close_at == -1 else close_at - content_start
        if close_at == -1:
            # run to the end of the block (next blank line) with a warning
            self.diag(warning, offset, offset + len(line), "unclosed-math",
                      f"display math opened with {opener!r} never closes")
            expr, dialect = self._math(content_start, block_end)
            return DisplayMath(expr, dialect), scan_limit
        content_end = content_start + close_at
        expr, dialect = self._math(content_start, content_end)
        # advance past the line containing the closer
        close_abs = content_end + 2
        while li < len(self.lines) and self.lines[li][0] + len(self.lines[li][1]) < close_abs:
            li += 1
        return DisplayMath(expr, dialect), li + 1

    def _list_group(self, li: int) -> Tuple[ListItemGroup, int]:
        first = _LIST_RE.match(self.lines[li][1])
        ordered = first.group(2) is not None
        items: List[List[object]] = []
        while li < len(self.lines):
            offset, line = self.lines[li]
            m = _LIST_RE.match(line)
            if not m or (m.group(2) is not None) != ordered:
                break
            items.append(self._inlines(offset + m.start(3), offset + len(line)))
            li += 1
        return ListItemGroup(ordered, items), li

    # -- inline scanning -------------------------------------------------

    def _inlines(self, start: int, end: int) -> List[object]:
        src = self.source
        out: List[object] = []
        text_start = start
        i = start

        def flush(upto: int) -> None:
            nonlocal text_start
            if upto > text_start:
                out.append(Text(src[text_start:upto]))

        while i < end:
            ch = src[i]
            if ch == "`":
                close = src.find("`", i + 1, end)
                if close == -1:
                    i += 1
                    continue
                flush(i)
                out.append(CodeSpan(src[i + 1:close]))
                i = close + 1
                text_start = i
                continue
            if src.startswith("{@", i):
                flush(i)
                inline, i = self._placeholder(i, end)
                out.append(inline)
                text_start = i
                continue
            if ch == "$":
                eol = src.find("\n", i + 1, end)
                eol = end if eol == -1 else eol
                close = src.find("$", i + 1, eol)
                if close == -1:
                    self.diag(info, i, i + 1, "lone-dollar",
                              "'$' without a closing partner on the same line is literal")
                    i += 1
                    continue
                flush(i)
                self._math_span(out, i + 1, close)
                i = close + 1
                text_start = i
                continue
            if src.startswith("\\(", i) or src.startswith("\\[", i):
                opener = src[i:i + 2]
                closer = "\\)" if opener == "\\(" else "\\]"
                close = src.find(closer, i + 2, end)
                if close == -1:
                    eol = src.find("\n", i + 2, end)
                    eol = end if eol == -1 else eol
                    self.diag(warning, i, i + 2, "unclosed-math",
                              f"math opened with {opener!r} never closes")
                    flush(i)
                    self._math_span(out, i + 2, eol)
                    i = eol
                    text_start = i
                    continue
                flush(i)
                self._math_span(out, i + 2, close)
                i = close + 2
                text_start = i
                continue
            if src.startswith("**", i):
                close = src.find("**", i + 2, end)
                if (close != -1 and close > i + 2
                        and not src[i + 2].isspace() and not src[close - 1].isspace()):
                    flush(i)
                    out.append(Strong(self._inlines(i + 2, close)))
                    i = close + 2
                    text_start = i
                    continue
                i += 2
                continue
            if ch == "*":
                eol = src.find("\n", i + 1, end)
                eol = end if eol == -1 else eol
                close = src.find("*", i + 1, eol)
                if (close != -1 and close > i + 1
                        and not src[i + 1].isspace() and not src[close - 1].isspace()):
                    flush(i)
                    out.append(Emphasis(self._inlines(i + 1, close)))
                    i = close + 1
                    text_start = i
                    continue
                i += 1
                continue
            i += 1
        flush(end)
        return out

    def _math_span(self, out: List[object], start: int, end: int) -> None:
        """Math between delimiters; embedded placeholders split the span."""
        src = self.source
        i = start
        seg_start = start
        while i < end:
            if src.startswith("{@", i):
                if i > seg_start and src[seg_start:i].strip():
                    expr, dialect = self._math(seg_start, i)
                    out.append(InlineMath(expr, dialect))
                inline, i = self._placeholder(i, end)
                out.append(inline)
                seg_start = i
                continue
            i += 1
        if end > seg_start and src[seg_start:end].strip():
            expr, dialect = self._math(seg_start, end)
            out.append(InlineMath(expr, dialect))
        elif seg_start == start:
            # entirely empty math span: keep a placeholder error node
            expr, dialect = self._math(start, end)
            out.append(InlineMath(expr, dialect))

    def _placeholder(self, i: int, end: int) -> Tuple[object, int]:
        src = self.source
        j = i + 2
        depth = 1
        nested = False
        close_at = None
        while j < end:
            if src.startswith("{@", j):
                depth += 1
                nested = True
                j += 2
                continue
            if src.startswith("@}", j):
                depth -= 1
                if depth == 0:
                    close_at = j
                    break
                j += 2
                continue
            if src[j] == "\n":
                break
            j += 1
        if nested:
            self.diag(warning, i, min(j + 2, end), "nested-placeholder",
                      "placeholders cannot nest; outer placeholder wins")
        if close_at is None:
            eol = src.find("\n", i, end)
            eol = end if eol == -1 else eol
            self.diag(warning, i, eol, "unclosed-placeholder",
                      "'{@' never closes; placeholder runs to end of line")
            interior = (i + 2, eol)
            after = eol
        else:
            interior = (i + 2, close_at)
            after = close_at + 2
        raw = src[i:after]
        expr, _ = self._math(*interior)
        plot = self._as_plot(expr, raw, i, after)
        if plot is not None:
            return plot, after
        return CalcPlaceholder(expr, raw), after

    def _as_plot(self, expr: ast.Expr, raw: str,
                 start: int, end: int) -> Optional[PlotPlaceholder]:
        if not (isinstance(expr, ast.Apply) and isinstance(expr.head, ast.Ident)
                and expr.head.name == "plot"):
            return None
        ok_shape = (
            len(expr.args) == 2
            and isinstance(expr.args[1], ast.Bracketed)
            and expr.args[1].style == "square"
            and isinstance(expr.args[1].inner, ast.Sequence)
            and len(expr.args[1].inner.items) == 3
            and isinstance(expr.args[1].inner.items[0], (ast.Ident, ast.Greek))
        )
        if not ok_shape:
            self.diag(warning, start, end, "bad-plot",
                      f"plot placeholder must look like plot(expr,[x,a,b]): {raw!r}")
            return None
        binder = expr.args[1].inner.items[0].name
        try:
            lo = eval_exact(expr.args[1].inner.items[1], {})
            hi = eval_exact(expr.args[1].inner.items[2], {})
            lower, upper = lo.value, hi.value
        except (EvalError, AttributeError):
            self.diag(warning, start, end, "bad-plot",
                      f"plot bounds must be constant rationals: {raw!r}")
            return None
        if not lower < upper:
            self.diag(warning, start, end, "bad-plot",
                      f"plot range must satisfy lower < upper: {raw!r}")
            return None
        return PlotPlaceholder(expr.args[0], binder, lower, upper, raw)


# ----------------------------------------------------------------------
# answer extraction

def extract_answers(doc: Document) -> AnswerManifest:
    from examdown.mathrender import render_latex, render_spacemath

    entries: List[ManifestEntry] = []
    for block in doc.blocks:
        if isinstance(block, AnswerLine):
            entries.append(ManifestEntry(
                index=len(entries) + 1,
                label=block.label,
                spacemath=render_spacemath(block.expr),
                latex=render_latex(block.expr),
                span=Span(block.span.start, block.span.end, block.line),
            ))
    return AnswerManifest(entries)
