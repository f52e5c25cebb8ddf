"""Span-anchored diagnostics shared by every stage of the toolchain.

Nothing in this package hard-fails on malformed input: parsers, renderers
and the calculator always produce a result plus a list of ``Diagnostic``
values.  The set of diagnostic codes is closed and documented here so that
downstream tools can match on codes reliably.
"""

from __future__ import annotations

from dataclasses import dataclass

INFO = "info"
WARNING = "warning"
ERROR = "error"

SEVERITIES = (INFO, WARNING, ERROR)

#: The complete, closed set of diagnostic codes this package emits.
#: New conditions must be registered here first.
CODES = frozenset({
    # unicode normalizer
    "exotic-character",
    # tokenizer
    "unknown-token",
    "unclosed-quote",
    # expression parsing (both dialects)
    "unclosed-bracket",
    "unclosed-group",
    "mismatched-bracket",
    "stray-close",
    "unexpected-token",
    "missing-operand",
    "ragged-matrix",
    "empty-expression",
    "nesting-too-deep",
    "unsupported-latex",
    # document parsing
    "lone-dollar",
    "unclosed-math",
    "unclosed-placeholder",
    "nested-placeholder",
    "unknown-fence",
    "unclosed-fence",
    "empty-derivation",
    "malformed-answer",
    "bad-plot",
    # calculator and placeholder rendering
    "unbound-variable",
    "division-by-zero",
    "unsupported-operation",
    "non-integer-exponent",
    "budget-exceeded",
    "empty-plot",
    "calc-error",
})


@dataclass(frozen=True)
class Span:
    """Half-open byte range ``[start, end)`` with a 1-based line number."""

    start: int
    end: int
    line: int = 1

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    severity: str
    code: str
    message: str

    def __post_init__(self) -> None:
        if self.severity not in SEVERITIES:
            raise ValueError(f"unknown severity {self.severity!r}")
        if self.code not in CODES:
            raise ValueError(f"unregistered diagnostic code {self.code!r}")
        if not self.message:
            raise ValueError("diagnostic message must be non-empty")


def info(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic(span, INFO, code, message)


def warning(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic(span, WARNING, code, message)


def error(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic(span, ERROR, code, message)


def line_of(text: str, offset: int) -> int:
    """1-based line number of a byte offset in ``text``."""
    return 1 + text.count("\n", 0, min(offset, len(text)))


def col_of(text: str, offset: int) -> int:
    """1-based column of a byte offset in ``text``."""
    offset = min(offset, len(text))
    nl = text.rfind("\n", 0, offset)
    return offset - nl
