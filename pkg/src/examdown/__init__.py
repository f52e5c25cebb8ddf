"""examdown: typed mathematics examination answers.

An error-tolerant Space Math / LaTeX-subset expression parser with
semantic disambiguation, an extended-Markdown answer-document format with
derivation blocks, an embedded exact calculator and plots, deterministic
rendering, a CLI, and a stateless preview service.
"""

__version__ = "0.1.0"

from examdown.diagnostics import Diagnostic, Span
from examdown.document import AnswerManifest, Document, extract_answers, parse_document
from examdown.docrender import render_document_html
from examdown.mathexpr import classify_dialect, parse_math
from examdown.mathrender import render_latex, render_presentation, render_spacemath

__all__ = [
    "AnswerManifest",
    "Diagnostic",
    "Document",
    "Span",
    "__version__",
    "classify_dialect",
    "extract_answers",
    "parse_document",
    "parse_math",
    "render_document_html",
    "render_latex",
    "render_presentation",
    "render_spacemath",
]
