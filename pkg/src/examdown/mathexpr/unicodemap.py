"""Unicode normalization: canonical composition plus math-symbol mapping.

Students type unicode; the parser works over an ASCII-spelling normal form.
Every normalized character remembers the original span it came from so
diagnostics can point back at what was actually typed.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import List, Tuple

from examdown.diagnostics import Diagnostic, Span, info, line_of

#: Characters mapped to names from the symbol table.  Emitted with a space
#: on either side when the neighbour is alphanumeric, so "∀n∈ℕ" becomes
#: "AA n in NN" rather than an unlexable word.
_NAME_MAP = {
    "π": "pi", "∞": "oo", "∀": "AA", "∃": "EE",
    "∈": "in", "∪": "uu", "∩": "nn",
    "√": "sqrt", "∑": "sum", "∏": "prod", "∫": "int",
    "ℕ": "NN", "ℤ": "ZZ", "ℚ": "QQ", "ℝ": "RR", "ℂ": "CC",
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "ε": "epsilon",
    "ζ": "zeta", "η": "eta", "θ": "theta", "ι": "iota", "κ": "kappa",
    "λ": "lambda", "μ": "mu", "ν": "nu", "ξ": "xi", "ρ": "rho",
    "σ": "sigma", "τ": "tau", "υ": "upsilon", "φ": "phi", "χ": "chi",
    "ψ": "psi", "ω": "omega",
    "Γ": "Gamma", "Δ": "Delta", "Θ": "Theta", "Λ": "Lambda", "Ξ": "Xi",
    "Π": "Pi", "Σ": "Sigma", "Φ": "Phi", "Ψ": "Psi", "Ω": "Omega",
}

#: Characters spliced in directly as operator spellings.
_OP_MAP = {
    "×": "*", "⋅": "*", "·": "*", "÷": "/", "−": "-",
    "≤": "<=", "≥": ">=", "≠": "!=",
    "→": "->", "⇒": "=>", "⇔": "<=>",
}

_SUPERSCRIPT = {
    "⁰": "0", "¹": "1", "²": "2", "³": "3", "⁴": "4",
    "⁵": "5", "⁶": "6", "⁷": "7", "⁸": "8", "⁹": "9",
    "⁺": "+", "⁻": "-",
}


@dataclass
class NormalizedSource:
    """Normalized text plus a per-character map back to original offsets."""

    source: str
    text: str
    diagnostics: List[Diagnostic]
    _map: List[Tuple[int, int]] = field(repr=False, default_factory=list)

    def to_original(self, start: int, end: int) -> Tuple[int, int]:
        """Map a span in normalized coordinates back to the original text."""
        if not self._map:
            return (0, 0)
        start = max(0, min(start, len(self._map)))
        end = max(start, min(end, len(self._map)))
        ostart = self._map[start][0] if start < len(self._map) else self._map[-1][1]
        oend = self._map[end - 1][1] if end > start else ostart
        return (ostart, max(ostart, oend))

    def original_span(self, span: Span) -> Span:
        ostart, oend = self.to_original(span.start, span.end)
        return Span(ostart, oend, line_of(self.source, ostart))


def _is_word_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def normalize_unicode(source: str) -> NormalizedSource:
    """Total function: never fails, unmappable characters pass through."""
    out: List[str] = []
    cmap: List[Tuple[int, int]] = []
    diags: List[Diagnostic] = []

    def emit(piece: str, ostart: int, oend: int) -> None:
        for ch in piece:
            out.append(ch)
            cmap.append((ostart, oend))

    def emit_name(name: str, ostart: int, oend: int) -> None:
        if out and _is_word_char(out[-1]):
            emit(" ", ostart, ostart)
        emit(name, ostart, oend)
        if oend < len(source) and _is_word_char(source[oend]):
            emit(" ", oend, oend)

    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch in _SUPERSCRIPT:
            j = i
            while j < n and source[j] in _SUPERSCRIPT:
                j += 1
            emit("^(", i, i)
            for k in range(i, j):
                emit(_SUPERSCRIPT[source[k]], k, k + 1)
            emit(")", j, j)
            i = j
            continue
        # Compose combining sequences (NFC) one starter at a time so the
        # offset map stays exact.
        j = i + 1
        while j < n and unicodedata.combining(source[j]):
            j += 1
        for c in unicodedata.normalize("NFC", source[i:j]):
            if c in _OP_MAP:
                emit(_OP_MAP[c], i, j)
            elif c in _NAME_MAP:
                emit_name(_NAME_MAP[c], i, j)
            elif ord(c) < 128:
                emit(c, i, j)
            else:
                emit(c, i, j)
                diags.append(info(
                    Span(i, j, line_of(source, i)),
                    "exotic-character",
                    f"character {c!r} has no ASCII spelling and is passed through",
                ))
        i = j

    return NormalizedSource(source=source, text="".join(out), diagnostics=diags, _map=cmap)
