"""Symbol-name table: the audited list of names the tokenizer recognises.

The table ships as a data file (``data/symbols.tsv``) so examiners can see
exactly which names parse; a custom table can be supplied per call or via
the ``--symbols`` CLI flag / ``EXAMDOWN_SYMBOLS`` environment variable.
"""

from __future__ import annotations

from importlib import resources
from typing import Dict, Iterable, List, NamedTuple, Optional

CATEGORIES = ("greek", "const", "set", "func", "bigop", "radical", "mulop", "rel", "op")


class SymbolEntry(NamedTuple):
    name: str
    category: str
    latex: str


class SymbolTable:
    def __init__(self, entries: Iterable[SymbolEntry]):
        self._entries: Dict[str, SymbolEntry] = {}
        self._by_first: Dict[str, List[str]] = {}
        self._by_latex: Dict[str, SymbolEntry] = {}
        for entry in entries:
            if entry.category not in CATEGORIES:
                raise ValueError(f"unknown symbol category {entry.category!r} for {entry.name!r}")
            self._entries[entry.name] = entry
            self._by_first.setdefault(entry.name[0], []).append(entry.name)
            # First table entry wins for a shared LaTeX spelling (e.g. \sqrt).
            self._by_latex.setdefault(entry.latex, entry)
        for names in self._by_first.values():
            names.sort(key=len, reverse=True)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def lookup(self, name: str) -> Optional[SymbolEntry]:
        return self._entries.get(name)

    def category(self, name: str) -> Optional[str]:
        entry = self._entries.get(name)
        return entry.category if entry else None

    def latex_hint(self, name: str) -> Optional[str]:
        entry = self._entries.get(name)
        return entry.latex if entry else None

    def from_latex(self, command: str) -> Optional[SymbolEntry]:
        """Entry whose render hint is exactly this LaTeX command, if any."""
        return self._by_latex.get(command)

    def match_longest(self, text: str, pos: int) -> Optional[str]:
        """Longest table name starting at ``text[pos]``, or None."""
        for name in self._by_first.get(text[pos], ()):
            if text.startswith(name, pos):
                return name
        return None

    def names(self) -> List[str]:
        return sorted(self._entries)


def parse_table(lines: Iterable[str]) -> SymbolTable:
    entries = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"symbol table line {lineno}: expected 3 tab-separated fields")
        name, category, hint = (p.strip() for p in parts)
        if not name:
            raise ValueError(f"symbol table line {lineno}: empty name")
        entries.append(SymbolEntry(name, category, hint))
    return SymbolTable(entries)


def load_table(path: str) -> SymbolTable:
    with open(path, encoding="utf-8") as handle:
        return parse_table(handle)


_DEFAULT: Optional[SymbolTable] = None


def default_table() -> SymbolTable:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("examdown").joinpath("data/symbols.tsv").read_text("utf-8")
        _DEFAULT = parse_table(text.splitlines())
    return _DEFAULT
