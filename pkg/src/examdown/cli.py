"""Command-line front door: render, check, answers, serve.

Exit codes: 0 success (for ``check``: no error-severity diagnostics),
1 error-severity diagnostics found, 2 unreadable input, 64 bad flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from examdown.calcengine import Calculator
from examdown.diagnostics import ERROR, Diagnostic, col_of
from examdown.docrender import (
    document_to_json_obj, render_document_html, render_document_latex,
)
from examdown.document import extract_answers, parse_document
from examdown.mathexpr.symbols import SymbolTable, default_table, load_table

FORMATS = ("html", "latex", "json-ast")


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that exits 64 on usage errors, as batch tools expect."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="examdown",
                             description="Typed mathematics answer documents")
    parser.add_argument("--symbols", metavar="TABLE",
                        help="symbol-name table file (or $EXAMDOWN_SYMBOLS)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized helpers (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", parents=[], help="render a document")
    p_render.add_argument("--format", choices=FORMATS, default="html")
    p_render.add_argument("--no-calc", action="store_true",
                          help="calculator-free rendering")
    p_render.add_argument("input", nargs="?", help="input file (default stdin)")

    p_check = sub.add_parser("check", help="list diagnostics")
    p_check.add_argument("input", nargs="?")

    p_answers = sub.add_parser("answers", help="extract the answer manifest")
    p_answers.add_argument("input", nargs="?")

    p_serve = sub.add_parser("serve", help="run the preview service")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--no-calc", action="store_true",
                         help="disable the calculator for every request")
    return parser


def _load_symbols(args: argparse.Namespace) -> Optional[SymbolTable]:
    path = args.symbols or os.environ.get("EXAMDOWN_SYMBOLS")
    if not path:
        return default_table()
    return load_table(path)


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _diag_line(source: str, diag: Diagnostic) -> str:
    col = col_of(source, diag.span.start)
    return f"{diag.span.line}:{col} {diag.severity} {diag.code} {diag.message}"


def run(argv: List[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 64

    try:
        table = _load_symbols(args)
    except OSError as err:
        print(f"examdown: cannot read symbol table: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"examdown: bad symbol table: {err}", file=sys.stderr)
        return 2

    if args.command == "serve":
        from examdown.previewd import serve
        if args.port < 1 or args.port > 65535:
            print("examdown: port must be in 1..65535", file=sys.stderr)
            return 64
        serve(port=args.port, calc_enabled=not args.no_calc, table=table)
        return 0

    try:
        source = _read_input(args.input)
    except OSError as err:
        print(f"examdown: cannot read input: {err}", file=sys.stderr)
        return 2

    doc = parse_document(source, table)

    if args.command == "render":
        calc = None if args.no_calc else Calculator()
        if args.format == "html":
            html, _ = render_document_html(doc, calc)
            sys.stdout.write(html)
        elif args.format == "latex":
            sys.stdout.write(render_document_latex(doc, calc))
        else:
            obj = document_to_json_obj(doc)
            sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")
        return 0

    if args.command == "check":
        _, render_diags = render_document_html(doc, Calculator())
        diags = doc.diagnostics + render_diags
        for diag in diags:
            print(_diag_line(source, diag))
        return 1 if any(d.severity == ERROR for d in diags) else 0

    if args.command == "answers":
        manifest = extract_answers(doc)
        sys.stdout.write(json.dumps(manifest.to_json_obj(), ensure_ascii=False) + "\n")
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 64


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
