"""Stateless preview service: POST /v1/render and GET /v1/health.

Every response is computed purely from the request body; there is no
session state, so identical requests always produce identical responses.
Responses are JSON with sorted keys and compact separators, which makes
them byte-stable for golden tests (after masking ``elapsed_ms``).
"""

from __future__ import annotations

import json
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, List, Optional, Tuple

from examdown import __version__
from examdown.calcengine import Calculator
from examdown.diagnostics import Diagnostic, col_of
from examdown.docrender import render_document_html
from examdown.document import extract_answers, parse_document
from examdown.mathexpr.symbols import SymbolTable, default_table

MAX_BODY_BYTES = 1 << 20  # 1 MiB
WANT_FIELDS = ("html", "diagnostics", "answers")


def _diag_obj(source: str, diag: Diagnostic) -> Dict[str, object]:
    return {
        "line": diag.span.line,
        "col": col_of(source, diag.span.start),
        "severity": diag.severity,
        "code": diag.code,
        "message": diag.message,
    }


def handle_render(payload: object, table: Optional[SymbolTable] = None,
                  calc_allowed: bool = True) -> Tuple[int, Dict[str, object]]:
    """Pure request handler shared by the HTTP layer and the test suite."""
    started = time.perf_counter()
    if not isinstance(payload, dict):
        return 400, {"error": "invalid-request", "detail": "body must be a JSON object"}
    source = payload.get("source")
    if not isinstance(source, str):
        return 400, {"error": "invalid-request", "detail": "'source' must be a string"}
    want = payload.get("want", ["html", "diagnostics"])
    if (not isinstance(want, list) or not want
            or any(w not in WANT_FIELDS for w in want)):
        return 400, {"error": "invalid-request",
                     "detail": "'want' must be a non-empty subset of "
                               f"{list(WANT_FIELDS)}"}
    calc_enabled = payload.get("calc_enabled", True)
    if not isinstance(calc_enabled, bool):
        return 400, {"error": "invalid-request", "detail": "'calc_enabled' must be a boolean"}

    doc = parse_document(source, table or default_table())
    diagnostics: List[Diagnostic] = list(doc.diagnostics)
    response: Dict[str, object] = {}
    if "html" in want:
        calc = Calculator() if (calc_enabled and calc_allowed) else None
        html, render_diags = render_document_html(doc, calc)
        diagnostics.extend(render_diags)
        response["html"] = html
    if "answers" in want:
        response["answers"] = extract_answers(doc).to_json_obj()
    response["diagnostics"] = [_diag_obj(source, d) for d in diagnostics]
    response["elapsed_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    return 200, response


def encode_response(obj: Dict[str, object]) -> bytes:
    # errors="replace" keeps the wire valid even for lone surrogates that
    # arrive via JSON escape sequences in hostile requests.
    return json.dumps(obj, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")).encode("utf-8", "replace")


class PreviewHandler(BaseHTTPRequestHandler):
    server_version = "examdown-previewd/" + __version__
    protocol_version = "HTTP/1.1"

    # the server instance carries .table and .calc_allowed

    def log_message(self, format: str, *args: object) -> None:
        pass  # quiet by default; this service runs under editors and tests

    def _cors_origin(self) -> Optional[str]:
        origin = self.headers.get("Origin")
        if origin and (origin.startswith("http://localhost")
                       or origin.startswith("http://127.0.0.1")):
            return origin
        return None

    def _send_json(self, status: int, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        origin = self._cors_origin()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Vary", "Origin")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        origin = self._cors_origin()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Allow-Methods", "POST, GET, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Vary", "Origin")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        if self.path == "/v1/health":
            body = encode_response({"status": "ok", "version": __version__})
            self._send_json(200, body)
            return
        self._send_json(404, encode_response({"error": "not-found"}))

    def do_POST(self) -> None:
        if self.path != "/v1/render":
            self._send_json(404, encode_response({"error": "not-found"}))
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            self._send_json(400, encode_response({"error": "invalid-request",
                                                  "detail": "bad Content-Length"}))
            return
        if length > MAX_BODY_BYTES:
            # Drain the body so the client can still read the error reply.
            remaining = length
            while remaining > 0:
                chunk = self.rfile.read(min(65536, remaining))
                if not chunk:
                    break
                remaining -= len(chunk)
            self.close_connection = True
            self._send_json(413, encode_response({"error": "payload-too-large",
                                                  "limit": MAX_BODY_BYTES}))
            return
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            self._send_json(400, encode_response({"error": "malformed-json",
                                                  "detail": str(err)}))
            return
        try:
            status, obj = handle_render(payload, self.server.table,
                                        self.server.calc_allowed)
        except Exception as err:  # pragma: no cover - fuzzing drives this to zero
            self._send_json(500, encode_response({"error": "internal",
                                                  "detail": repr(err)}))
            return
        self._send_json(status, encode_response(obj))


class PreviewServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: Tuple[str, int],
                 table: Optional[SymbolTable] = None,
                 calc_allowed: bool = True):
        super().__init__(address, PreviewHandler)
        self.table = table or default_table()
        self.calc_allowed = calc_allowed


def make_server(port: int = 8787, host: str = "127.0.0.1",
                table: Optional[SymbolTable] = None,
                calc_enabled: bool = True) -> PreviewServer:
    return PreviewServer((host, port), table=table, calc_allowed=calc_enabled)


def serve(port: int = 8787, host: str = "127.0.0.1",
          table: Optional[SymbolTable] = None, calc_enabled: bool = True) -> None:
    server = make_server(port=port, host=host, table=table, calc_enabled=calc_enabled)
    print(f"previewd listening on http://{host}:{server.server_address[1]}/ "
          f"(calculator {'on' if calc_enabled else 'off'})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
