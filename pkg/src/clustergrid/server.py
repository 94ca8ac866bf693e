"""HTTP host for the triage workflow.

Serves the run output tree read-only, an optional static UI bundle, and the
one mutable surface: GET/PUT /api/decisions backed by <run dir>/decisions.json
(written atomically, last writer wins). At most one candidate may hold status
"selected"; a PUT violating that is rejected with 409.
"""

from __future__ import annotations

import json
import os
import tempfile
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

DECISIONS_SCHEMA_VERSION = 1
DECISION_STATUSES = ("ruled_out", "shortlisted", "selected")

_CONTENT_TYPES = {
    ".css": "text/css; charset=utf-8",
    ".csv": "text/csv; charset=utf-8",
    ".html": "text/html; charset=utf-8",
    ".ico": "image/x-icon",
    ".js": "text/javascript; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml; charset=utf-8",
    ".txt": "text/plain; charset=utf-8",
}

_FALLBACK_INDEX = """<!doctype html>
<html><head><meta charset="utf-8"><title>clustergrid run</title></head>
<body>
<h1>clustergrid run</h1>
<p>No triage UI bundle is configured (pass --ui or set CLUSTERGRID_UI).</p>
<ul>
<li><a href="/manifest.json">manifest.json</a></li>
<li><a href="/summary/metrics.csv">summary/metrics.csv</a></li>
<li><a href="/api/decisions">api/decisions</a></li>
</ul>
</body></html>
"""


def empty_decisions() -> dict:
    return {"schema_version": DECISIONS_SCHEMA_VERSION, "decisions": {}}


def validate_decisions(document) -> str | None:
    """Schema check for a decisions document; returns an error message or None.

    The one-selected-at-most rule is checked separately so callers can map it
    to 409 instead of 400.
    """
    if not isinstance(document, dict):
        return "decisions document must be a JSON object"
    if set(document) != {"schema_version", "decisions"}:
        return "document must have exactly 'schema_version' and 'decisions'"
    if document["schema_version"] != DECISIONS_SCHEMA_VERSION:
        return f"unsupported schema_version {document['schema_version']!r}"
    decisions = document["decisions"]
    if not isinstance(decisions, dict):
        return "'decisions' must be an object keyed by candidate_id"
    for candidate_id, decision in decisions.items():
        if not isinstance(candidate_id, str) or not candidate_id:
            return "candidate ids must be nonempty strings"
        if not isinstance(decision, dict):
            return f"decision for {candidate_id!r} must be an object"
        extra = set(decision) - {"status", "note", "updated_at"}
        if extra:
            return f"decision for {candidate_id!r} has unknown keys: {sorted(extra)}"
        if decision.get("status") not in DECISION_STATUSES:
            return (
                f"decision for {candidate_id!r} needs status in "
                f"{'/'.join(DECISION_STATUSES)}"
            )
        if not isinstance(decision.get("note", ""), str):
            return f"note for {candidate_id!r} must be a string"
        if not isinstance(decision.get("updated_at", ""), str):
            return f"updated_at for {candidate_id!r} must be a string"
    return None


def count_selected(document: dict) -> int:
    return sum(
        1 for d in document["decisions"].values() if d.get("status") == "selected"
    )


def _write_atomic(path: Path, payload: bytes):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".decisions-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_under(root: Path, relative: str) -> Path | None:
    candidate = (root / relative.lstrip("/")).resolve()
    try:
        candidate.relative_to(root.resolve())
    except ValueError:
        return None
    return candidate


class TriageHandler(BaseHTTPRequestHandler):
    """Static files from the run dir (then the UI dir) plus the decisions API."""

    server_version = "clustergrid"
    protocol_version = "HTTP/1.1"

    # Set by make_server:
    run_dir: Path
    ui_dir: Path | None
    quiet: bool = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    @property
    def decisions_path(self) -> Path:
        return self.run_dir / "decisions.json"

    def _send_json(self, status: int, document: dict):
        payload = (json.dumps(document, indent=2) + "\n").encode()
        self.send_response(status)
        self.send_header("Content-Type", _CONTENT_TYPES[".json"])
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_error_json(self, status: int, message: str):
        self._send_json(status, {"error": message})

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/api/decisions":
            if self.decisions_path.exists():
                try:
                    document = json.loads(self.decisions_path.read_text(encoding="utf-8"))
                except json.JSONDecodeError:
                    self._send_error_json(
                        HTTPStatus.INTERNAL_SERVER_ERROR, "decisions.json is corrupt"
                    )
                    return
            else:
                document = empty_decisions()
            self._send_json(HTTPStatus.OK, document)
            return
        self._serve_file(path)

    def _serve_file(self, path: str):
        if path == "/":
            path = "/index.html"
        roots = [self.run_dir] + ([self.ui_dir] if self.ui_dir else [])
        for root in roots:
            resolved = _resolve_under(root, path)
            if resolved is not None and resolved.is_file():
                payload = resolved.read_bytes()
                self.send_response(HTTPStatus.OK)
                content_type = _CONTENT_TYPES.get(
                    resolved.suffix.lower(), "application/octet-stream"
                )
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)
                return
        if path == "/index.html":
            payload = _FALLBACK_INDEX.encode()
            self.send_response(HTTPStatus.OK)
            self.send_header("Content-Type", _CONTENT_TYPES[".html"])
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
            return
        self._send_error_json(HTTPStatus.NOT_FOUND, f"not found: {path}")

    def do_PUT(self):
        path = self.path.split("?", 1)[0]
        if path != "/api/decisions":
            self._send_error_json(
                HTTPStatus.METHOD_NOT_ALLOWED, "only /api/decisions is writable"
            )
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            document = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._send_error_json(HTTPStatus.BAD_REQUEST, "body is not valid JSON")
            return
        problem = validate_decisions(document)
        if problem is not None:
            self._send_error_json(HTTPStatus.BAD_REQUEST, problem)
            return
        if count_selected(document) > 1:
            self._send_error_json(
                HTTPStatus.CONFLICT, "at most one candidate may be selected"
            )
            return
        payload = (json.dumps(document, indent=2) + "\n").encode()
        _write_atomic(self.decisions_path, payload)
        self._send_json(HTTPStatus.OK, document)


def make_server(
    run_dir: str | Path,
    port: int,
    ui_dir: str | Path | None = None,
    *,
    quiet: bool = True,
) -> ThreadingHTTPServer:
    """Bind the triage server; raises OSError if the port is taken."""
    run_dir = Path(run_dir)
    handler = type(
        "BoundTriageHandler",
        (TriageHandler,),
        {
            "run_dir": run_dir,
            "ui_dir": Path(ui_dir) if ui_dir else None,
            "quiet": quiet,
        },
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
