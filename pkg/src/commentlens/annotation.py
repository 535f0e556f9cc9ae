"""HTTP API and static hosting for the manual annotation workflow.

The server owns all state: task list, per-session answer files, and the
export into the corpus record format.  The browser UI is a thin client;
refreshing a page never loses submitted answers.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .categories import CATEGORY_LABELS
from .records import CommentRecord, read_records
from .targets import TARGET_LABELS

CATEGORY_GUIDELINES = {
    "Postcondition": "What the code accomplishes once it has run.",
    "Precondition": "Why the code is needed; holds before or regardless of "
                    "execution.",
    "ValueDescription": "A phrase naming the value of a variable, constant "
                        "or expression.",
    "Instruction": "A task note for code maintainers, e.g. a TODO.",
    "Guide": "Usage help addressed to callers of the code.",
    "Interface": "Describes a function, type, class or interface.",
    "MetaInformation": "Authorship, dates, licensing or provenance.",
    "CommentOut": "Disabled code kept inside a comment.",
    "Directive": "A machine-read switch for tools or compilers.",
    "VisualCue": "Decoration or section markers for readability.",
    "Uncategorized": "None of the other categories fits.",
}

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>commentlens annotation</title></head>
<body>
<h1>commentlens annotation API</h1>
<p>The browser UI is not built. Build the frontend (see frontend/README.md)
or drive the JSON API directly:</p>
<ul>
<li>GET /api/tasks?session=NAME</li>
<li>POST /api/annotations {session, task_id, label, elapsed_ms}</li>
<li>GET /api/progress?session=NAME</li>
<li>GET /api/export?sessions=A,B</li>
</ul>
</body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class AnnotationState:
    """Tasks plus per-session answers; appends are serialized per server."""

    def __init__(self, tasks: list[CommentRecord], out_dir: Path,
                 context_base: str = "") -> None:
        self.tasks = tasks
        self.by_id = {t.record_id: t for t in tasks}
        self.order = [t.record_id for t in tasks]
        self.out_dir = Path(out_dir)
        self.sessions_dir = self.out_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.context_base = context_base
        self.lock = threading.Lock()
        # session -> task_id -> {"label", "target_label", "elapsed_ms"}
        self.answers: dict[str, dict[str, dict]] = {}
        self._reload_sessions()

    def _session_path(self, session: str) -> Path:
        safe = "".join(ch if ch.isalnum() or ch in "-_." else "_"
                       for ch in session) or "anonymous"
        return self.sessions_dir / f"{safe}.jsonl"

    def _reload_sessions(self) -> None:
        for path in sorted(self.sessions_dir.glob("*.jsonl")):
            session = path.stem
            answers: dict[str, dict] = {}
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                entry = json.loads(line)
                task_id = entry["task_id"]
                if task_id in answers:  # revision: keep final, sum the time
                    entry["elapsed_ms"] += answers[task_id]["elapsed_ms"]
                answers[task_id] = entry
            self.answers[session] = answers

    def record_answer(self, session: str, task_id: str, label: str,
                      elapsed_ms: int, target_label: Optional[str],
                      revise: bool) -> tuple[int, str]:
        """Returns (http status, message)."""
        if task_id not in self.by_id:
            return 404, f"unknown task: {task_id}"
        if label not in CATEGORY_LABELS:
            return 400, f"label outside the category set: {label}"
        if target_label is not None and target_label not in TARGET_LABELS:
            return 400, f"target label outside the target set: {target_label}"
        if not isinstance(elapsed_ms, int) or elapsed_ms <= 0:
            return 400, "elapsed_ms must be a positive integer"
        with self.lock:
            answers = self.answers.setdefault(session, {})
            existing = answers.get(task_id)
            if existing is not None and not revise:
                return 409, f"task already annotated: {task_id}"
            total_ms = elapsed_ms + (existing["elapsed_ms"] if existing
                                     else 0)
            entry = {"task_id": task_id, "label": label,
                     "target_label": target_label, "elapsed_ms": total_ms}
            answers[task_id] = entry
            with open(self._session_path(session), "a",
                      encoding="utf-8") as handle:
                handle.write(json.dumps(
                    {**entry, "elapsed_ms": elapsed_ms}, sort_keys=True)
                    + "\n")
        return (200 if existing is not None else 201), "recorded"

    def next_task(self, session: str) -> Optional[dict]:
        answered = self.answers.get(session, {})
        for task_id in self.order:
            if task_id not in answered:
                return self.task_view(task_id, session)
        return None

    def task_view(self, task_id: str, session: str) -> dict:
        task = self.by_id[task_id]
        done = len(self.answers.get(session, {}))
        context_link = ""
        if self.context_base:
            context_link = (f"{self.context_base.rstrip('/')}/{task.path}"
                            f"#L{task.span.start_line}")
        return {
            "task_id": task_id,
            "project": task.project,
            "path": task.path,
            "snippet": task.snippet,
            "snippet_first_line": task.snippet_first_line,
            "comment_start_line": task.span.start_line,
            "comment_end_line": task.span.end_line,
            "categories": list(CATEGORY_LABELS),
            "guidelines": CATEGORY_GUIDELINES,
            "targets": list(TARGET_LABELS),
            "context_link": context_link,
            "done": done,
            "total": len(self.order),
        }

    def progress(self, session: str) -> dict:
        return {"done": len(self.answers.get(session, {})),
                "total": len(self.order)}

    def export(self, sessions: list[str]) -> list[CommentRecord]:
        records: list[CommentRecord] = []
        for session in sessions:
            answers = self.answers.get(session, {})
            for task_id in self.order:
                entry = answers.get(task_id)
                if entry is None:
                    continue
                task = self.by_id[task_id]
                records.append(task.with_labels(
                    category_label=entry["label"],
                    category_confidence=None,
                    target_label=entry.get("target_label"),
                    annotator=session,
                    elapsed_ms=entry["elapsed_ms"],
                ))
        return records


class AnnotationHandler(BaseHTTPRequestHandler):
    state: AnnotationState
    static_dir: Optional[Path] = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_text(self, status: int, text: str,
                   content_type: str = "text/plain; charset=utf-8") -> None:
        body = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        if url.path == "/api/tasks":
            session = query.get("session", "")
            if not session:
                self._send_json(400, {"error": "session parameter required"})
                return
            view = self.state.next_task(session)
            if view is None:
                self._send_json(200, {"done": True,
                                      **self.state.progress(session)})
            else:
                self._send_json(200, view)
            return
        if url.path == "/api/progress":
            session = query.get("session", "")
            self._send_json(200, self.state.progress(session))
            return
        if url.path == "/api/export":
            sessions = [s for s in query.get("sessions", "").split(",") if s]
            if not sessions:
                self._send_json(400, {"error": "sessions parameter required"})
                return
            records = self.state.export(sessions)
            body = "\n".join(json.dumps(r.to_json(), sort_keys=True)
                             for r in records)
            self._send_text(200, body + ("\n" if body else ""),
                            "application/x-ndjson")
            return
        self._serve_static(url.path)

    def _read_body(self) -> Optional[dict]:
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            return json.loads(raw.decode("utf-8"))
        except (ValueError, json.JSONDecodeError):
            return None

    def _handle_annotation(self, revise: bool) -> None:
        payload = self._read_body()
        if payload is None:
            self._send_json(400, {"error": "malformed JSON body"})
            return
        session = str(payload.get("session", ""))
        if not session:
            self._send_json(400, {"error": "session required"})
            return
        elapsed = payload.get("elapsed_ms")
        status, message = self.state.record_answer(
            session=session,
            task_id=str(payload.get("task_id", "")),
            label=str(payload.get("label", "")),
            elapsed_ms=elapsed if isinstance(elapsed, int) else -1,
            target_label=payload.get("target_label"),
            revise=revise,
        )
        body = {"error": message} if status >= 400 else {
            "status": message, **self.state.progress(session)}
        self._send_json(status, body)

    def do_POST(self) -> None:
        if urlparse(self.path).path == "/api/annotations":
            self._handle_annotation(revise=False)
            return
        self._send_json(404, {"error": "not found"})

    def do_PUT(self) -> None:
        if urlparse(self.path).path == "/api/annotations":
            self._handle_annotation(revise=True)
            return
        self._send_json(404, {"error": "not found"})

    def _serve_static(self, path: str) -> None:
        if path == "/":
            path = "/index.html"
        if self.static_dir is not None:
            candidate = (self.static_dir / path.lstrip("/")).resolve()
            if (candidate.is_file()
                    and str(candidate).startswith(
                        str(self.static_dir.resolve()))):
                content_type = _CONTENT_TYPES.get(candidate.suffix,
                                                  "application/octet-stream")
                self._send_text(200,
                                candidate.read_text(encoding="utf-8",
                                                    errors="replace"),
                                content_type)
                return
        if path == "/index.html":
            self._send_text(200, _FALLBACK_PAGE, "text/html; charset=utf-8")
            return
        self._send_json(404, {"error": "not found"})


def load_tasks(path: Path) -> list[CommentRecord]:
    return list(read_records(path))


def make_server(tasks: list[CommentRecord], out_dir: Path, port: int,
                host: str = "127.0.0.1",
                static_dir: Optional[Path] = None,
                context_base: str = "") -> ThreadingHTTPServer:
    state = AnnotationState(tasks, out_dir, context_base)
    handler = type("BoundAnnotationHandler", (AnnotationHandler,), {
        "state": state,
        "static_dir": static_dir,
    })
    return ThreadingHTTPServer((host, port), handler)
