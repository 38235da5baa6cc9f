"""Local HTTP endpoints: the annotation workbench API (plus static UI files)
and the question-store query endpoint. JSON bodies over plain http.server;
nothing here is meant to face the open internet.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import store as store_mod
from .annotation import AnnotationError, AnnotationService, StaleLeaseError
from .dataset import save_dataset


class _JsonHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload, content_type="application/json") -> None:
        if isinstance(payload, (dict, list)):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        elif isinstance(payload, str):
            body = payload.encode("utf-8")
        else:
            body = payload
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str) -> None:
        self._send(status, {"error": message})

    def _read_json(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        return json.loads(raw.decode("utf-8") or "{}")


class AnnotationHandler(_JsonHandler):
    service: AnnotationService = None  # set via make_annotation_server
    static_dir: Path | None = None

    def do_POST(self):
        path = urlparse(self.path).path
        try:
            if path == "/api/workers":
                body = self._read_json()
                name = (body.get("name") or "").strip()
                if not name:
                    return self._error(400, "worker name required")
                return self._send(200, {"worker_id": self.service.register_worker(name)})
            m = re.fullmatch(r"/api/tasks/([^/]+)/response", path)
            if m:
                body = self._read_json()
                ack = self.service.submit(body.get("worker_id", ""), m.group(1), body.get("body"))
                return self._send(200, ack)
            m = re.fullmatch(r"/api/expert/([^/]+)", path)
            if m:
                body = self._read_json()
                out = self.service.resolve_expert(m.group(1), bool(body.get("approve")))
                return self._send(200, out)
            return self._error(404, f"no such endpoint {path}")
        except StaleLeaseError as exc:
            return self._error(409, str(exc))
        except AnnotationError as exc:
            return self._error(400, str(exc))
        except (json.JSONDecodeError, KeyError) as exc:
            return self._error(400, f"bad request: {exc}")

    def do_GET(self):
        url = urlparse(self.path)
        path = url.path
        try:
            if path == "/api/tasks/next":
                qs = parse_qs(url.query)
                worker_id = (qs.get("worker_id") or [""])[0]
                step = (qs.get("step") or [None])[0]
                task = self.service.next_task(worker_id, step)
                if task is None:
                    return self._send(200, {"task": None})
                return self._send(200, {"task": task.view()})
            if path == "/api/progress":
                return self._send(200, self.service.progress())
            if path == "/api/expert":
                items = [
                    {
                        "item_id": i.item_id,
                        "record_id": i.record_id,
                        "question": i.question,
                        "verdicts": i.verdicts,
                    }
                    for i in self.service.expert_queue()
                ]
                return self._send(200, {"items": items})
            if path == "/api/records":
                recs = [
                    {
                        "record_id": r.record_id,
                        "category": r.category,
                        "sentence": r.sentence_text,
                        "label": "N/A" if r.is_na else "OK",
                        "questions": list(r.questions),
                    }
                    for r in self.service.records()
                ]
                return self._send(200, {"records": recs})
            if path == "/records.tsv":
                import tempfile

                with tempfile.NamedTemporaryFile("w+", suffix=".tsv", delete=True) as tmp:
                    save_dataset(self.service.records(), tmp.name)
                    tmp.seek(0)
                    return self._send(200, tmp.read(), content_type="text/tab-separated-values")
            return self._serve_static(path)
        except AnnotationError as exc:
            return self._error(400, str(exc))

    def _serve_static(self, path: str):
        if self.static_dir is None:
            return self._error(404, "no static files configured")
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            return self._error(404, f"not found: {path}")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), content_type=ctype)


class QuestionStoreHandler(_JsonHandler):
    index: store_mod.QuestionIndex = None  # set via make_store_server

    def _handle_query(self, text: str, category: str | None, k: int):
        if not text:
            return self._error(400, "query text required")
        try:
            ranked = store_mod.query(self.index, text, category, k)
        except ValueError as exc:
            return self._error(400, str(exc))
        return self._send(
            200,
            {
                "results": [
                    {
                        "id": e.entry_id,
                        "question": e.text,
                        "category": e.category,
                        "score": round(score, 6),
                    }
                    for e, score in ranked
                ]
            },
        )

    def do_GET(self):
        url = urlparse(self.path)
        if url.path != "/query":
            return self._error(404, f"no such endpoint {url.path}")
        qs = parse_qs(url.query)
        text = (qs.get("text") or [""])[0]
        category = (qs.get("category") or [None])[0]
        k = int((qs.get("k") or ["5"])[0])
        return self._handle_query(text, category, k)

    def do_POST(self):
        if urlparse(self.path).path != "/query":
            return self._error(404, "no such endpoint")
        try:
            body = self._read_json()
        except json.JSONDecodeError as exc:
            return self._error(400, f"bad JSON: {exc}")
        return self._handle_query(
            body.get("text", ""), body.get("category"), int(body.get("k", 5))
        )


def make_annotation_server(
    service: AnnotationService, port: int = 0, static_dir: str | Path | None = None
) -> ThreadingHTTPServer:
    handler = type(
        "BoundAnnotationHandler",
        (AnnotationHandler,),
        {"service": service, "static_dir": Path(static_dir) if static_dir else None},
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def make_store_server(index: store_mod.QuestionIndex, port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundStoreHandler", (QuestionStoreHandler,), {"index": index})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_forever_in_thread(server: ThreadingHTTPServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
