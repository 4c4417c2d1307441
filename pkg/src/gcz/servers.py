"""Network listeners: WebSocket sentence ingest and the HTTP trigger endpoint.

Both run on daemon threads and deliver into caller-supplied callbacks; the
callbacks are invoked on listener threads, so downstream code queues rather
than blocks.
"""

from __future__ import annotations

import http
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable
from urllib.parse import parse_qs, urlsplit

from websockets.sync.server import serve as ws_serve

from .errors import BindFailure, GczError
from .words import ControlSentence, parse_sentence

WS_PATH = "/input"
TRIGGER_PREFIX = "/trigger/"


class WsIngestServer:
    """Accepts canonical-JSON sentences as text frames on ``/input``.

    A malformed frame gets a ``{"error":"<Name>"}`` reply and the connection
    stays open; well-formed sentences go to ``on_sentence(conn_id, device,
    sentence)`` in arrival order per connection.
    """

    def __init__(self, host: str, port: int,
                 on_sentence: Callable[[int, "str | None", ControlSentence], None]):
        self.on_sentence = on_sentence
        self._next_id = 0
        self._id_lock = threading.Lock()
        try:
            self._server = ws_serve(
                self._handle, host, port, process_request=self._gate, compression=None
            )
        except OSError as exc:
            raise BindFailure(f"cannot bind ws listener on {host}:{port}: {exc}") from exc
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="ws-ingest", daemon=True
        )

    @property
    def port(self) -> int:
        return self._server.socket.getsockname()[1]

    @staticmethod
    def _gate(connection, request):
        if urlsplit(request.path).path != WS_PATH:
            return connection.respond(http.HTTPStatus.NOT_FOUND, "unknown path\n")
        return None

    def _handle(self, connection) -> None:
        with self._id_lock:
            self._next_id += 1
            conn_id = self._next_id
        query = parse_qs(urlsplit(connection.request.path).query)
        device = query.get("device", [None])[0]
        for frame in connection:
            if isinstance(frame, bytes):
                connection.send(json.dumps({"error": "MalformedJson"}, separators=(",", ":")))
                continue
            try:
                sentence = parse_sentence(frame)
            except GczError as exc:
                connection.send(
                    json.dumps({"error": type(exc).__name__}, separators=(",", ":"))
                )
                continue
            self.on_sentence(conn_id, device, sentence)

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        if self._thread.is_alive():
            self._thread.join(timeout=5)


class _TriggerHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, *args) -> None:  # keep the serve log quiet
        pass

    def _reply(self, status: int, obj: dict) -> None:
        body = json.dumps(obj, separators=(",", ":")).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:
        path = urlsplit(self.path).path
        if path.startswith(TRIGGER_PREFIX):
            name = path[len(TRIGGER_PREFIX):]
            if name:
                # on_trigger only enqueues; the 200 goes out before processing
                self.server.on_trigger(name)
                self._reply(200, {"fired": name})
                return
        self._reply(404, {"error": "NotFound"})


class HttpTriggerServer:
    """GET ``/trigger/<name>`` fires a named event; everything else is 404."""

    def __init__(self, host: str, port: int, on_trigger: Callable[[str], None]):
        try:
            self._server = ThreadingHTTPServer((host, port), _TriggerHandler)
        except OSError as exc:
            raise BindFailure(f"cannot bind http listener on {host}:{port}: {exc}") from exc
        self._server.on_trigger = on_trigger
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="http-trigger", daemon=True
        )

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        if self._thread.is_alive():
            # shutdown() deadlocks unless serve_forever is running
            self._server.shutdown()
            self._thread.join(timeout=5)
        self._server.server_close()
