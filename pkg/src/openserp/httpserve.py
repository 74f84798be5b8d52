"""Minimal threaded HTTP/1.1 serving shared by the mock engine and the proxy.

Applications are plain callables ``Request -> Response``; this module only
moves bytes between them and the socket.
"""

from __future__ import annotations

import logging
import threading
import urllib.parse
from collections.abc import Callable
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

log = logging.getLogger("openserp.http")

HTML = "text/html; charset=utf-8"
PLAIN = "text/plain; charset=utf-8"


@dataclass(frozen=True)
class Request:
    method: str
    path: str
    query: str = ""
    headers: tuple[tuple[str, str], ...] = ()
    client_id: str = ""

    @classmethod
    def from_target(cls, target: str, headers=(), client_id: str = "", method: str = "GET") -> Request:
        parts = urllib.parse.urlsplit(target)
        return cls(method, parts.path or "/", parts.query, tuple(headers), client_id)

    def header(self, name: str) -> str | None:
        name = name.lower()
        for key, value in self.headers:
            if key.lower() == name:
                return value
        return None

    def params(self) -> dict[str, list[str]]:
        return urllib.parse.parse_qs(self.query, keep_blank_values=True)

    def param(self, name: str) -> str | None:
        values = self.params().get(name)
        return values[0] if values else None


@dataclass(frozen=True)
class Response:
    status: int
    body: bytes = b""
    content_type: str = HTML
    headers: tuple[tuple[str, str], ...] = field(default_factory=tuple)


App = Callable[[Request], Response]


def parse_listen(address: str) -> tuple[str, int]:
    """Split ``host:port`` (``[v6]:port`` allowed)."""
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {address!r}")
    host = host.strip("[]") or "127.0.0.1"
    port_n = int(port)
    if not 0 <= port_n <= 65535:
        raise ValueError(f"port out of range in {address!r}")
    return host, port_n


def _handler_for(app: App, label: str) -> type[BaseHTTPRequestHandler]:
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "openserp"
        sys_version = ""

        def do_GET(self) -> None:
            request = Request.from_target(
                self.path, headers=self.headers.items(), client_id=self.client_address[0]
            )
            try:
                response = app(request)
            except Exception:
                log.exception("%s: unhandled error on %s", label, self.path)
                response = Response(500, b"internal error\n", PLAIN)
            self.send_response(response.status)
            self.send_header("Content-Type", response.content_type)
            self.send_header("Content-Length", str(len(response.body)))
            for name, value in response.headers:
                self.send_header(name, value)
            self.send_header("Connection", "close")
            self.end_headers()
            self.wfile.write(response.body)
            self.close_connection = True

        def log_request(self, code="-", size="-") -> None:
            log.info("%s %s %s %s", label, self.command, self.path, code)

        def log_message(self, format: str, *args) -> None:
            log.warning("%s %s", label, format % args)

    return Handler


class ServiceServer:
    """Run an app on a background thread; usable as a context manager."""

    def __init__(self, app: App, listen: str = "127.0.0.1:0", label: str = "http") -> None:
        host, port = parse_listen(listen)
        self.httpd = ThreadingHTTPServer((host, port), _handler_for(app, label))
        self.httpd.daemon_threads = True
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"{host}:{port}"

    @property
    def url(self) -> str:
        return f"http://{self.address}"

    def start(self) -> ServiceServer:
        self._thread = threading.Thread(target=self.httpd.serve_forever, args=(0.05,), daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def stop(self) -> None:
        if self._thread is not None:
            self.httpd.shutdown()
            self._thread.join()
            self._thread = None
        self.httpd.server_close()

    def __enter__(self) -> ServiceServer:
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
