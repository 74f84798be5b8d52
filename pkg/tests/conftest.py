from __future__ import annotations

import socket
import sys
import threading
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from openserp.engine_model import EngineTarget  # noqa: E402
from openserp.mock_engine import BUILTIN_SCENARIOS, RESULTS_MARKER, serve_mock  # noqa: E402


class RawServer:
    """Single-purpose TCP server: records each raw request head, replies with a
    function of the request target. Independent of the package's HTTP layer."""

    def __init__(self, reply, delay: float = 0.0) -> None:
        self.reply = reply
        self.delay = delay
        self.requests: list[bytes] = []
        self.sock = socket.socket()
        self.sock.bind(("127.0.0.1", 0))
        self.sock.listen(16)
        self.port = self.sock.getsockname()[1]
        self.url = f"http://127.0.0.1:{self.port}"
        self._stop = False
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()

    def _loop(self) -> None:
        while not self._stop:
            try:
                conn, _ = self.sock.accept()
            except OSError:
                return
            threading.Thread(target=self._serve, args=(conn,), daemon=True).start()

    def _serve(self, conn: socket.socket) -> None:
        with conn:
            head = b""
            while b"\r\n\r\n" not in head:
                chunk = conn.recv(4096)
                if not chunk:
                    return
                head += chunk
            self.requests.append(head)
            if self.delay:
                time.sleep(self.delay)
            target = head.split(b" ", 2)[1].decode()
            try:
                conn.sendall(self.reply(target))
            except OSError:
                pass

    def close(self) -> None:
        self._stop = True
        self.sock.close()


def http_response(status: int, body: bytes, headers: list[tuple[str, str]] = ()) -> bytes:
    head = f"HTTP/1.1 {status} X\r\nContent-Length: {len(body)}\r\nConnection: close\r\n"
    head += "".join(f"{k}: {v}\r\n" for k, v in headers)
    return head.encode() + b"\r\n" + body


@pytest.fixture
def raw_server():
    servers = []

    def make(reply, delay: float = 0.0) -> RawServer:
        s = RawServer(reply, delay)
        servers.append(s)
        return s

    yield make
    for s in servers:
        s.close()


@pytest.fixture
def closed_port() -> int:
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


@contextmanager
def running_mock(name: str, clock=time.monotonic):
    server = serve_mock(BUILTIN_SCENARIOS[name], "127.0.0.1:0", clock=clock)
    with server:
        yield server


def target_for(name: str, server) -> EngineTarget:
    scenario = BUILTIN_SCENARIOS[name]
    return EngineTarget(
        name=name,
        base_url=server.url + "/search",
        result_markers=(RESULTS_MARKER,),
        brand_tokens=(scenario.brand,),
    )


@pytest.fixture
def mock_engine():
    """Factory: start a built-in scenario on an ephemeral port, return (server, target)."""
    stack = []

    def start(name: str, clock=time.monotonic):
        cm = running_mock(name, clock)
        server = cm.__enter__()
        stack.append(cm)
        return server, target_for(name, server)

    yield start
    for cm in reversed(stack):
        cm.__exit__(None, None, None)


# --- acceptance summary -----------------------------------------------------

_criteria: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria.append((value, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        terminalreporter.write_line(f"{outcome}  {name}")
