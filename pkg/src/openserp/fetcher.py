"""Upstream GET with a chosen request profile and byte-exact body capture."""

from __future__ import annotations

import http.client
import socket
import urllib.parse
from dataclasses import dataclass

from .engine_model import RequestProfile

REDIRECT_STATUSES = frozenset({301, 302, 303, 307, 308})
_CHUNK = 64 * 1024


@dataclass(frozen=True)
class FetchLimits:
    timeout: float = 10.0
    max_body_bytes: int = 8 * 1024 * 1024
    max_redirects: int = 5


DEFAULT_LIMITS = FetchLimits()


@dataclass(frozen=True)
class FetchResult:
    status: int
    headers: tuple[tuple[str, str], ...]
    body: bytes
    final_url: str

    def __post_init__(self) -> None:
        if not 100 <= self.status <= 599:
            raise ValueError(f"status out of range: {self.status}")

    def header(self, name: str) -> str | None:
        name = name.lower()
        for key, value in self.headers:
            if key.lower() == name:
                return value
        return None


class FetchError(Exception):
    """Base for fetch-level failures. ``kind`` names the failure case."""

    kind = "FetchError"

    def __init__(self, url: str, detail: str = "") -> None:
        self.url = url
        self.detail = detail
        super().__init__(f"{self.kind}: {url}" + (f" ({detail})" if detail else ""))


class Unreachable(FetchError):
    kind = "Unreachable"


class Timeout(FetchError):
    kind = "Timeout"


class BodyTooLarge(FetchError):
    kind = "BodyTooLarge"


class TooManyRedirects(FetchError):
    kind = "TooManyRedirects"


def _connection(parts: urllib.parse.SplitResult, timeout: float) -> http.client.HTTPConnection:
    if parts.scheme == "https":
        return http.client.HTTPSConnection(parts.hostname, parts.port, timeout=timeout)
    return http.client.HTTPConnection(parts.hostname, parts.port, timeout=timeout)


def _request_target(parts: urllib.parse.SplitResult) -> str:
    target = parts.path or "/"
    if parts.query:
        target += "?" + parts.query
    return target


def _get_once(url: str, profile: RequestProfile, limits: FetchLimits) -> FetchResult:
    parts = urllib.parse.urlsplit(url)
    if parts.scheme not in ("http", "https") or not parts.hostname:
        raise ValueError(f"not an absolute http(s) URL: {url!r}")
    conn = _connection(parts, limits.timeout)
    try:
        # putrequest adds Host and "Accept-Encoding: identity"; nothing else is implied.
        conn.putrequest("GET", _request_target(parts))
        for name, value in profile.headers():
            conn.putheader(name, value)
        conn.putheader("Connection", "close")
        conn.endheaders()
        resp = conn.getresponse()
        chunks = []
        size = 0
        while True:
            chunk = resp.read(_CHUNK)
            if not chunk:
                break
            size += len(chunk)
            if size > limits.max_body_bytes:
                raise BodyTooLarge(url, f"more than {limits.max_body_bytes} bytes")
            chunks.append(chunk)
        return FetchResult(
            status=resp.status,
            headers=tuple(resp.getheaders()),
            body=b"".join(chunks),
            final_url=url,
        )
    except (socket.timeout, TimeoutError) as exc:
        raise Timeout(url, str(exc) or "timed out") from exc
    except (ConnectionError, socket.gaierror, http.client.HTTPException, OSError) as exc:
        raise Unreachable(url, str(exc)) from exc
    finally:
        conn.close()


def fetch(url: str, profile: RequestProfile, limits: FetchLimits = DEFAULT_LIMITS) -> FetchResult:
    """GET ``url`` presenting exactly ``profile``'s headers.

    Redirects are followed up to ``limits.max_redirects``, re-sending the same
    profile. HTTP error statuses come back as ordinary results; only
    transport-level problems raise :class:`FetchError` subclasses.
    """
    current = url
    for _ in range(limits.max_redirects + 1):
        result = _get_once(current, profile, limits)
        location = result.header("Location")
        if result.status not in REDIRECT_STATUSES or not location:
            return result
        current = urllib.parse.urljoin(current, location)
    raise TooManyRedirects(url, f"limit {limits.max_redirects}")


def naive_body(body: bytes) -> bytes:
    """Mimic a readLine() loop that concatenates lines: every CR and LF vanishes."""
    return body.replace(b"\r", b"").replace(b"\n", b"")
