"""Engine targets, request profiles and upstream query URL construction."""

from __future__ import annotations

import re
import urllib.parse
from dataclasses import dataclass, field

DEFAULT_QUERY_PARAM = "q"

# RFC 3986 unreserved characters; everything else is percent-encoded.
_UNRESERVED = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~"
# pchar minus the query delimiters '&', '=', '#', '+'
_QUERY_KEY_RE = re.compile(r"^(?:[A-Za-z0-9\-._~!$'()*,;:@/?]|%[0-9A-Fa-f]{2})+$")
_HEADER_NAME_RE = re.compile(r"^[^\s:]+$")


class ModelError(ValueError):
    """A target or profile violates its invariants."""


def percent_encode(raw: str) -> str:
    """Percent-encode every UTF-8 byte outside the RFC 3986 unreserved set.

    Hex digits are uppercase and space becomes ``%20`` (never ``+``).
    """
    return urllib.parse.quote(raw, safe="", encoding="utf-8", errors="strict")


def percent_decode(encoded: str) -> str:
    """Inverse of :func:`percent_encode`. Invalid UTF-8 raises ``UnicodeDecodeError``."""
    return urllib.parse.unquote_to_bytes(encoded).decode("utf-8")


@dataclass(frozen=True)
class SearchQuery:
    """The user's search string exactly as typed."""

    raw: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.raw, str):
            raise ModelError(f"query must be a string, got {type(self.raw).__name__}")


@dataclass(frozen=True)
class EngineTarget:
    name: str
    base_url: str
    query_param: str = DEFAULT_QUERY_PARAM
    result_markers: tuple[str, ...] = ()
    brand_tokens: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "result_markers", tuple(self.result_markers))
        object.__setattr__(self, "brand_tokens", tuple(self.brand_tokens))
        if not self.name:
            raise ModelError("target name must be non-empty")
        if "?" in self.base_url:
            raise ModelError(f"target {self.name!r}: base_url must not contain '?'")
        parts = urllib.parse.urlsplit(self.base_url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ModelError(
                f"target {self.name!r}: base_url must be an absolute http(s) URL, got {self.base_url!r}"
            )
        if parts.fragment or "#" in self.base_url:
            raise ModelError(f"target {self.name!r}: base_url must not contain a fragment")
        if not self.query_param or not _QUERY_KEY_RE.match(self.query_param):
            raise ModelError(f"target {self.name!r}: illegal query_param {self.query_param!r}")
        if not self.result_markers or not all(self.result_markers):
            raise ModelError(f"target {self.name!r}: result_markers must be non-empty strings")

    @property
    def authority(self) -> str:
        return urllib.parse.urlsplit(self.base_url).netloc

    @property
    def host(self) -> str:
        return urllib.parse.urlsplit(self.base_url).hostname or ""


@dataclass(frozen=True)
class RequestProfile:
    """The identity a fetch presents. ``None`` headers are never sent."""

    name: str
    user_agent: str | None = None
    referer: str | None = None
    extra_headers: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        extra = tuple((str(k), str(v)) for k, v in self.extra_headers)
        object.__setattr__(self, "extra_headers", extra)
        if not self.name:
            raise ModelError("profile name must be non-empty")
        seen: set[str] = set()
        for name, value in self.headers():
            if not _HEADER_NAME_RE.match(name):
                raise ModelError(f"profile {self.name!r}: illegal header name {name!r}")
            if "\r" in value or "\n" in value:
                raise ModelError(f"profile {self.name!r}: header {name!r} value contains a line break")
            key = name.lower()
            if key in seen:
                raise ModelError(f"profile {self.name!r}: duplicate header {name!r}")
            seen.add(key)

    def headers(self) -> list[tuple[str, str]]:
        """Headers in send order: User-Agent, Referer, then the extras."""
        out = []
        if self.user_agent is not None:
            out.append(("User-Agent", self.user_agent))
        if self.referer is not None:
            out.append(("Referer", self.referer))
        out.extend(self.extra_headers)
        return out


def build_query_url(target: EngineTarget, query: SearchQuery) -> str:
    return f"{target.base_url}?{target.query_param}={percent_encode(query.raw)}"


def split_query_url(url: str) -> tuple[str, str, str]:
    """Split a :func:`build_query_url` result into (base_url, param, encoded value)."""
    base, _, query = url.partition("?")
    param, _, value = query.partition("=")
    return base, param, value


BARE_CLIENT = RequestProfile(name="bare-client")
BROWSER_LIKE = RequestProfile(
    name="browser-like",
    user_agent="Mozilla/5.0 (X11; Linux x86_64; rv:128.0) Gecko/20100101 Firefox/128.0",
    extra_headers=(("Accept", "text/html,application/xhtml+xml"),),
)
JAVA_CLIENT = RequestProfile(name="java-client", user_agent="Java/1.6.0_21")
