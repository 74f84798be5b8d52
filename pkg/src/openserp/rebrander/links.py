"""Resolve relative link attributes against the upstream page URL."""

from __future__ import annotations

import dataclasses
import enum
import re
import urllib.parse

from .tokenizer import HtmlToken, StartTag

LINK_ATTRS = frozenset({b"href", b"src", b"action"})
_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


class LinkMode(str, enum.Enum):
    ABSOLUTE_TO_UPSTREAM = "AbsoluteToUpstream"
    OFF = "Off"


def resolve_reference(value: str, base: str) -> str:
    """Resolve one reference; absolute, empty and fragment-only ones are kept."""
    ref = value.strip()
    if not ref or ref.startswith("#") or _SCHEME_RE.match(ref):
        return value
    try:
        return urllib.parse.urljoin(base, ref)
    except ValueError:
        return value


def rewrite_links(
    tokens: list[HtmlToken],
    upstream_base: str,
    mode: LinkMode = LinkMode.ABSOLUTE_TO_UPSTREAM,
) -> list[HtmlToken]:
    if LinkMode(mode) is LinkMode.OFF:
        return list(tokens)
    out: list[HtmlToken] = []
    for token in tokens:
        if isinstance(token, StartTag) and any(
            a.name.lower() in LINK_ATTRS and a.value for a in token.attrs
        ):
            attrs = []
            for a in token.attrs:
                if a.name.lower() in LINK_ATTRS and a.value:
                    # surrogateescape keeps undecodable bytes intact through the round trip
                    old = a.value.decode("utf-8", "surrogateescape")
                    new = resolve_reference(old, upstream_base)
                    if new != old:
                        a = dataclasses.replace(a, value=new.encode("utf-8", "surrogateescape"))
                attrs.append(a)
            token = dataclasses.replace(token, attrs=tuple(attrs))
        out.append(token)
    return out
