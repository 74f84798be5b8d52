"""Lossless lightweight HTML tokenizer.

Grammar, applied at every ``<``:

* ``<!--`` opens a comment closed by the next ``-->``;
* ``<!doctype`` (any case) runs to the next ``>``;
* ``</`` + letter is an end tag running to the next ``>``;
* ``<`` + letter is a start tag with attributes ``name``, ``name="v"``,
  ``name='v'`` or ``name=v``; after ``script``/``style`` everything up to the
  matching end tag is one raw-text token.

Anything that does not parse becomes text, so tokenizing never fails and
``serialize_tokens(tokenize_html(x)) == x`` for every byte string ``x``.
Payloads stay bytes; no entity decoding happens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

RAW_TEXT_ELEMENTS = frozenset({"script", "style"})

_WS = b" \t\n\r\f"
_TAG_NAME_RE = re.compile(rb"[A-Za-z][^ \t\n\r\f/>]*")
_ATTR_NAME_RE = re.compile(rb"=?[^ \t\n\r\f/>=]*")
_BARE_VALUE_RE = re.compile(rb"[^ \t\n\r\f>]*")
_WS_RE = re.compile(rb"[ \t\n\r\f]*")
# whitespace and stray slashes between attributes
_GAP_RE = re.compile(rb"(?:[ \t\n\r\f]|/(?!>))*")

Span = tuple[int, int]


@dataclass(frozen=True)
class Attr:
    """One attribute. ``value`` is ``None`` for a valueless attribute.

    ``raw`` holds the exact source including leading whitespace; it is only
    re-emitted while name and value still equal what was parsed.
    """

    name: bytes
    value: bytes | None
    raw: bytes = field(default=b"", compare=False, repr=False)
    parsed: tuple[bytes, bytes | None] | None = field(default=None, compare=False, repr=False)

    def render(self) -> bytes:
        if self.raw and self.parsed == (self.name, self.value):
            return self.raw
        if self.value is None:
            return b" " + self.name
        return b" " + self.name + b'="' + self.value.replace(b'"', b"&quot;") + b'"'


@dataclass(frozen=True)
class StartTag:
    name: str
    attrs: tuple[Attr, ...] = ()
    self_closing: bool = False
    span: Span = (0, 0)
    raw_name: bytes = field(default=b"", compare=False, repr=False)
    raw_tail: bytes = field(default=b"", compare=False, repr=False)

    def attr(self, name: str) -> bytes | None:
        key = name.encode("ascii").lower()
        for a in self.attrs:
            if a.name.lower() == key:
                return a.value
        return None


@dataclass(frozen=True)
class EndTag:
    name: str
    span: Span = (0, 0)
    raw: bytes = field(default=b"", compare=False, repr=False)


@dataclass(frozen=True)
class Text:
    data: bytes
    span: Span = (0, 0)


@dataclass(frozen=True)
class Comment:
    data: bytes
    span: Span = (0, 0)


@dataclass(frozen=True)
class RawText:
    element: str
    data: bytes
    span: Span = (0, 0)


@dataclass(frozen=True)
class Doctype:
    data: bytes
    span: Span = (0, 0)


HtmlToken = Union[StartTag, EndTag, Text, Comment, RawText, Doctype]


def _lower_name(raw: bytes) -> str:
    return raw.decode("latin-1").lower()


def _parse_start_tag(body: bytes, pos: int) -> tuple[StartTag, int] | None:
    """Parse a start tag at ``body[pos] == '<'``; ``None`` when it is not one."""
    m = _TAG_NAME_RE.match(body, pos + 1)
    if m is None:
        return None
    raw_name = m.group()
    i = m.end()
    n = len(body)
    attrs = []
    while True:
        j = _GAP_RE.match(body, i).end()
        if j >= n:
            return None
        if body[j] == 0x3E:  # '>'
            tail_end, self_closing = j + 1, False
            break
        if body.startswith(b"/>", j):
            tail_end, self_closing = j + 2, True
            break
        am = _ATTR_NAME_RE.match(body, j)
        if am is None:
            return None
        name = am.group()
        k = am.end()
        value: bytes | None = None
        eq = _WS_RE.match(body, k).end()
        if body.startswith(b"=", eq):
            vstart = _WS_RE.match(body, eq + 1).end()
            quote = body[vstart:vstart + 1]
            if quote in (b'"', b"'"):
                close = body.find(quote, vstart + 1)
                if close < 0:
                    return None
                value = body[vstart + 1:close]
                k = close + 1
            else:
                vm = _BARE_VALUE_RE.match(body, vstart)
                value = vm.group()
                k = vm.end()
        attrs.append(Attr(name, value, raw=body[i:k], parsed=(name, value)))
        i = k
    tag = StartTag(
        name=_lower_name(raw_name),
        attrs=tuple(attrs),
        self_closing=self_closing,
        span=(pos, tail_end),
        raw_name=raw_name,
        raw_tail=body[i:tail_end],
    )
    return tag, tail_end


def _find_raw_text_end(body: bytes, lowered: bytes, pos: int, element: str) -> int:
    """Offset of the ``</element`` that closes a raw-text element, or len(body)."""
    needle = b"</" + element.encode("ascii")
    i = pos
    while True:
        i = lowered.find(needle, i)
        if i < 0:
            return len(body)
        after = body[i + len(needle):i + len(needle) + 1]
        if after == b"" or after in (b">", b"/") or after in _WS:
            return i
        i += len(needle)


def tokenize_html(body: bytes) -> list[HtmlToken]:
    tokens: list[HtmlToken] = []
    n = len(body)
    pos = 0
    text_start = 0
    lowered: bytes | None = None

    def flush(upto: int) -> None:
        if upto > text_start:
            tokens.append(Text(body[text_start:upto], (text_start, upto)))

    while pos < n:
        lt = body.find(b"<", pos)
        if lt < 0:
            break
        token = None
        end = lt + 1
        if body.startswith(b"<!--", lt):
            close = body.find(b"-->", lt + 4)
            if close >= 0:
                end = close + 3
                token = Comment(body[lt + 4:close], (lt, end))
        elif body[lt + 1:lt + 9].lower() == b"!doctype":
            close = body.find(b">", lt)
            if close >= 0:
                end = close + 1
                token = Doctype(body[lt:end], (lt, end))
        elif body[lt + 1:lt + 2] == b"/":
            m = _TAG_NAME_RE.match(body, lt + 2)
            close = body.find(b">", lt) if m else -1
            if close >= 0:
                end = close + 1
                token = EndTag(_lower_name(m.group()), (lt, end), raw=body[lt:end])
        else:
            parsed = _parse_start_tag(body, lt)
            if parsed is not None:
                token, end = parsed
        if token is None:
            pos = lt + 1
            continue
        flush(lt)
        tokens.append(token)
        pos = end
        if isinstance(token, StartTag) and token.name in RAW_TEXT_ELEMENTS:
            if lowered is None:
                lowered = body.lower()
            stop = _find_raw_text_end(body, lowered, end, token.name)
            if stop > end:
                tokens.append(RawText(token.name, body[end:stop], (end, stop)))
            pos = stop
        text_start = pos
    flush(n)
    return tokens


def serialize_token(token: HtmlToken) -> bytes:
    if isinstance(token, Text):
        return token.data
    if isinstance(token, StartTag):
        name = token.raw_name or token.name.encode("ascii")
        tail = token.raw_tail if token.raw_name else (b"/>" if token.self_closing else b">")
        return b"<" + name + b"".join(a.render() for a in token.attrs) + tail
    if isinstance(token, EndTag):
        return token.raw or b"</" + token.name.encode("ascii") + b">"
    if isinstance(token, RawText):
        return token.data
    if isinstance(token, Comment):
        return b"<!--" + token.data + b"-->"
    if isinstance(token, Doctype):
        return token.data
    raise TypeError(f"not an HTML token: {token!r}")


def serialize_tokens(tokens: list[HtmlToken]) -> bytes:
    return b"".join(serialize_token(t) for t in tokens)


def text_content(tokens: list[HtmlToken]) -> bytes:
    """Concatenated Text payloads; the part of a page a reader sees."""
    return b"".join(t.data for t in tokens if isinstance(t, Text))
