"""Deterministic stand-in for a search results page."""

from __future__ import annotations

import html

from ..engine_model import SearchQuery, percent_encode

RESULTS_MARKER = "mocksearch-results"
RESULTS_MARKER_COMMENT = f"<!-- {RESULTS_MARKER} -->"


def render_results_page(brand: str, query: SearchQuery, count: int) -> bytes:
    if count < 0:
        raise ValueError("count must be >= 0")
    b = html.escape(brand)
    q = html.escape(query.raw)
    enc = percent_encode(query.raw)
    lines = [
        "<!DOCTYPE html>",
        "<html>",
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{b} Search: {q}</title>",
        '<link rel="stylesheet" href="/static/serp.css">',
        "<script>",
        f"var engine = {{name: {_js_string(brand)}, results: {count}}};",
        "</script>",
        "</head>",
        "<body>",
        RESULTS_MARKER_COMMENT,
        f'<div class="header"><h1>{b}</h1>',
        f'<form action="/search" method="get"><input type="text" name="q" value="{html.escape(query.raw, quote=True)}">'
        f"<input type=\"submit\" value=\"Search\"></form></div>",
        '<ol class="results">',
    ]
    for i in range(1, count + 1):
        lines.append(
            f'<li class="result"><a href="/doc/{i}?q={enc}">Result {i} for {q}</a>'
            f'<p class="snippet">{b} found document {i} matching {q}.</p></li>'
        )
    lines += [
        "</ol>",
        f'<div class="footer">&copy; {b} Inc. <a href="/search?q={enc}&amp;page=2">Next</a></div>',
        "</body>",
        "</html>",
        "",
    ]
    return "\n".join(lines).encode("utf-8")


def _js_string(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"').replace("<", "\\u003c")
    return f'"{out}"'


STYLESHEET = b"""body { font-family: sans-serif; margin: 2em; }
.result { margin-bottom: 1em; }
.snippet { color: #555; }
"""
