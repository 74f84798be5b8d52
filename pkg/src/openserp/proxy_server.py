"""Rebranding reverse proxy: serve a branded form, fetch upstream, rebrand, return."""

from __future__ import annotations

import html
import urllib.parse
from collections.abc import Callable
from dataclasses import dataclass, field

from .engine_model import BARE_CLIENT, EngineTarget, RequestProfile, SearchQuery, build_query_url
from .fetcher import DEFAULT_LIMITS, FetchError, FetchLimits, FetchResult, fetch, naive_body
from .httpserve import HTML, Request, Response, ServiceServer, parse_listen
from .rebrander import (
    LinkMode,
    RebrandRuleSet,
    apply_rules,
    naive_replace,
    rewrite_links,
    serialize_tokens,
    tokenize_html,
)

DEFAULT_OWN_BRAND = "KALYAN SEARCH ENGINE"
DEFAULT_FORM_PARAM = "searchstring"

FetchFn = Callable[[str, RequestProfile, FetchLimits], FetchResult]


@dataclass(frozen=True)
class ProxyConfig:
    target: EngineTarget
    listen_address: str = "127.0.0.1:8080"
    profile: RequestProfile = BARE_CLIENT
    rules: RebrandRuleSet = field(default_factory=RebrandRuleSet)
    own_brand: str = DEFAULT_OWN_BRAND
    form_param: str = DEFAULT_FORM_PARAM
    link_mode: LinkMode = LinkMode.ABSOLUTE_TO_UPSTREAM
    naive: bool = False
    limits: FetchLimits = DEFAULT_LIMITS

    def __post_init__(self) -> None:
        object.__setattr__(self, "link_mode", LinkMode(self.link_mode))
        if not self.form_param:
            raise ValueError("form_param must be non-empty")
        host, port = parse_listen(self.listen_address)
        if port and f"{host}:{port}" == _authority(self.target):
            raise ValueError("the proxy cannot listen on its own upstream's address")


def _authority(target: EngineTarget) -> str:
    parts = urllib.parse.urlsplit(target.base_url)
    port = parts.port or (443 if parts.scheme == "https" else 80)
    return f"{parts.hostname}:{port}"


def _page(title: str, body: str) -> bytes:
    t = html.escape(title)
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        f"<title>{t}</title>\n</head>\n<body>\n{body}\n</body>\n</html>\n"
    ).encode("utf-8")


def handle_home(config: ProxyConfig) -> Response:
    brand = html.escape(config.own_brand)
    form = (
        '<center>\n'
        '<form method="get" action="/search">\n'
        f"<h1>{brand}</h1>\n"
        f'<input type="text" name="{html.escape(config.form_param, quote=True)}">\n'
        '<input type="submit" value="Search">\n'
        "</form>\n"
        "</center>"
    )
    return Response(200, _page(config.own_brand, form), HTML)


def _bad_gateway(message: str) -> Response:
    return Response(502, _page("Bad Gateway", f"<h1>Bad Gateway</h1>\n<p>{html.escape(message)}</p>"), HTML)


def transform_body(config: ProxyConfig, result: FetchResult) -> bytes:
    """Rebrand a fetched page per the config's scope and link settings."""
    if config.naive:
        return naive_replace(naive_body(result.body), config.rules)
    tokens = tokenize_html(result.body)
    tokens = rewrite_links(tokens, result.final_url, config.link_mode)
    return serialize_tokens(apply_rules(tokens, config.rules))


def handle_search_proxy(config: ProxyConfig, request: Request, fetch_fn: FetchFn = fetch) -> Response:
    raw = request.param(config.form_param)
    if raw is None:
        return Response(
            400, _page("Bad Request", f"<p>missing parameter {html.escape(config.form_param)}</p>"), HTML
        )
    url = build_query_url(config.target, SearchQuery(raw))
    try:
        result = fetch_fn(url, config.profile, config.limits)
    except FetchError as exc:
        return _bad_gateway(f"upstream engine unreachable: {exc}")
    if result.status == 403:
        return _bad_gateway("upstream engine is protected (403)")
    if result.status != 200:
        return _bad_gateway(f"upstream engine answered HTTP {result.status}")
    return Response(200, transform_body(config, result), HTML)


class ProxyApp:
    def __init__(self, config: ProxyConfig, fetch_fn: FetchFn = fetch) -> None:
        self.config = config
        self.fetch_fn = fetch_fn

    def __call__(self, request: Request) -> Response:
        if request.path == "/":
            return handle_home(self.config)
        if request.path == "/search":
            return handle_search_proxy(self.config, request, self.fetch_fn)
        return Response(404, _page("Not Found", "<p>not found</p>"), HTML)


def serve_proxy(config: ProxyConfig, listen: str | None = None, fetch_fn: FetchFn = fetch) -> ServiceServer:
    return ServiceServer(ProxyApp(config, fetch_fn), listen or config.listen_address, label="proxy")
