"""The mock search service and its built-in case-study scenarios."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

from ..engine_model import SearchQuery
from ..httpserve import HTML, PLAIN, Request, Response, ServiceServer
from .pages import STYLESHEET, render_results_page
from .policy import (
    AllowAll,
    ArrivalLog,
    Deny,
    DenyUserAgents,
    PolicyRequest,
    ProtectionPolicy,
    RequireReferer,
    evaluate_policy,
)

RESULTS_PER_PAGE = 10
SEARCH_PATH = "/search"
QUERY_PARAM = "q"
OPEN_POSTURES = frozenset({"yahoo-like", "bing-like", "google-news-2009"})
PROTECTED_POSTURES = frozenset({"google-like", "google-news-current"})


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    policy: ProtectionPolicy
    brand: str
    listen_address: str = "127.0.0.1:0"

    def __post_init__(self) -> None:
        if self.name in OPEN_POSTURES and not isinstance(self.policy.mode, AllowAll):
            raise ValueError(f"scenario {self.name!r} must carry AllowAll")
        if self.name in PROTECTED_POSTURES and isinstance(self.policy.mode, AllowAll):
            raise ValueError(f"scenario {self.name!r} must carry a denying policy")


# Postures as the case studies found them; change them in config, not code.
GOOGLE_LIKE_POLICY = ProtectionPolicy(
    DenyUserAgents(("Java", "curl", "python-requests"), deny_missing_ua=True), 403
)

BUILTIN_SCENARIOS: dict[str, ScenarioConfig] = {
    s.name: s
    for s in (
        ScenarioConfig("yahoo-like", ProtectionPolicy(AllowAll()), "MockYahoo!", "127.0.0.1:9001"),
        ScenarioConfig("bing-like", ProtectionPolicy(AllowAll()), "MockBing", "127.0.0.1:9002"),
        ScenarioConfig("google-like", GOOGLE_LIKE_POLICY, "MockGoogle", "127.0.0.1:9003"),
        ScenarioConfig("google-news-2009", ProtectionPolicy(AllowAll()), "MockGoogle News", "127.0.0.1:9004"),
        ScenarioConfig(
            "google-news-current",
            ProtectionPolicy(RequireReferer("news.mockgoogle.example"), 403),
            "MockGoogle News",
            "127.0.0.1:9005",
        ),
    )
}


class MockEngine:
    """Request handler for one scenario. ``clock`` stamps arrivals for rate limiting."""

    def __init__(self, scenario: ScenarioConfig, clock: Callable[[], float] = time.monotonic,
                 results_per_page: int = RESULTS_PER_PAGE) -> None:
        self.scenario = scenario
        self.clock = clock
        self.results_per_page = results_per_page
        self.arrivals = ArrivalLog()

    def __call__(self, request: Request) -> Response:
        if request.path == SEARCH_PATH:
            return self.handle_search(request)
        if request.path == "/static/serp.css":
            return Response(200, STYLESHEET, "text/css; charset=utf-8")
        if request.path.startswith("/doc/"):
            return Response(200, b"<!DOCTYPE html>\n<p>document placeholder</p>\n", HTML)
        return Response(404, b"not found\n", PLAIN)

    def handle_search(self, request: Request) -> Response:
        policy = self.scenario.policy
        decision = evaluate_policy(
            policy,
            PolicyRequest.build(request.headers, request.client_id, self.clock()),
            self.arrivals,
        )
        if isinstance(decision, Deny):
            body = f"HTTP {decision.status} Forbidden by {policy.mode_name}\n".encode("utf-8")
            return Response(decision.status, body, PLAIN)
        raw = request.param(QUERY_PARAM)
        if raw is None:
            return Response(400, b"missing query parameter 'q'\n", PLAIN)
        page = render_results_page(self.scenario.brand, SearchQuery(raw), self.results_per_page)
        return Response(200, page, HTML)


def handle_search(scenario: ScenarioConfig, request: Request) -> Response:
    """One-shot handler; rate-limit state does not persist between calls."""
    return MockEngine(scenario).handle_search(request)


def serve_mock(scenario: ScenarioConfig, listen: str | None = None,
               clock: Callable[[], float] = time.monotonic) -> ServiceServer:
    """Bind a server for ``scenario``; call ``start()`` or use it as a context manager."""
    return ServiceServer(MockEngine(scenario, clock), listen or scenario.listen_address,
                         label=f"mock[{scenario.name}]")
