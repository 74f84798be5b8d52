"""Local search service with configurable protections."""

from .pages import RESULTS_MARKER, RESULTS_MARKER_COMMENT, render_results_page
from .policy import (
    ALLOW,
    Allow,
    AllowAll,
    ArrivalLog,
    Deny,
    DenyUserAgents,
    PolicyRequest,
    ProtectionPolicy,
    RateLimit,
    RequireReferer,
    evaluate_policy,
)
from .server import BUILTIN_SCENARIOS, MockEngine, ScenarioConfig, handle_search, serve_mock

__all__ = [
    "ALLOW", "Allow", "AllowAll", "ArrivalLog", "BUILTIN_SCENARIOS", "Deny", "DenyUserAgents",
    "MockEngine", "PolicyRequest", "ProtectionPolicy", "RESULTS_MARKER", "RESULTS_MARKER_COMMENT",
    "RateLimit", "RequireReferer", "ScenarioConfig", "evaluate_policy", "handle_search",
    "render_results_page", "serve_mock",
]
