"""Protection policies gating a mock search endpoint."""

from __future__ import annotations

import threading
from collections import defaultdict, deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class AllowAll:
    pass


@dataclass(frozen=True)
class DenyUserAgents:
    substrings: tuple[str, ...] = ()
    deny_missing_ua: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "substrings", tuple(self.substrings))


@dataclass(frozen=True)
class RequireReferer:
    host: str

    def __post_init__(self) -> None:
        if not self.host:
            raise ValueError("RequireReferer needs a non-empty host substring")


@dataclass(frozen=True)
class RateLimit:
    max_requests: int
    window: float  # seconds

    def __post_init__(self) -> None:
        if self.max_requests < 1:
            raise ValueError("RateLimit.max_requests must be >= 1")
        if not self.window > 0:
            raise ValueError("RateLimit.window must be > 0")


PolicyMode = Union[AllowAll, DenyUserAgents, RequireReferer, RateLimit]


@dataclass(frozen=True)
class ProtectionPolicy:
    mode: PolicyMode = field(default_factory=AllowAll)
    deny_status: int = 403

    def __post_init__(self) -> None:
        if not 400 <= self.deny_status <= 599:
            raise ValueError(f"deny_status must be in [400, 599], got {self.deny_status}")

    @property
    def mode_name(self) -> str:
        return type(self.mode).__name__

    @property
    def denies_bare_clients(self) -> bool:
        """True when a request with no identifying headers is refused."""
        mode = self.mode
        if isinstance(mode, DenyUserAgents):
            return mode.deny_missing_ua
        return isinstance(mode, RequireReferer)


@dataclass(frozen=True)
class PolicyRequest:
    headers: Mapping[str, str]  # keys lower-cased
    client_id: str = ""
    arrival: float = 0.0

    @classmethod
    def build(cls, headers, client_id: str = "", arrival: float = 0.0) -> PolicyRequest:
        items = headers.items() if isinstance(headers, Mapping) else headers
        return cls({k.lower(): v for k, v in items}, client_id, arrival)


@dataclass(frozen=True)
class Allow:
    pass


@dataclass(frozen=True)
class Deny:
    status: int
    reason: str = ""


Decision = Union[Allow, Deny]
ALLOW = Allow()


class ArrivalLog:
    """Sliding-window record of admitted arrivals per client.

    The only shared mutable state of a mock engine; every check-and-record is
    done under one lock so concurrent requests see a consistent count.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._arrivals: dict[str, deque[float]] = defaultdict(deque)

    def admit(self, client_id: str, now: float, limit: RateLimit) -> bool:
        with self._lock:
            arrivals = self._arrivals[client_id]
            while arrivals and now - arrivals[0] >= limit.window:
                arrivals.popleft()
            if len(arrivals) >= limit.max_requests:
                return False
            arrivals.append(now)
            return True

    def clear(self) -> None:
        with self._lock:
            self._arrivals.clear()


def evaluate_policy(
    policy: ProtectionPolicy, request: PolicyRequest, log: ArrivalLog | None = None
) -> Decision:
    """Decide whether ``request`` gets results. ``RateLimit`` needs ``log``."""
    mode = policy.mode
    deny = Deny(policy.deny_status, policy.mode_name)
    if isinstance(mode, AllowAll):
        return ALLOW
    if isinstance(mode, DenyUserAgents):
        ua = request.headers.get("user-agent")
        if ua is None:
            return deny if mode.deny_missing_ua else ALLOW
        return deny if any(s in ua for s in mode.substrings) else ALLOW
    if isinstance(mode, RequireReferer):
        referer = request.headers.get("referer")
        return ALLOW if referer is not None and mode.host in referer else deny
    if isinstance(mode, RateLimit):
        if log is None:
            raise TypeError("a RateLimit policy is stateful; pass an ArrivalLog")
        return ALLOW if log.admit(request.client_id, request.arrival, mode) else deny
    raise TypeError(f"unknown policy mode {mode!r}")
