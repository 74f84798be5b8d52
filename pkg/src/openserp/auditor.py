"""Classify search endpoints as Open or Protected and report the verdicts."""

from __future__ import annotations

import enum
import json
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .engine_model import EngineTarget, RequestProfile, SearchQuery, build_query_url
from .fetcher import DEFAULT_LIMITS, FetchError, FetchLimits, FetchResult, fetch

DEFAULT_PROBE_QUERY = SearchQuery("sample")
UNREACHABLE_KINDS = frozenset({"Unreachable", "Timeout"})


class Verdict(str, enum.Enum):
    OPEN = "Open"
    PROTECTED = "Protected"
    INCONCLUSIVE = "Inconclusive"
    UNREACHABLE = "Unreachable"


class EmptyProfileList(ValueError):
    def __init__(self) -> None:
        super().__init__("an audit needs at least one request profile")


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    evidence: str


@dataclass(frozen=True)
class Probe:
    profile: str
    status: int | str  # HTTP status, or the fetch error kind
    verdict: Verdict
    evidence: str


@dataclass(frozen=True)
class AuditReport:
    target: str
    probes: tuple[Probe, ...]
    overall: Verdict
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


def classify(outcome: FetchResult | FetchError, target: EngineTarget) -> Classification:
    """Total mapping from a fetch outcome to a verdict plus its evidence."""
    if isinstance(outcome, FetchError):
        if outcome.kind in UNREACHABLE_KINDS:
            detail = f": {outcome.detail}" if outcome.detail else ""
            return Classification(Verdict.UNREACHABLE, outcome.kind + detail)
        return Classification(Verdict.INCONCLUSIVE, outcome.kind)
    status = outcome.status
    if status == 200:
        for marker in target.result_markers:
            if marker.encode("utf-8") in outcome.body:
                return Classification(Verdict.OPEN, marker)
        return Classification(Verdict.INCONCLUSIVE, "HTTP 200 without result markers")
    if status == 403:
        return Classification(Verdict.PROTECTED, "HTTP 403")
    return Classification(Verdict.INCONCLUSIVE, f"HTTP {status}")


def classify_response(outcome: FetchResult | FetchError, target: EngineTarget) -> Verdict:
    return classify(outcome, target).verdict


def overall_verdict(verdicts: Iterable[Verdict]) -> Verdict:
    verdicts = set(verdicts)
    for v in (Verdict.OPEN, Verdict.PROTECTED, Verdict.INCONCLUSIVE):
        if v in verdicts:
            return v
    return Verdict.UNREACHABLE


def run_audit(
    target: EngineTarget,
    profiles: Sequence[RequestProfile],
    probe_query: SearchQuery = DEFAULT_PROBE_QUERY,
    *,
    limits: FetchLimits = DEFAULT_LIMITS,
    delay: float = 0.0,
    fetch_fn: Callable[[str, RequestProfile, FetchLimits], FetchResult] = fetch,
    now: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
) -> AuditReport:
    """Probe ``target`` once per profile, sequentially and in order."""
    if not profiles:
        raise EmptyProfileList()
    url = build_query_url(target, probe_query)
    probes = []
    for i, profile in enumerate(profiles):
        if i and delay > 0:
            time.sleep(delay)
        try:
            outcome: FetchResult | FetchError = fetch_fn(url, profile, limits)
        except FetchError as exc:
            outcome = exc
        c = classify(outcome, target)
        status = outcome.kind if isinstance(outcome, FetchError) else outcome.status
        probes.append(Probe(profile.name, status, c.verdict, c.evidence))
    return AuditReport(
        target=target.name,
        probes=tuple(probes),
        overall=overall_verdict(p.verdict for p in probes),
        timestamp=now(),
    )


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_timestamp(text: str) -> datetime:
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        raise ValueError(f"timestamp without offset: {text!r}")
    return ts.astimezone(timezone.utc)


def report_to_dict(report: AuditReport) -> dict:
    return {
        "target": report.target,
        "overall": report.overall.value,
        "probes": [
            {"profile": p.profile, "status": p.status, "verdict": p.verdict.value, "evidence": p.evidence}
            for p in report.probes
        ],
        "timestamp": format_timestamp(report.timestamp),
    }


def report_from_dict(data: dict) -> AuditReport:
    return AuditReport(
        target=data["target"],
        probes=tuple(
            Probe(p["profile"], p["status"], Verdict(p["verdict"]), p["evidence"]) for p in data["probes"]
        ),
        overall=Verdict(data["overall"]),
        timestamp=parse_timestamp(data["timestamp"]),
    )


def _text_table(report: AuditReport) -> str:
    header = ("PROFILE", "STATUS", "VERDICT", "EVIDENCE")
    rows = [(p.profile, str(p.status), p.verdict.value, p.evidence) for p in report.probes]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(3)]

    def line(row):
        return "  ".join(cell.ljust(w) for cell, w in zip(row[:3], widths)) + "  " + row[3]

    out = [
        f"target:    {report.target}",
        f"overall:   {report.overall.value}",
        f"timestamp: {format_timestamp(report.timestamp)}",
        "",
        line(header).rstrip(),
        *(line(r).rstrip() for r in rows),
    ]
    return "\n".join(out) + "\n"


def render_report(report: AuditReport, format: str = "json") -> bytes:
    if format == "json":
        return json.dumps(report_to_dict(report), separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    if format == "text":
        return _text_table(report).encode("utf-8")
    raise ValueError(f"unknown report format {format!r}")


def parse_report(data: bytes | str) -> AuditReport:
    return report_from_dict(json.loads(data))
