import itertools
import json
import random
from datetime import datetime, timedelta, timezone

import pytest

from openserp.auditor import (
    AuditReport,
    EmptyProfileList,
    Probe,
    Verdict,
    classify,
    classify_response,
    overall_verdict,
    parse_report,
    render_report,
    run_audit,
)
from openserp.engine_model import BARE_CLIENT, BROWSER_LIKE, JAVA_CLIENT, EngineTarget, SearchQuery
from openserp.fetcher import BodyTooLarge, FetchResult, Timeout, TooManyRedirects, Unreachable

TARGET = EngineTarget("t", "http://127.0.0.1:1/search", result_markers=("mocksearch-results", "alt-marker"))
URL = "http://127.0.0.1:1/search?q=sample"


def result(status, body=b""):
    return FetchResult(status, (), body, URL)


def expected_overall(verdicts):
    """Straight transcription of the report invariants."""
    if Verdict.OPEN in verdicts:
        return Verdict.OPEN
    if Verdict.PROTECTED in verdicts:
        return Verdict.PROTECTED
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.UNREACHABLE


def test_403_is_protected():
    assert classify_response(result(403, b"<!-- mocksearch-results -->"), TARGET) is Verdict.PROTECTED


def test_unreachable_error():
    assert classify_response(Unreachable(URL), TARGET) is Verdict.UNREACHABLE
    assert classify_response(Timeout(URL), TARGET) is Verdict.UNREACHABLE


def test_marker_means_open():
    c = classify(result(200, b"<html><!-- alt-marker -->"), TARGET)
    assert c.verdict is Verdict.OPEN and c.evidence == "alt-marker"


@pytest.mark.parametrize("status", [200, 204, 301, 304, 401, 404, 429, 500, 503])
def test_other_outcomes_inconclusive(status):
    c = classify(result(status, b"no markers here"), TARGET)
    assert c.verdict is Verdict.INCONCLUSIVE
    assert str(status) in c.evidence


@pytest.mark.parametrize("error", [TooManyRedirects(URL), BodyTooLarge(URL)])
def test_non_network_fetch_errors_inconclusive(error):
    assert classify(error, TARGET) == classify(error, TARGET)
    assert classify_response(error, TARGET) is Verdict.INCONCLUSIVE


def test_verdict_totality():
    bodies = (b"<!-- mocksearch-results -->", b"nothing")
    errors = (Unreachable(URL), Timeout(URL), TooManyRedirects(URL), BodyTooLarge(URL))
    seen = set()
    for status in range(100, 600):
        for body in bodies:
            v = classify_response(result(status, body), TARGET)
            assert isinstance(v, Verdict)
            seen.add(v)
            if status == 200:
                assert (v is Verdict.OPEN) == (body == bodies[0])
            elif status == 403:
                assert v is Verdict.PROTECTED
            else:
                assert v is Verdict.INCONCLUSIVE
    for e in errors:
        seen.add(classify_response(e, TARGET))
    assert seen == set(Verdict)


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_overall_derivation_exhaustive(size):
    for combo in itertools.product(list(Verdict), repeat=size):
        assert overall_verdict(combo) is expected_overall(combo)


def test_empty_profile_list():
    with pytest.raises(EmptyProfileList):
        run_audit(TARGET, [])


def test_yahoo_like_is_open(mock_engine):
    _, target = mock_engine("yahoo-like")
    report = run_audit(target, [BARE_CLIENT])
    assert report.overall is Verdict.OPEN
    assert report.probes == (Probe("bare-client", 200, Verdict.OPEN, "mocksearch-results"),)


def test_google_like_is_protected(mock_engine):
    _, target = mock_engine("google-like")
    report = run_audit(target, [BARE_CLIENT, JAVA_CLIENT])
    assert report.overall is Verdict.PROTECTED
    assert [p.status for p in report.probes] == [403, 403]


def test_google_like_with_browser_profile_is_open(mock_engine):
    _, target = mock_engine("google-like")
    report = run_audit(target, [BARE_CLIENT, BROWSER_LIKE])
    assert [p.verdict for p in report.probes] == [Verdict.PROTECTED, Verdict.OPEN]
    assert report.overall is Verdict.OPEN


def test_probe_failures_do_not_abort(closed_port):
    calls = []

    def flaky(url, profile, limits):
        calls.append(profile.name)
        if profile.name == "bare-client":
            raise Unreachable(url, "refused")
        return result(403)

    report = run_audit(TARGET, [BARE_CLIENT, JAVA_CLIENT], fetch_fn=flaky)
    assert calls == ["bare-client", "java-client"]
    assert [p.status for p in report.probes] == ["Unreachable", 403]
    assert report.overall is Verdict.PROTECTED


def test_unreachable_target(closed_port):
    t = EngineTarget("gone", f"http://127.0.0.1:{closed_port}/search", result_markers=["m"])
    report = run_audit(t, [BARE_CLIENT])
    assert report.overall is Verdict.UNREACHABLE
    assert report.probes[0].status == "Unreachable"


def test_probe_query_default_is_sample():
    urls = []
    run_audit(TARGET, [BARE_CLIENT], fetch_fn=lambda u, p, l: urls.append(u) or result(403))
    assert urls == [URL]


def test_audits_are_deterministic(mock_engine):
    _, target = mock_engine("google-like")
    profiles = [BARE_CLIENT, BROWSER_LIKE, JAVA_CLIENT]
    a = run_audit(target, profiles, SearchQuery("sample"))
    b = run_audit(target, profiles, SearchQuery("sample"))
    assert (a.target, a.probes, a.overall) == (b.target, b.probes, b.overall)


def _random_report(rng: random.Random) -> AuditReport:
    probes = []
    for i in range(rng.randint(1, 5)):
        verdict = rng.choice(list(Verdict))
        status = rng.choice([200, 403, 429, "Unreachable", "Timeout", "TooManyRedirects"])
        evidence = rng.choice(["mocksearch-results", "HTTP 403", "Unreachable: refused", "é \"quoted\""])
        probes.append(Probe(f"profile-{i}", status, verdict, evidence))
    ts = datetime(2011, 1, 1, tzinfo=timezone.utc) + timedelta(microseconds=rng.randrange(10**15))
    return AuditReport(f"target-{rng.randrange(100)}", tuple(probes), overall_verdict(p.verdict for p in probes), ts)


def test_json_round_trip():
    rng = random.Random(2011)
    for _ in range(200):
        report = _random_report(rng)
        assert parse_report(render_report(report, "json")) == report


def test_json_schema():
    report = AuditReport("google-like", (Probe("bare-client", 403, Verdict.PROTECTED, "HTTP 403"),),
                         Verdict.PROTECTED, datetime(2026, 10, 14, 12, 0, 0, tzinfo=timezone.utc))
    data = render_report(report, "json")
    assert b'"overall":"Protected"' in data
    assert json.loads(data) == {
        "target": "google-like",
        "overall": "Protected",
        "probes": [{"profile": "bare-client", "status": 403, "verdict": "Protected", "evidence": "HTTP 403"}],
        "timestamp": "2026-10-14T12:00:00Z",
    }


def test_text_table_has_one_row_per_probe():
    report = _random_report(random.Random(4))
    lines = render_report(report, "text").decode().splitlines()
    header = next(i for i, line in enumerate(lines) if line.startswith("PROFILE"))
    rows = lines[header + 1:]
    assert len(rows) == len(report.probes)
    for row, probe in zip(rows, report.probes):
        assert row.startswith(probe.profile) and probe.verdict.value in row
