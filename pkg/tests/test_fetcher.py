import threading

import pytest

from conftest import http_response
from openserp.engine_model import BARE_CLIENT, RequestProfile, SearchQuery, build_query_url
from openserp.fetcher import (
    BodyTooLarge,
    FetchLimits,
    FetchResult,
    Timeout,
    TooManyRedirects,
    Unreachable,
    fetch,
    naive_body,
)
from openserp.mock_engine import RESULTS_MARKER

PATTERN = bytes((i * 7 + (i >> 5)) % 256 for i in range(10 * 1024)) + b"\r\n\x00\n\r"


def _head_lines(raw: bytes) -> list[bytes]:
    return raw.split(b"\r\n\r\n", 1)[0].split(b"\r\n")[1:]


def test_open_scenario_returns_results(mock_engine):
    _, target = mock_engine("yahoo-like")
    result = fetch(build_query_url(target, SearchQuery("sample")), BARE_CLIENT)
    assert result.status == 200
    assert RESULTS_MARKER.encode() in result.body
    assert result.header("content-type") == "text/html; charset=utf-8"


def test_google_like_bare_client_is_403_not_an_exception(mock_engine):
    _, target = mock_engine("google-like")
    result = fetch(build_query_url(target, SearchQuery("sample")), BARE_CLIENT)
    assert result.status == 403
    assert b"Forbidden by DenyUserAgents" in result.body


def test_closed_port_is_unreachable(closed_port):
    url = f"http://127.0.0.1:{closed_port}/search?q=x"
    with pytest.raises(Unreachable) as exc:
        fetch(url, BARE_CLIENT)
    assert exc.value.url == url
    assert exc.value.kind == "Unreachable"


def test_body_fidelity(raw_server):
    srv = raw_server(lambda target: http_response(200, PATTERN))
    result = fetch(srv.url + "/pattern", BARE_CLIENT)
    assert result.body == PATTERN
    assert len(result.body) == len(PATTERN)


def test_error_statuses_are_data(raw_server):
    for status in (401, 403, 404, 429, 500, 503):
        srv = raw_server(lambda target, s=status: http_response(s, b"nope\n"))
        result = fetch(srv.url + "/", BARE_CLIENT)
        assert result.status == status
        assert result.body == b"nope\n"


def test_bare_profile_sends_no_user_agent(raw_server):
    srv = raw_server(lambda target: http_response(200, b"ok"))
    fetch(srv.url + "/echo?q=1", BARE_CLIENT)
    lines = _head_lines(srv.requests[0])
    names = [line.split(b":", 1)[0].lower() for line in lines]
    assert b"user-agent" not in names
    assert b"referer" not in names
    assert b"accept-encoding: identity" in [line.lower() for line in lines]
    assert srv.requests[0].startswith(b"GET /echo?q=1 HTTP/1.1\r\n")


def test_profile_headers_sent_exactly(raw_server):
    srv = raw_server(lambda target: http_response(200, b"ok"))
    profile = RequestProfile("p", user_agent="UA/1", referer="http://ref.example/", extra_headers=[("X-Probe", "7")])
    fetch(srv.url + "/", profile)
    lines = _head_lines(srv.requests[0])
    assert b"User-Agent: UA/1" in lines
    assert b"Referer: http://ref.example/" in lines
    assert b"X-Probe: 7" in lines


def test_redirects_followed_with_same_profile(raw_server):
    def reply(target):
        n = int(target.rsplit("/", 1)[1])
        if n == 0:
            return http_response(200, b"done")
        return http_response(302, b"", [("Location", f"/r/{n - 1}")])

    srv = raw_server(reply)
    profile = RequestProfile("p", user_agent="UA/1")
    result = fetch(srv.url + "/r/3", profile)
    assert result.status == 200 and result.body == b"done"
    assert result.final_url == srv.url + "/r/0"
    assert len(srv.requests) == 4
    assert all(b"User-Agent: UA/1" in _head_lines(r) for r in srv.requests)


def test_too_many_redirects(raw_server):
    srv = raw_server(lambda target: http_response(302, b"", [("Location", "/loop")]))
    with pytest.raises(TooManyRedirects):
        fetch(srv.url + "/loop", BARE_CLIENT, FetchLimits(max_redirects=2))
    assert len(srv.requests) == 3


def test_body_too_large(raw_server):
    srv = raw_server(lambda target: http_response(200, b"x" * 5000))
    with pytest.raises(BodyTooLarge):
        fetch(srv.url + "/", BARE_CLIENT, FetchLimits(max_body_bytes=4096))
    assert fetch(srv.url + "/", BARE_CLIENT, FetchLimits(max_body_bytes=5000)).body == b"x" * 5000


def test_timeout(raw_server):
    srv = raw_server(lambda target: http_response(200, b"late"), delay=1.0)
    with pytest.raises(Timeout):
        fetch(srv.url + "/", BARE_CLIENT, FetchLimits(timeout=0.2))


def test_concurrent_fetches_are_independent(raw_server):
    srv = raw_server(lambda target: http_response(200, target.encode()))
    results = {}

    def worker(i):
        results[i] = fetch(f"{srv.url}/{i}", BARE_CLIENT).body

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == {i: f"/{i}".encode() for i in range(16)}


def test_status_range_invariant():
    with pytest.raises(ValueError):
        FetchResult(600, (), b"", "http://h/")


def test_naive_body_drops_line_breaks():
    assert naive_body(b"a\r\nb\nc\rd") == b"abcd"
