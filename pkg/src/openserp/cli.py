"""Command-line entry point: ``mock``, ``proxy`` and ``audit`` subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import ipaddress
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from .auditor import Verdict, render_report, run_audit
from .config import ConfigError, ToolConfig, load_config
from .engine_model import EngineTarget, SearchQuery
from .fetcher import DEFAULT_LIMITS
from .mock_engine import serve_mock
from .proxy_server import serve_proxy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BY_VERDICT = {
    Verdict.PROTECTED: 0,
    Verdict.OPEN: 3,
    Verdict.INCONCLUSIVE: 4,
    Verdict.UNREACHABLE: 5,
}
LIVE_FLAG = "--live-i-understand"

log = logging.getLogger("openserp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def exit_code_for(verdict: Verdict) -> int:
    return EXIT_BY_VERDICT[Verdict(verdict)]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="openserp", description=__doc__)
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", metavar="{mock,proxy,audit}", parser_class=_Parser)
    sub.required = True

    mock = sub.add_parser("mock", help="run a mock search engine scenario")
    mock.add_argument("--scenario", required=True)
    mock.add_argument("--listen", help="host:port, overrides the scenario's address")
    mock.add_argument("--config", type=Path)

    proxy = sub.add_parser("proxy", help="run the rebranding proxy")
    proxy.add_argument("--config", type=Path)
    proxy.add_argument("--listen", help="host:port, overrides proxy.listen")
    proxy.add_argument("--naive", action="store_true",
                       help="line-concatenated body and whole-document replace, markup-blind")
    proxy.add_argument(LIVE_FLAG, dest="live", action="store_true",
                       help="allow a non-loopback upstream")

    audit = sub.add_parser("audit", help="probe one target and report its openness")
    audit.add_argument("--target", required=True)
    audit.add_argument("--profiles", required=True, help="comma-separated profile names")
    audit.add_argument("--query", default="sample")
    audit.add_argument("--format", choices=("json", "text"), default="json")
    audit.add_argument("--out", type=Path, help="write the report here instead of stdout")
    audit.add_argument("--config", type=Path)
    audit.add_argument("--delay-ms", type=int, default=0, help="pause between probes")
    audit.add_argument("--timeout", type=float, default=DEFAULT_LIMITS.timeout)
    audit.add_argument(LIVE_FLAG, dest="live", action="store_true",
                       help="allow probing a non-loopback target")
    return parser


def is_loopback(target: EngineTarget) -> bool:
    host = target.host
    if host == "localhost":
        return True
    try:
        return ipaddress.ip_address(host).is_loopback
    except ValueError:
        return False


def _require_loopback(target: EngineTarget, live: bool) -> None:
    if not live and not is_loopback(target):
        raise UsageError(f"target {target.name!r} is not a loopback address; pass {LIVE_FLAG} to probe it")


def _serve(server, what: str) -> int:
    print(f"{what} listening on {server.url}", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.httpd.server_close()
    return EXIT_OK


def cmd_mock(args, cfg: ToolConfig) -> int:
    scenario = cfg.scenario(args.scenario)
    return _serve(serve_mock(scenario, args.listen), f"mock engine {scenario.name!r}")


def cmd_proxy(args, cfg: ToolConfig) -> int:
    if cfg.proxy is None:
        raise ConfigError("proxy", "no proxy section configured")
    proxy = cfg.proxy
    if args.naive:
        proxy = dataclasses.replace(proxy, naive=True)
    _require_loopback(proxy.target, args.live)
    return _serve(serve_proxy(proxy, args.listen), f"proxy for {proxy.target.name!r}")


def cmd_audit(args, cfg: ToolConfig) -> int:
    target = cfg.target(args.target)
    names = [n.strip() for n in args.profiles.split(",") if n.strip()]
    if not names:
        raise UsageError("--profiles needs at least one profile name")
    profiles = [cfg.profile(n) for n in names]
    _require_loopback(target, args.live)
    report = run_audit(
        target,
        profiles,
        SearchQuery(args.query),
        limits=dataclasses.replace(DEFAULT_LIMITS, timeout=args.timeout),
        delay=args.delay_ms / 1000.0,
    )
    data = render_report(report, args.format)
    if args.out is not None:
        args.out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data + (b"" if data.endswith(b"\n") else b"\n"))
        sys.stdout.flush()
    log.info("audit %s: overall %s", target.name, report.overall.value)
    return exit_code_for(report.overall)


COMMANDS = {"mock": cmd_mock, "proxy": cmd_proxy, "audit": cmd_audit}


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, UsageError) as exc:
        print(f"openserp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"openserp: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())
