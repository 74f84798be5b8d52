"""JSON tool configuration: targets, profiles, rule sets, scenarios, proxy.

A config file is merged over the built-in loopback defaults; an entry with
the same name as a default replaces it. Every validation failure raises
:class:`ConfigError` naming the offending key path.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .engine_model import BARE_CLIENT, BROWSER_LIKE, JAVA_CLIENT, EngineTarget, RequestProfile
from .mock_engine import (
    BUILTIN_SCENARIOS,
    RESULTS_MARKER,
    AllowAll,
    DenyUserAgents,
    ProtectionPolicy,
    RateLimit,
    RequireReferer,
    ScenarioConfig,
)
from .proxy_server import DEFAULT_FORM_PARAM, DEFAULT_OWN_BRAND, ProxyConfig
from .rebrander import LinkMode, RebrandRule, RebrandRuleSet, Scope


class ConfigError(ValueError):
    def __init__(self, key: str, message: str) -> None:
        self.key = key
        super().__init__(f"config key {key!r}: {message}")


@dataclass
class ToolConfig:
    targets: dict[str, EngineTarget] = field(default_factory=dict)
    profiles: dict[str, RequestProfile] = field(default_factory=dict)
    rule_sets: dict[str, RebrandRuleSet] = field(default_factory=dict)
    scenarios: dict[str, ScenarioConfig] = field(default_factory=dict)
    proxy: ProxyConfig | None = None

    def target(self, name: str) -> EngineTarget:
        try:
            return self.targets[name]
        except KeyError:
            raise ConfigError("targets", f"no target named {name!r}") from None

    def profile(self, name: str) -> RequestProfile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ConfigError("profiles", f"no profile named {name!r}") from None

    def scenario(self, name: str) -> ScenarioConfig:
        try:
            return self.scenarios[name]
        except KeyError:
            raise ConfigError("scenarios", f"no scenario named {name!r}") from None


def default_config() -> ToolConfig:
    """Loopback-only defaults matching the built-in mock scenarios."""
    targets = {
        s.name: EngineTarget(
            name=s.name,
            base_url=f"http://{s.listen_address}/search",
            result_markers=(RESULTS_MARKER,),
            brand_tokens=(s.brand,),
        )
        for s in BUILTIN_SCENARIOS.values()
    }
    rule_sets = {
        "yahoo-to-kalyan": RebrandRuleSet.single("MockYahoo!", "Kalyan!"),
        "bing-to-kalyan": RebrandRuleSet.single("MockBing", "Kalyan"),
        "google-to-kalyan": RebrandRuleSet.single("MockGoogle", "Kalyan"),
    }
    profiles = {p.name: p for p in (BARE_CLIENT, BROWSER_LIKE, JAVA_CLIENT)}
    proxy = ProxyConfig(target=targets["yahoo-like"], rules=rule_sets["yahoo-to-kalyan"])
    return ToolConfig(targets, profiles, rule_sets, dict(BUILTIN_SCENARIOS), proxy)


def _expect(value: Any, kind: type | tuple, key: str) -> Any:
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ConfigError(key, f"expected {names}, got {type(value).__name__}")
    return value


def _get(obj: dict, name: str, key: str, kind, default: Any = ...) -> Any:
    if name not in obj:
        if default is ...:
            raise ConfigError(f"{key}.{name}", "required key is missing")
        return default
    return _expect(obj[name], kind, f"{key}.{name}")


def _str_list(obj: dict, name: str, key: str, default: Any = ...) -> tuple[str, ...]:
    items = _get(obj, name, key, list, default)
    return tuple(_expect(v, str, f"{key}.{name}[{i}]") for i, v in enumerate(items))


def _named_list(doc: dict, section: str, parse) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for i, entry in enumerate(_get(doc, section, "$", list, [])):
        key = f"{section}[{i}]"
        _expect(entry, dict, key)
        name = _get(entry, "name", key, str)
        if name in out:
            raise ConfigError(f"{key}.name", f"duplicate name {name!r}")
        try:
            out[name] = parse(entry, key)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(key, str(exc)) from exc
    return out


def _parse_target(entry: dict, key: str) -> EngineTarget:
    return EngineTarget(
        name=entry["name"],
        base_url=_get(entry, "base_url", key, str),
        query_param=_get(entry, "query_param", key, str, "q"),
        result_markers=_str_list(entry, "result_markers", key),
        brand_tokens=_str_list(entry, "brand_tokens", key, []),
    )


def _parse_profile(entry: dict, key: str) -> RequestProfile:
    extra = []
    for i, pair in enumerate(_get(entry, "extra_headers", key, list, [])):
        k = f"{key}.extra_headers[{i}]"
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise ConfigError(k, "expected a [name, value] pair of strings")
        extra.append((pair[0], pair[1]))
    return RequestProfile(
        name=entry["name"],
        user_agent=_get(entry, "user_agent", key, (str, type(None)), None),
        referer=_get(entry, "referer", key, (str, type(None)), None),
        extra_headers=tuple(extra),
    )


def _parse_rules(items: Any, key: str) -> RebrandRuleSet:
    _expect(items, list, key)
    rules = []
    for i, r in enumerate(items):
        k = f"{key}[{i}]"
        _expect(r, dict, k)
        scope = _get(r, "scope", k, str, Scope.TEXT_ONLY.value)
        try:
            rules.append(RebrandRule(_get(r, "from", k, str), _get(r, "to", k, str), Scope(scope)))
        except ValueError as exc:
            raise ConfigError(k, str(exc)) from exc
    try:
        return RebrandRuleSet(tuple(rules))
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc


def parse_policy(obj: Any, key: str) -> ProtectionPolicy:
    _expect(obj, dict, key)
    mode = _get(obj, "mode", key, str)
    status = _get(obj, "deny_status", key, int, 403)
    try:
        if mode == "AllowAll":
            m = AllowAll()
        elif mode == "DenyUserAgents":
            m = DenyUserAgents(_str_list(obj, "substrings", key, []),
                               _get(obj, "deny_missing_ua", key, bool, False))
        elif mode == "RequireReferer":
            m = RequireReferer(_get(obj, "host", key, str))
        elif mode == "RateLimit":
            m = RateLimit(_get(obj, "max_requests", key, int),
                          float(_get(obj, "window_seconds", key, (int, float))))
        else:
            raise ConfigError(f"{key}.mode", f"unknown policy mode {mode!r}")
        return ProtectionPolicy(m, status)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc


def _parse_scenario(entry: dict, key: str) -> ScenarioConfig:
    return ScenarioConfig(
        name=entry["name"],
        policy=parse_policy(_get(entry, "policy", key, dict), f"{key}.policy"),
        brand=_get(entry, "brand", key, str),
        listen_address=_get(entry, "listen", key, str, "127.0.0.1:0"),
    )


def _parse_proxy(obj: dict, cfg: ToolConfig) -> ProxyConfig:
    key = "proxy"
    _expect(obj, dict, key)

    def ref(name: str, table: dict, default: Any = ...):
        value = _get(obj, name, key, str, default)
        if value is None:
            return None
        if value not in table:
            raise ConfigError(f"{key}.{name}", f"unresolved reference {value!r}")
        return table[value]

    rules = ref("rules", cfg.rule_sets, None) or RebrandRuleSet()
    try:
        return ProxyConfig(
            target=ref("target", cfg.targets),
            listen_address=_get(obj, "listen", key, str, "127.0.0.1:8080"),
            profile=ref("profile", cfg.profiles, "bare-client"),
            rules=rules,
            own_brand=_get(obj, "own_brand", key, str, DEFAULT_OWN_BRAND),
            form_param=_get(obj, "form_param", key, str, DEFAULT_FORM_PARAM),
            link_mode=LinkMode(_get(obj, "link_mode", key, str, LinkMode.ABSOLUTE_TO_UPSTREAM.value)),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc


KNOWN_SECTIONS = frozenset({"targets", "profiles", "rule_sets", "scenarios", "proxy"})


def parse_config(doc: Any, base: ToolConfig | None = None) -> ToolConfig:
    _expect(doc, dict, "$")
    for section in doc:
        if section not in KNOWN_SECTIONS:
            raise ConfigError(section, "unknown top-level key")
    cfg = base if base is not None else default_config()
    cfg.targets.update(_named_list(doc, "targets", _parse_target))
    cfg.profiles.update(_named_list(doc, "profiles", _parse_profile))
    rule_sets = _get(doc, "rule_sets", "$", dict, {})
    for name, items in rule_sets.items():
        cfg.rule_sets[name] = _parse_rules(items, f"rule_sets.{name}")
    cfg.scenarios.update(_named_list(doc, "scenarios", _parse_scenario))
    if doc.get("proxy") is not None:
        cfg.proxy = _parse_proxy(doc["proxy"], cfg)
    elif cfg.proxy is not None and cfg.proxy.target.name in cfg.targets:
        # keep the default proxy pointed at an overridden target of the same name
        cfg.proxy = dataclasses.replace(cfg.proxy, target=cfg.targets[cfg.proxy.target.name])
    return cfg


def load_config(path: str | Path | None) -> ToolConfig:
    if path is None:
        return default_config()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("$", f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(doc)
