"""Scoped brand substitution over a token stream."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

from .tokenizer import HtmlToken, RawText, StartTag, Text


class Scope(str, enum.Enum):
    TEXT_ONLY = "TextOnly"
    EVERYWHERE = "Everywhere"


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class RebrandRule:
    from_token: str
    to_token: str
    scope: Scope = Scope.TEXT_ONLY

    def __post_init__(self) -> None:
        object.__setattr__(self, "scope", Scope(self.scope))
        if not self.from_token:
            raise RuleError("from_token must be non-empty")
        if self.from_token == self.to_token:
            raise RuleError(f"rule {self.from_token!r} maps onto itself")

    @property
    def needle(self) -> bytes:
        return self.from_token.encode("utf-8")

    @property
    def replacement(self) -> bytes:
        return self.to_token.encode("utf-8")

    def inverse(self) -> RebrandRule:
        return RebrandRule(self.to_token, self.from_token, self.scope)


@dataclass(frozen=True)
class RebrandRuleSet:
    rules: tuple[RebrandRule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        seen = set()
        for rule in self.rules:
            if rule.from_token in seen:
                raise RuleError(f"duplicate from_token {rule.from_token!r}")
            seen.add(rule.from_token)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def inverse(self) -> RebrandRuleSet:
        """Rules undoing this set, applied in reverse order.

        Only a true inverse when no ``to_token`` already occurs in the source.
        """
        return RebrandRuleSet(tuple(r.inverse() for r in reversed(self.rules)))

    @classmethod
    def single(cls, from_token: str, to_token: str, scope: Scope = Scope.TEXT_ONLY) -> RebrandRuleSet:
        return cls((RebrandRule(from_token, to_token, scope),))


def _apply_one(token: HtmlToken, rule: RebrandRule) -> HtmlToken:
    needle, repl = rule.needle, rule.replacement
    if isinstance(token, Text):
        if needle in token.data:
            return dataclasses.replace(token, data=token.data.replace(needle, repl))
        return token
    if rule.scope is not Scope.EVERYWHERE:
        return token
    if isinstance(token, RawText):
        if needle in token.data:
            return dataclasses.replace(token, data=token.data.replace(needle, repl))
        return token
    if isinstance(token, StartTag) and any(a.value and needle in a.value for a in token.attrs):
        attrs = tuple(
            dataclasses.replace(a, value=a.value.replace(needle, repl))
            if a.value and needle in a.value
            else a
            for a in token.attrs
        )
        return dataclasses.replace(token, attrs=attrs)
    return token


def apply_rules(tokens: list[HtmlToken], rules: RebrandRuleSet) -> list[HtmlToken]:
    """Apply each rule, in order, over the output of the previous one.

    Text payloads (including the title's text) are always in scope;
    ``Everywhere`` rules also rewrite attribute values and script/style
    bodies. Tag names, comments and doctypes are never touched.
    """
    out = list(tokens)
    for rule in rules:
        out = [_apply_one(t, rule) for t in out]
    return out


def naive_replace(body: bytes, rules: RebrandRuleSet) -> bytes:
    """Whole-document literal replacement, blind to markup."""
    for rule in rules:
        body = body.replace(rule.needle, rule.replacement)
    return body


__all__ = ["RebrandRule", "RebrandRuleSet", "RuleError", "Scope", "apply_rules", "naive_replace"]
