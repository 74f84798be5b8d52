"""HTML tokenizing, scoped rebranding and link rewriting."""

from .links import LinkMode, resolve_reference, rewrite_links
from .rules import RebrandRule, RebrandRuleSet, RuleError, Scope, apply_rules, naive_replace
from .tokenizer import (
    Attr,
    Comment,
    Doctype,
    EndTag,
    HtmlToken,
    RawText,
    StartTag,
    Text,
    serialize_tokens,
    text_content,
    tokenize_html,
)


def rebrand(body: bytes, rules: RebrandRuleSet, upstream_base: str | None = None,
            link_mode: LinkMode = LinkMode.OFF) -> bytes:
    """Tokenize, optionally rewrite links, apply rules and serialize."""
    tokens = tokenize_html(body)
    if upstream_base is not None:
        tokens = rewrite_links(tokens, upstream_base, link_mode)
    return serialize_tokens(apply_rules(tokens, rules))


__all__ = [
    "Attr", "Comment", "Doctype", "EndTag", "HtmlToken", "LinkMode", "RawText",
    "RebrandRule", "RebrandRuleSet", "RuleError", "Scope", "StartTag", "Text",
    "apply_rules", "naive_replace", "rebrand", "resolve_reference", "rewrite_links",
    "serialize_tokens", "text_content", "tokenize_html",
]
