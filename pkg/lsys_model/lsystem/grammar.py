from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, Sequence

from ..symbols import Symbols, parse_symbols, render_symbols

_LOGGER = logging.getLogger(__name__)


class GrammarError(ValueError):
    """Raised when a grammar violates the D0L well-formedness rules."""


class GrammarParseError(GrammarError):
    def __init__(self, message: str, line_no: int | None = None, line: str = "") -> None:
        self.line_no = line_no
        self.line = line
        if line_no is not None:
            message = f"line {line_no}: {message}: {line.strip()!r}"
        super().__init__(message)


@dataclass(frozen=True)
class Grammar:
    """Deterministic context-free L-system: one rule per symbol, axiom of length >= 1."""

    axiom: Symbols
    rules: Mapping[str, Symbols]
    name: str = ""
    alphabet: frozenset[str] = field(default=frozenset())

    def __post_init__(self) -> None:
        axiom = tuple(self.axiom)
        rules = {str(lhs): tuple(rhs) for lhs, rhs in self.rules.items()}
        if not axiom:
            raise GrammarError("Grammar axiom must not be empty")

        seen = set(self.alphabet) | set(axiom) | set(rules)
        for rhs in rules.values():
            seen.update(rhs)
        for symbol in seen:
            if not symbol or any(ch.isspace() for ch in symbol):
                raise GrammarError(f"Invalid symbol token: {symbol!r}")
        missing = sorted(symbol for symbol in seen if symbol not in rules)
        if missing:
            raise GrammarError(f"symbol {missing[0]} has no rule")

        object.__setattr__(self, "axiom", axiom)
        object.__setattr__(self, "rules", MappingProxyType(rules))
        object.__setattr__(self, "alphabet", frozenset(seen))

    def __hash__(self) -> int:
        return hash((self.axiom, tuple(sorted(self.rules.items())), self.name, self.alphabet))

    @property
    def label(self) -> str:
        return self.name or "grammar"

    def rhs(self, symbol: str) -> Symbols:
        return self.rules[symbol]

    def relabel(self, mapping: Mapping[str, str]) -> "Grammar":
        """Rename symbols; unmapped symbols keep their token."""
        if not mapping:
            return self

        def _map(symbols: Sequence[str]) -> Symbols:
            return tuple(mapping.get(s, s) for s in symbols)

        rules: dict[str, Symbols] = {}
        for lhs, rhs in self.rules.items():
            new_lhs = mapping.get(lhs, lhs)
            if new_lhs in rules:
                raise GrammarError(f"Symbol mapping merges two rules onto {new_lhs!r}")
            rules[new_lhs] = _map(rhs)
        return Grammar(axiom=_map(self.axiom), rules=rules, name=self.name)

    def to_text(self) -> str:
        lines = [f"axiom: {' '.join(self.axiom)}"]
        for lhs in sorted(self.rules):
            lines.append(f"rule: {lhs} -> {' '.join(self.rules[lhs])}")
        return "\n".join(lines) + "\n"

    def describe(self) -> str:
        rules = ", ".join(f"{lhs} -> {render_symbols(self.rules[lhs])}" for lhs in sorted(self.rules))
        return f"{self.label}: axiom {render_symbols(self.axiom)}; {rules}"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_grammar(text: str, name: str = "") -> Grammar:
    axiom: Symbols | None = None
    rules: dict[str, Symbols] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        directive, sep, value = line.partition(":")
        if not sep:
            raise GrammarParseError("expected 'axiom:' or 'rule:' directive", line_no, raw)
        directive = directive.strip().lower()
        value = value.strip()
        if directive == "axiom":
            if axiom is not None:
                raise GrammarParseError("duplicate axiom", line_no, raw)
            tokens = tuple(value.split())
            if not tokens:
                raise GrammarParseError("empty axiom", line_no, raw)
            axiom = tokens
        elif directive == "rule":
            lhs, arrow, rhs = value.partition("->")
            lhs_tokens = lhs.split()
            if not arrow or len(lhs_tokens) != 1 or "->" in rhs:
                raise GrammarParseError("rule must read '<symbol> -> <symbols>'", line_no, raw)
            symbol = lhs_tokens[0]
            if symbol in rules:
                raise GrammarParseError(f"duplicate rule for symbol {symbol}", line_no, raw)
            rules[symbol] = tuple(rhs.split())
        else:
            raise GrammarParseError(f"unknown directive {directive!r}", line_no, raw)

    if axiom is None:
        raise GrammarParseError("empty axiom: no 'axiom:' line found")
    grammar = Grammar(axiom=axiom, rules=rules, name=name)
    _LOGGER.debug("Parsed grammar %s", grammar.describe())
    return grammar


def grammar_from_mapping(name: str, data: Mapping[str, Any]) -> Grammar:
    """Build a grammar from a YAML-style mapping ``{axiom: ..., rules: {sym: rhs}}``."""
    if not isinstance(data, Mapping):
        raise GrammarError(f"Grammar {name!r} must be a mapping with 'axiom' and 'rules'")
    raw_rules = data.get("rules")
    if not isinstance(raw_rules, Mapping):
        raise GrammarError(f"Grammar {name!r} needs a 'rules' mapping")
    axiom = parse_symbols(str(data.get("axiom", "")))
    rules = {str(lhs): parse_symbols(str(rhs)) for lhs, rhs in raw_rules.items()}
    return Grammar(axiom=axiom, rules=rules, name=name)


def _preset(name: str, axiom: str, **rules: str) -> Grammar:
    return Grammar(
        axiom=tuple(axiom.split()),
        rules={lhs.lstrip("_"): tuple(rhs.split()) for lhs, rhs in rules.items()},
        name=name,
    )


BUILTIN_GRAMMARS: Mapping[str, Grammar] = MappingProxyType(
    {
        "fib": _preset("fib", "0", _0="1", _1="0 1"),
        "bif": _preset("bif", "0", _0="1", _1="1 0"),
        "xor-ab": _preset("xor-ab", "a", a="a b", b="b a"),
        "xor-01": _preset("xor-01", "0", _0="1 0", _1="0 1"),
    }
)


def load_grammar(ref: str, extra: Mapping[str, Grammar] | None = None) -> Grammar:
    """Resolve a grammar reference: existing file, then configured name, then built-in."""
    path = Path(ref)
    if path.is_file():
        _LOGGER.debug("Loading grammar from file %s", path)
        return parse_grammar(path.read_text(encoding="utf-8"), name=path.stem)
    if extra and ref in extra:
        return extra[ref]
    if ref in BUILTIN_GRAMMARS:
        return BUILTIN_GRAMMARS[ref]
    known = ", ".join(sorted({*BUILTIN_GRAMMARS, *(extra or {})}))
    raise GrammarError(f"Unknown grammar {ref!r}: not a file and not one of {known}")
