from __future__ import annotations

from typing import Iterable, Sequence

Symbol = str
Symbols = tuple[str, ...]


def parse_symbols(text: str | Sequence[str]) -> Symbols:
    """Turn user text into a token tuple.

    Text containing whitespace is split on it ("0 1 1"); otherwise every
    character is a token ("011"). Non-string sequences are taken as-is.
    """
    if not isinstance(text, str):
        return tuple(str(tok) for tok in text)
    stripped = text.strip()
    if not stripped:
        return ()
    if any(ch.isspace() for ch in stripped):
        return tuple(stripped.split())
    return tuple(stripped)


def render_symbols(symbols: Iterable[str]) -> str:
    tokens = list(symbols)
    if all(len(tok) == 1 for tok in tokens):
        return "".join(tokens)
    return " ".join(tokens)


def as_symbols(value: str | Sequence[str]) -> Symbols:
    # Plain strings are character sequences here; use parse_symbols for user text.
    return tuple(value)
