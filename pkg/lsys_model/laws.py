"""String admissibility conditions as finite sets of forbidden n-grams."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .symbols import Symbols, as_symbols, parse_symbols, render_symbols

_LOGGER = logging.getLogger(__name__)

FIRST_LAW = "First Law"
SECOND_LAW = "Second Law"
# Third Law: a single 1 may be followed by either a 0 or a 1. It forbids
# nothing, so it has no gram; see third_law_witnesses().


class LawError(ValueError):
    """Invalid law set or input outside the law set's alphabet."""


class LawParseError(LawError):
    def __init__(self, message: str, line_no: int, line: str) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}: {line.strip()!r}")


class ConcatenationError(LawError):
    """A concatenation operand is itself ill-formed."""

    def __init__(self, argument: str, verdict: "Verdict") -> None:
        self.argument = argument
        self.verdict = verdict
        grams = ", ".join(render_symbols(v.gram) for v in verdict.violations)
        super().__init__(f"{argument} operand is ill-formed (contains {grams})")


def _contains(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    return any(tuple(haystack[i : i + n]) == tuple(needle) for i in range(len(haystack) - n + 1))


@dataclass(frozen=True)
class NGramLawSet:
    alphabet: frozenset[str]
    forbidden: frozenset[Symbols]
    names: Mapping[Symbols, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        grams = {tuple(g) for g in self.forbidden}
        alphabet = frozenset(self.alphabet)
        for gram in grams:
            if len(gram) < 2:
                raise LawError(f"Forbidden grams need length >= 2, got {render_symbols(gram)!r}")
            foreign = [s for s in gram if s not in alphabet]
            if foreign:
                raise LawError(f"Forbidden gram {render_symbols(gram)!r} uses symbol {foreign[0]!r} outside the alphabet")
        # Any gram containing another stored gram is redundant.
        kept = frozenset(g for g in grams if not any(o != g and _contains(g, o) for o in grams))
        dropped = grams - kept
        if dropped:
            _LOGGER.debug("Dropping redundant supergrams: %s", sorted(render_symbols(g) for g in dropped))
        names = {tuple(g): str(n) for g, n in dict(self.names).items() if tuple(g) in kept}
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "forbidden", kept)
        object.__setattr__(self, "names", MappingProxyType(names))

    def __hash__(self) -> int:
        return hash((self.alphabet, self.forbidden, tuple(sorted(self.names.items()))))

    @property
    def max_gram(self) -> int:
        return max((len(g) for g in self.forbidden), default=0)

    def law_name(self, gram: Symbols) -> str:
        return self.names.get(gram, f"*{render_symbols(gram)}")

    def describe(self) -> list[str]:
        return [
            f"{self.law_name(g)}: *{render_symbols(g)}"
            for g in sorted(self.forbidden, key=lambda g: (len(g), g))
        ]


@dataclass(frozen=True)
class Violation:
    position: int
    gram: Symbols
    law: str
    # (row, column) when the checked string came from a 2-D history.
    coordinates: tuple[int, int] | None = None

    def to_record(self) -> dict[str, Any]:
        record: dict[str, Any] = {
            "position": self.position,
            "gram": render_symbols(self.gram),
            "law": self.law,
        }
        if self.coordinates is not None:
            record["row"], record["column"] = self.coordinates
        return record


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_record(self) -> dict[str, Any]:
        return {"ok": self.ok, "violations": [v.to_record() for v in self.violations]}


def fib_laws() -> NGramLawSet:
    return NGramLawSet(
        alphabet=frozenset({"0", "1"}),
        forbidden=frozenset({("0", "0"), ("1", "1", "1")}),
        names={("0", "0"): FIRST_LAW, ("1", "1", "1"): SECOND_LAW},
    )


def laws_from_grams(grams: Iterable[str | Sequence[str]], alphabet: Iterable[str] | None = None) -> NGramLawSet:
    parsed = [parse_symbols(g) if isinstance(g, str) else tuple(g) for g in grams]
    symbols = set(alphabet) if alphabet is not None else {"0", "1"}
    for gram in parsed:
        symbols.update(gram)
    return NGramLawSet(alphabet=frozenset(symbols), forbidden=frozenset(parsed))


def parse_laws(text: str) -> NGramLawSet:
    """Parse a law-set file: ``alphabet:``, ``name:`` (names the next forbid) and ``forbid:`` lines."""
    alphabet: set[str] = set()
    explicit_alphabet = False
    grams: list[Symbols] = []
    names: dict[Symbols, str] = {}
    pending_name: str | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, sep, value = line.partition(":")
        if not sep:
            raise LawParseError("expected 'forbid:', 'name:' or 'alphabet:'", line_no, raw)
        directive = directive.strip().lower()
        value = value.strip()
        if directive == "name":
            pending_name = value
        elif directive == "forbid":
            gram = tuple(value.split())
            if len(gram) < 2:
                raise LawParseError("forbidden gram must have at least two tokens", line_no, raw)
            grams.append(gram)
            if pending_name:
                names[gram] = pending_name
            pending_name = None
        elif directive == "alphabet":
            alphabet.update(value.split())
            explicit_alphabet = True
        else:
            raise LawParseError(f"unknown directive {directive!r}", line_no, raw)

    if not explicit_alphabet:
        alphabet = {s for gram in grams for s in gram}
    return NGramLawSet(alphabet=frozenset(alphabet), forbidden=frozenset(grams), names=names)


def load_laws(path: str | Path) -> NGramLawSet:
    return parse_laws(Path(path).read_text(encoding="utf-8"))


def _check_alphabet(laws: NGramLawSet, s: Symbols) -> None:
    for position, symbol in enumerate(s):
        if symbol not in laws.alphabet:
            raise LawError(f"Symbol {symbol!r} at position {position} is not in the law alphabet")


def check_string(laws: NGramLawSet, s: str | Sequence[str]) -> Verdict:
    symbols = as_symbols(s)
    _check_alphabet(laws, symbols)
    violations: list[Violation] = []
    for start in range(len(symbols)):
        for gram in laws.forbidden:
            if tuple(symbols[start : start + len(gram)]) == gram:
                violations.append(Violation(position=start, gram=gram, law=laws.law_name(gram)))
    violations.sort(key=lambda v: (v.position, len(v.gram), v.gram))
    return Verdict(violations=tuple(violations))


def allowed_ngrams(laws: NGramLawSet, n: int) -> frozenset[Symbols]:
    if n < 1:
        raise LawError(f"Gram length must be >= 1, got {n}")
    allowed = frozenset(
        candidate
        for candidate in itertools.product(sorted(laws.alphabet), repeat=n)
        if not any(_contains(candidate, gram) for gram in laws.forbidden)
    )
    _LOGGER.debug("%d of %d %d-grams allowed", len(allowed), len(laws.alphabet) ** n, n)
    return allowed


def concat_check(laws: NGramLawSet, s1: str | Sequence[str], s2: str | Sequence[str]) -> Verdict:
    left = as_symbols(s1)
    right = as_symbols(s2)
    for argument, operand in (("first", left), ("second", right)):
        verdict = check_string(laws, operand)
        if not verdict.ok:
            raise ConcatenationError(argument, verdict)
    return check_string(laws, left + right)


def forbidden_concatenations(laws: NGramLawSet, max_len: int) -> frozenset[tuple[Symbols, Symbols]]:
    if max_len < 2:
        raise LawError(f"max_len must be >= 2, got {max_len}")
    operands = [g for n in range(2, max_len + 1) for g in sorted(allowed_ngrams(laws, n))]
    pairs = frozenset(
        (u, v) for u in operands for v in operands if not check_string(laws, u + v).ok
    )
    _LOGGER.debug("%d forbidden concatenations among %d operands", len(pairs), len(operands))
    return pairs


def extract_ngrams(s: str | Sequence[str], n: int) -> list[Symbols]:
    symbols = as_symbols(s)
    if not 1 <= n <= len(symbols):
        raise LawError(f"Gram length {n} out of range 1..{len(symbols)}")
    return [symbols[i : i + n] for i in range(len(symbols) - n + 1)]


def third_law_witnesses(s: str | Sequence[str]) -> dict[str, bool]:
    """Which continuations of a single 1 (``10`` and ``11``) occur in ``s``."""
    symbols = as_symbols(s)
    grams = {symbols[i : i + 2] for i in range(len(symbols) - 1)}
    return {"10": ("1", "0") in grams, "11": ("1", "1") in grams}


def third_law_holds(s: str | Sequence[str]) -> bool:
    return all(third_law_witnesses(s).values())
