"""One-dimensional binary cellular automaton with a 3-cell neighbourhood."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .laws import NGramLawSet, Verdict, Violation, check_string
from .symbols import Symbols, as_symbols, render_symbols

_LOGGER = logging.getLogger(__name__)

BOUNDARY_POLICIES = {"periodic"}
NEIGHBORHOODS = tuple("".join(bits) for bits in itertools.product("01", repeat=3))


class RuleTableError(ValueError):
    """Rule table is not a total map over the 8 binary neighbourhoods, or a row is not binary."""


@dataclass(frozen=True)
class RuleTable:
    # outputs[v] is the new centre bit for the neighbourhood whose binary value is v.
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.outputs) != 8 or any(bit not in (0, 1) for bit in self.outputs):
            raise RuleTableError("A rule table needs exactly 8 binary outputs")

    @classmethod
    def from_entries(cls, entries: Mapping[str, str | int]) -> "RuleTable":
        keys = {str(k) for k in entries}
        if keys != set(NEIGHBORHOODS):
            missing = sorted(set(NEIGHBORHOODS) - keys)
            extra = sorted(keys - set(NEIGHBORHOODS))
            raise RuleTableError(f"Rule table must cover all 8 neighbourhoods (missing {missing}, unexpected {extra})")
        outputs = [0] * 8
        for key, value in entries.items():
            bit = int(value)
            if bit not in (0, 1):
                raise RuleTableError(f"Output for {key} must be 0 or 1, got {value!r}")
            outputs[int(str(key), 2)] = bit
        return cls(outputs=tuple(outputs))

    @classmethod
    def from_rule_number(cls, number: int) -> "RuleTable":
        if not 0 <= number <= 255:
            raise RuleTableError(f"Rule number must be in 0..255, got {number}")
        return cls(outputs=tuple((number >> v) & 1 for v in range(8)))

    @property
    def entries(self) -> dict[str, str]:
        return {eta: str(self.outputs[int(eta, 2)]) for eta in NEIGHBORHOODS}

    @property
    def rule_number(self) -> int:
        return sum(bit << v for v, bit in enumerate(self.outputs))

    def __getitem__(self, neighborhood: str | Sequence[str]) -> str:
        key = neighborhood if isinstance(neighborhood, str) else "".join(neighborhood)
        try:
            return self.entries[key]
        except KeyError:
            raise RuleTableError(f"Not a binary 3-neighbourhood: {neighborhood!r}") from None


@dataclass(frozen=True)
class History:
    rows: tuple[Symbols, ...]
    boundary: str = "periodic"

    def rendered(self) -> list[str]:
        return [render_symbols(row) for row in self.rows]

    def columns(self) -> list[Symbols]:
        if not self.rows:
            return []
        return [tuple(row[c] for row in self.rows) for c in range(len(self.rows[0]))]

    def to_text(self) -> str:
        return "\n".join(self.rendered()) + "\n"


def gol_table() -> RuleTable:
    return RuleTable.from_entries(
        {"000": 0, "001": 0, "010": 0, "011": 1, "100": 0, "101": 1, "110": 1, "111": 1}
    )


def _to_array(row: Sequence[str]) -> np.ndarray:
    if not row:
        raise RuleTableError("A row needs at least one cell")
    for position, symbol in enumerate(row):
        if symbol not in ("0", "1"):
            raise RuleTableError(f"Symbol {symbol!r} at position {position} is not binary")
    return np.fromiter((int(s) for s in row), dtype=np.uint8, count=len(row))


def _check_boundary(boundary: str) -> None:
    if boundary not in BOUNDARY_POLICIES:
        raise RuleTableError(f"Unsupported boundary policy {boundary!r}; expected one of {sorted(BOUNDARY_POLICIES)}")


def ca_step(table: RuleTable, row: str | Sequence[str], boundary: str = "periodic") -> Symbols:
    _check_boundary(boundary)
    cells = _to_array(as_symbols(row))
    left = np.roll(cells, 1)
    right = np.roll(cells, -1)
    index = (left << 2) | (cells << 1) | right
    out = np.asarray(table.outputs, dtype=np.uint8)[index]
    return tuple(str(int(bit)) for bit in out)


def ca_evolve(table: RuleTable, initial: str | Sequence[str], steps: int, boundary: str = "periodic") -> History:
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _check_boundary(boundary)
    rows = [as_symbols(initial)]
    _to_array(rows[0])
    for _ in range(steps):
        rows.append(ca_step(table, rows[-1], boundary=boundary))
    _LOGGER.debug("Evolved rule %d for %d step(s) on %d cells", table.rule_number, steps, len(rows[0]))
    return History(rows=tuple(rows), boundary=boundary)


def axis_check(laws: NGramLawSet, history: History, axis: str) -> Verdict:
    """Check rows (axis x) or columns read top to bottom (axis y) against the laws."""
    if not history.rows:
        raise ValueError("History has no rows")
    violations: list[Violation] = []
    if axis == "x":
        for r, row in enumerate(history.rows):
            for v in check_string(laws, row).violations:
                violations.append(Violation(v.position, v.gram, v.law, coordinates=(r, v.position)))
    elif axis == "y":
        for c, column in enumerate(history.columns()):
            for v in check_string(laws, column).violations:
                violations.append(Violation(v.position, v.gram, v.law, coordinates=(v.position, c)))
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return Verdict(violations=tuple(violations))
