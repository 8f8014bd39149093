from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..symbols import Symbols, render_symbols
from ..trees.tree import Tree
from .grammar import Grammar, GrammarError

_LOGGER = logging.getLogger(__name__)


class UnknownSymbolError(GrammarError):
    def __init__(self, symbol: str, position: int) -> None:
        self.symbol = symbol
        self.position = position
        super().__init__(f"Unknown symbol {symbol!r} at position {position}")


class UnsupportedAxiomError(GrammarError):
    """Derivation trees need a single-symbol axiom."""


@dataclass(frozen=True)
class Derivation:
    grammar: Grammar
    generations: tuple[Symbols, ...]

    @property
    def steps(self) -> int:
        return len(self.generations) - 1

    def rendered(self) -> list[str]:
        return [render_symbols(gen) for gen in self.generations]

    def to_record(self) -> dict:
        return {
            "grammar": self.grammar.label,
            "steps": self.steps,
            "generations": self.rendered(),
        }


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    length: int
    counts: dict[str, int]

    def to_record(self) -> dict:
        return {"generation": self.generation, "length": self.length, "counts": dict(self.counts)}


@dataclass(frozen=True)
class DerivationTree:
    """Derivation tree plus the generation index of every node (its depth)."""

    tree: Tree
    grammar: Grammar
    generation: tuple[int, ...]

    @property
    def root(self) -> int:
        return self.tree.root

    def label(self, node: int) -> str:
        return self.tree.labels[node]

    def frontier_at(self, generation: int) -> Symbols:
        # Pre-order visits same-depth nodes left to right.
        return tuple(
            self.tree.labels[node] for node in self.tree.walk() if self.generation[node] == generation
        )


def step(grammar: Grammar, generation: Sequence[str]) -> Symbols:
    out: list[str] = []
    for position, symbol in enumerate(generation):
        try:
            out.extend(grammar.rules[symbol])
        except KeyError:
            raise UnknownSymbolError(symbol, position) from None
    return tuple(out)


def derive(grammar: Grammar, n: int) -> Derivation:
    if n < 0:
        raise ValueError(f"Number of steps must be >= 0, got {n}")
    generations = [tuple(grammar.axiom)]
    for _ in range(n):
        generations.append(step(grammar, generations[-1]))
    _LOGGER.debug(
        "Derived %d generation(s) of %s; last length %d",
        n,
        grammar.label,
        len(generations[-1]),
    )
    return Derivation(grammar=grammar, generations=tuple(generations))


def derivation_tree(grammar: Grammar, n: int) -> DerivationTree:
    if n < 0:
        raise ValueError(f"Number of steps must be >= 0, got {n}")
    if len(grammar.axiom) != 1:
        raise UnsupportedAxiomError(
            f"Derivation trees need a single-symbol axiom; {grammar.label} has {len(grammar.axiom)}"
        )

    labels: list[str] = []
    children: list[list[int]] = []
    depths: list[int] = []

    # Iterative pre-order build: ids come out in walk order.
    stack: list[tuple[str, int, int | None]] = [(grammar.axiom[0], 0, None)]
    while stack:
        symbol, depth, parent = stack.pop()
        node = len(labels)
        labels.append(symbol)
        children.append([])
        depths.append(depth)
        if parent is not None:
            children[parent].append(node)
        if depth < n:
            for child in reversed(grammar.rules[symbol]):
                stack.append((child, depth + 1, node))

    tree = Tree(labels=tuple(labels), children=tuple(tuple(c) for c in children))
    _LOGGER.debug("Built derivation tree of %s: depth %d, %d nodes", grammar.label, n, tree.size)
    return DerivationTree(tree=tree, grammar=grammar, generation=tuple(depths))


def generation_stats(derivation: Derivation) -> list[GenerationStats]:
    alphabet = sorted(derivation.grammar.alphabet)
    stats: list[GenerationStats] = []
    for index, gen in enumerate(derivation.generations):
        counter = Counter(gen)
        stats.append(
            GenerationStats(
                generation=index,
                length=len(gen),
                counts={symbol: counter.get(symbol, 0) for symbol in alphabet},
            )
        )
    return stats
