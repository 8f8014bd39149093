from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from .laws import LawError, NGramLawSet, Verdict, check_string
from .lsystem.derivation import DerivationTree, derive
from .lsystem.grammar import Grammar
from .symbols import render_symbols

_LOGGER = logging.getLogger(__name__)

DEFAULT_MAX_GEN = 20


class ClassificationError(ValueError):
    """Point classification is only defined over the binary alphabet."""


class GrammarKind(str, Enum):
    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"


class PointClass(str, Enum):
    K = "k"
    N = "n"
    S = "s"
    OTHER = "other"


@dataclass(frozen=True)
class GrammarClass:
    kind: GrammarKind
    lonely_beta: str | None = None

    def to_record(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "lonely_beta": self.lonely_beta}


@dataclass(frozen=True)
class ModelFailure:
    generation: int
    string: str
    verdict: Verdict


@dataclass(frozen=True)
class ModelReport:
    """Bounded check: generations 0..bound were checked, nothing is claimed beyond."""

    grammar: str
    bound: int
    generations_checked: int
    failure: ModelFailure | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def to_record(self) -> dict[str, Any]:
        failure = None
        if self.failure is not None:
            first = self.failure.verdict.violations[0]
            failure = {
                "generation": self.failure.generation,
                "position": first.position,
                "gram": render_symbols(first.gram),
            }
        return {"grammar": self.grammar, "bound": self.bound, "ok": self.ok, "failure": failure}


def grammar_satisfies(
    grammar: Grammar,
    laws: NGramLawSet,
    max_gen: int = DEFAULT_MAX_GEN,
    mapping: Mapping[str, str] | None = None,
    workers: int = 1,
) -> ModelReport:
    if max_gen < 0:
        raise ValueError(f"max_gen must be >= 0, got {max_gen}")
    if mapping:
        grammar = grammar.relabel(mapping)
    foreign = sorted(grammar.alphabet - laws.alphabet)
    if foreign:
        raise LawError(
            f"Grammar {grammar.label} uses symbols {foreign} outside the law alphabet; supply a symbol mapping"
        )

    generations = derive(grammar, max_gen).generations
    failure: ModelFailure | None = None
    checked = 0
    if workers <= 1:
        for index, gen in enumerate(generations):
            checked = index + 1
            verdict = check_string(laws, gen)
            if not verdict.ok:
                failure = ModelFailure(index, render_symbols(gen), verdict)
                break
    else:
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="gen-check") as pool:
            verdicts = list(pool.map(lambda gen: check_string(laws, gen), generations))
        # Same answer as the sequential scan: report the earliest failing generation.
        checked = len(verdicts)
        for index, verdict in enumerate(verdicts):
            if not verdict.ok:
                checked = index + 1
                failure = ModelFailure(index, render_symbols(generations[index]), verdict)
                break

    if failure is not None:
        _LOGGER.debug(
            "%s fails at generation %d (%s)",
            grammar.label,
            failure.generation,
            failure.verdict.violations[0].law,
        )
    return ModelReport(grammar=grammar.label, bound=max_gen, generations_checked=checked, failure=failure)


def detect_lonely_beta(grammar: Grammar) -> str | None:
    """The unique symbol whose rule does not rewrite it into itself, if exactly one exists."""
    candidates = [s for s in sorted(grammar.alphabet) if s not in grammar.rules[s]]
    return candidates[0] if len(candidates) == 1 else None


def classify_grammar(grammar: Grammar) -> GrammarClass:
    beta = detect_lonely_beta(grammar)
    if beta is None:
        return GrammarClass(kind=GrammarKind.SYMMETRIC)
    return GrammarClass(kind=GrammarKind.ASYMMETRIC, lonely_beta=beta)


def same_model(
    g1: Grammar,
    g2: Grammar,
    laws: NGramLawSet,
    max_gen: int = DEFAULT_MAX_GEN,
    mapping: Mapping[str, str] | None = None,
    workers: int = 1,
) -> tuple[bool, ModelReport, ModelReport]:
    first = grammar_satisfies(g1, laws, max_gen, mapping=mapping, workers=workers)
    second = grammar_satisfies(g2, laws, max_gen, mapping=mapping, workers=workers)
    return first.ok and second.ok, first, second


def classify_points(dtree: DerivationTree) -> dict[int, PointClass]:
    grammar = dtree.grammar
    if not grammar.alphabet <= {"0", "1"}:
        raise ClassificationError(f"Point classes need the alphabet {{0, 1}}; {grammar.label} uses {sorted(grammar.alphabet)}")
    tree = dtree.tree
    k_rhs = grammar.rules.get("1")
    mothers = tree.mothers()
    classes: dict[int, PointClass] = {}
    # Pre-order guarantees a mother is classified before her daughters.
    for node in tree.walk():
        cls = PointClass.OTHER
        if tree.labels[node] == "1" and node in mothers:
            mother = mothers[node]
            if tree.labels[mother] == "0" and tree.child_labels(node) == k_rhs:
                cls = PointClass.K
            elif classes[mother] is PointClass.K:
                cls = PointClass.N
            elif classes[mother] is PointClass.N:
                cls = PointClass.S
        classes[node] = cls
    return classes
