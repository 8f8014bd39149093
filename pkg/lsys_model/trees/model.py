from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from ..laws import NGramLawSet, allowed_ngrams, check_string, extract_ngrams, fib_laws
from ..lsystem.grammar import BUILTIN_GRAMMARS, Grammar
from ..symbols import Symbols, as_symbols, render_symbols
from .tree import Tree, TreeError, substitute_frontier, walk

_LOGGER = logging.getLogger(__name__)

LONELY_BETA_LOOP = "lonely-beta-loop"
FORBIDDEN_CHILD_GRAM = "forbidden-child-gram"
CONDITION_III = "condition-III"
ROOT_0_BREADTH = "root-0-breadth"


@dataclass(frozen=True)
class TreeModel:
    """NACs induced from a law set, plus an optional Lonely Beta label."""

    laws: NGramLawSet
    lonely_beta: str | None = None
    max_elementary_breadth: int = 2

    def __post_init__(self) -> None:
        if self.lonely_beta is not None and self.lonely_beta not in self.laws.alphabet:
            raise TreeError(f"Lonely beta {self.lonely_beta!r} is not in the law alphabet")
        if self.max_elementary_breadth < 1:
            raise TreeError("max_elementary_breadth must be >= 1")

    @classmethod
    def from_laws(
        cls,
        laws: NGramLawSet,
        lonely_beta: str | None = None,
        max_elementary_breadth: int | None = None,
    ) -> "TreeModel":
        if max_elementary_breadth is None:
            # The shortest law-relevant treelet is one symbol narrower than the longest gram.
            max_elementary_breadth = max(1, laws.max_gram - 1)
        return cls(laws=laws, lonely_beta=lonely_beta, max_elementary_breadth=max_elementary_breadth)


def fib_model() -> TreeModel:
    return TreeModel.from_laws(fib_laws(), lonely_beta="0")


@dataclass(frozen=True)
class NACFailure:
    node: int
    reason: str
    detail: str = ""

    def to_record(self) -> dict[str, Any]:
        return {"node": self.node, "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class NACVerdict:
    failures: tuple[NACFailure, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def reasons(self) -> set[str]:
        return {f.reason for f in self.failures}

    def to_record(self) -> dict[str, Any]:
        return {"ok": self.ok, "failures": [f.to_record() for f in self.failures]}


def nac_check(tree: Tree, model: TreeModel, elementary: bool = False) -> NACVerdict:
    """Check every depth-1 neighbourhood of ``tree`` against the model.

    With ``elementary=True`` neighbourhoods wider than the model's maximal
    elementary breadth also fail (Condition III scope); derived trees are
    judged on their neighbourhoods only.
    """
    for node, label in enumerate(tree.labels):
        if label not in model.laws.alphabet:
            raise TreeError(f"Node {node} has label {label!r} outside the model alphabet")

    failures: list[NACFailure] = []
    beta = model.lonely_beta
    for node in walk(tree):
        kids = tree.child_labels(node)
        if not kids:
            continue
        label = tree.labels[node]
        if label == beta and beta in kids:
            failures.append(NACFailure(node, LONELY_BETA_LOOP, f"{beta} immediately dominates {beta}"))
        if label == beta and len(kids) > 1:
            failures.append(NACFailure(node, ROOT_0_BREADTH, f"{beta} dominates {len(kids)} daughters"))
        verdict = check_string(model.laws, kids)
        for violation in verdict.violations:
            failures.append(
                NACFailure(
                    node,
                    FORBIDDEN_CHILD_GRAM,
                    f"daughters {render_symbols(kids)} contain *{render_symbols(violation.gram)} ({violation.law})",
                )
            )
        if elementary and len(kids) > model.max_elementary_breadth:
            failures.append(
                NACFailure(
                    node,
                    CONDITION_III,
                    f"breadth {len(kids)} exceeds elementary breadth {model.max_elementary_breadth}",
                )
            )
    return NACVerdict(failures=tuple(failures))


def elementary_trees(model: TreeModel, breadth: int) -> frozenset[Tree]:
    if not 1 <= breadth <= model.max_elementary_breadth:
        raise TreeError(f"Elementary breadth must be in 1..{model.max_elementary_breadth}, got {breadth}")
    trees = set()
    for root in sorted(model.laws.alphabet):
        for kids in sorted(allowed_ngrams(model.laws, breadth)):
            candidate = Tree.node(root, list(kids))
            if nac_check(candidate, model, elementary=True).ok:
                trees.add(candidate)
    _LOGGER.debug("%d elementary tree(s) of breadth %d", len(trees), breadth)
    return frozenset(trees)


def all_elementary_trees(model: TreeModel) -> frozenset[Tree]:
    out: set[Tree] = set()
    for breadth in range(1, model.max_elementary_breadth + 1):
        out |= elementary_trees(model, breadth)
    return frozenset(out)


def prefer_maximal(candidates: Iterable[Tree], model: TreeModel) -> frozenset[Tree]:
    """Condition III: keep the widest law-compatible candidates."""
    pool = list(candidates)
    if not pool:
        raise TreeError("prefer_maximal needs at least one candidate")
    roots = {t.root_label for t in pool}
    if len(roots) > 1:
        raise TreeError(f"Candidates must share a root label, got {sorted(roots)}")
    passing = [t for t in pool if nac_check(t, model, elementary=True).ok]
    if not passing:
        return frozenset()
    widest = max(len(t.children[t.root]) for t in passing)
    return frozenset(t for t in passing if len(t.children[t.root]) == widest)


def ngram_depth1_trees(model: TreeModel, s: str | Sequence[str]) -> list[frozenset[Tree]]:
    """Depth-1 trees per window, for window sizes 2..min(|s|, max breadth), in (size, position) order."""
    symbols = as_symbols(s)
    verdict = check_string(model.laws, symbols)
    if not verdict.ok:
        grams = ", ".join(render_symbols(v.gram) for v in verdict.violations)
        raise TreeError(f"{render_symbols(symbols)!r} violates the laws ({grams})")
    out: list[frozenset[Tree]] = []
    for n in range(2, min(len(symbols), model.max_elementary_breadth) + 1):
        for window in extract_ngrams(symbols, n):
            out.append(
                frozenset(
                    tree
                    for tree in (Tree.node(root, list(window)) for root in sorted(model.laws.alphabet))
                    if nac_check(tree, model, elementary=True).ok
                )
            )
    return out


def is_constituent(tree: Tree, grammars: Iterable[Grammar] | None = None) -> bool:
    """A depth-1 tree is a constituent when its daughters are a contiguous part of a rule for its root."""
    if tree.depth != 1:
        return False
    refs = list(grammars) if grammars is not None else [BUILTIN_GRAMMARS["fib"], BUILTIN_GRAMMARS["bif"]]
    kids = tree.child_labels(tree.root)
    for grammar in refs:
        rhs = grammar.rules.get(tree.root_label)
        if rhs is None:
            continue
        n = len(kids)
        if any(rhs[i : i + n] == kids for i in range(len(rhs) - n + 1)):
            return True
    return False


def _choose(model: TreeModel, label: str, prefer: Sequence[Symbols]) -> Tree | None:
    candidates = [t for t in all_elementary_trees(model) if t.root_label == label]
    if not candidates:
        return None
    best = prefer_maximal(candidates, model)
    if not best:
        return None
    by_kids = {t.child_labels(t.root): t for t in best}
    for kids in prefer:
        if kids in by_kids:
            return by_kids[kids]
    # Constituents first, then lexicographic daughters.
    return min(best, key=lambda t: (not is_constituent(t), t.child_labels(t.root)))


def grow(
    model: TreeModel,
    root: str,
    depth: int,
    prefer: Sequence[str | Sequence[str]] = (),
) -> Tree:
    """Compose a tree of the given depth by frontier substitution of preferred elementary trees.

    At each level every deepest leaf is replaced by the Condition-III-preferred
    elementary tree for its label; ``prefer`` lists daughter strings that win ties.
    """
    if depth < 0:
        raise TreeError(f"depth must be >= 0, got {depth}")
    preferred = [as_symbols(p) for p in prefer]
    chosen: dict[str, Tree | None] = {}
    tree = Tree.leaf(root)
    for level in range(depth):
        depths = tree.depths()
        leaves = [n for n in walk(tree) if tree.is_leaf(n) and depths[n] == level]
        # Right to left keeps the pre-order ids of earlier leaves stable.
        for leaf in reversed(leaves):
            label = tree.labels[leaf]
            if label not in chosen:
                chosen[label] = _choose(model, label, preferred)
            guest = chosen[label]
            if guest is not None:
                tree = substitute_frontier(tree, guest, leaf)
    return tree


def minimal_trees(model: TreeModel, label: str, depth: int) -> frozenset[Tree]:
    """Breadth-1 trees of the given depth rooted at ``label`` that the model admits.

    Chains are built by substituting breadth-1 elementary trees at the single
    leaf, so a pair the model rejects (the lonely beta over itself) never
    appears at any level.
    """
    if depth < 0:
        raise TreeError(f"depth must be >= 0, got {depth}")
    if label not in model.laws.alphabet:
        raise TreeError(f"Label {label!r} is not in the model alphabet")
    steps: dict[str, list[Tree]] = {}
    for tree in elementary_trees(model, 1):
        steps.setdefault(tree.root_label, []).append(tree)
    chains = {Tree.leaf(label)}
    for _ in range(depth):
        grown = set()
        for chain in chains:
            leaf = chain.size - 1
            for guest in steps.get(chain.labels[leaf], ()):
                candidate = substitute_frontier(chain, guest, leaf)
                if nac_check(candidate, model).ok:
                    grown.add(candidate)
        chains = grown
    _LOGGER.debug("%d minimal tree(s) of depth %d for %s", len(chains), depth, label)
    return frozenset(chains)
