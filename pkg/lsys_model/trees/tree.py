from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterator, Mapping, Sequence

from ..symbols import Symbols

# (label, (child shape, ...))
Shape = tuple[str, tuple["Shape", ...]]


class TreeError(ValueError):
    """Malformed tree or tree notation."""


class SubstitutionError(TreeError):
    """Substitution preconditions (label identity, leaf target) do not hold."""


@dataclass(frozen=True)
class Tree:
    """Rooted, ordered, labeled tree.

    Node ids are pre-order positions (root is 0), so two trees with the same
    shape are equal and hash alike. Operations that build new trees renumber.
    """

    labels: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise TreeError("A tree needs at least one node")
        if len(self.labels) != len(self.children):
            raise TreeError("labels and children must describe the same nodes")
        mothered = sorted(c for kids in self.children for c in kids)
        if mothered != list(range(1, len(self.labels))):
            raise TreeError("Every node but the root needs exactly one mother")
        order = list(self._preorder())
        if order != list(range(len(self.labels))):
            raise TreeError("Tree must be connected, acyclic, single-mothered and numbered in pre-order")

    def _preorder(self) -> Iterator[int]:
        stack = [0]
        visited = 0
        limit = len(self.labels)
        while stack:
            node = stack.pop()
            visited += 1
            if visited > limit or not 0 <= node < limit:
                return
            yield node
            stack.extend(reversed(self.children[node]))

    # ------------------------------------------------------------------
    # Construction
    @classmethod
    def leaf(cls, label: str) -> "Tree":
        return cls(labels=(label,), children=((),))

    @classmethod
    def from_shape(cls, shape: Shape) -> "Tree":
        labels: list[str] = []
        children: list[list[int]] = []
        stack: list[tuple[Shape, int | None]] = [(shape, None)]
        while stack:
            (label, kids), parent = stack.pop()
            node = len(labels)
            labels.append(str(label))
            children.append([])
            if parent is not None:
                children[parent].append(node)
            for kid in reversed(kids):
                stack.append((kid, node))
        return cls(labels=tuple(labels), children=tuple(tuple(c) for c in children))

    @classmethod
    def node(cls, label: str, subtrees: Sequence["Tree | str"] = ()) -> "Tree":
        kids = tuple(Tree.leaf(t).shape if isinstance(t, str) else t.shape for t in subtrees)
        return cls.from_shape((label, kids))

    # ------------------------------------------------------------------
    # Structure
    @property
    def root(self) -> int:
        return 0

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def root_label(self) -> str:
        return self.labels[0]

    @property
    def shape(self) -> Shape:
        return self.subtree_shape(0)

    def subtree_shape(self, node: int) -> Shape:
        return (self.labels[node], tuple(self.subtree_shape(c) for c in self.children[node]))

    def subtree(self, node: int) -> "Tree":
        return Tree.from_shape(self.subtree_shape(node))

    def is_leaf(self, node: int) -> bool:
        return not self.children[node]

    def child_labels(self, node: int) -> Symbols:
        return tuple(self.labels[c] for c in self.children[node])

    def mothers(self) -> dict[int, int]:
        return {child: parent for parent, kids in enumerate(self.children) for child in kids}

    def depths(self) -> tuple[int, ...]:
        depth = [0] * self.size
        for node in self.walk():
            for child in self.children[node]:
                depth[child] = depth[node] + 1
        return tuple(depth)

    @property
    def depth(self) -> int:
        return max(self.depths())

    @property
    def breadth(self) -> int:
        return max(len(kids) for kids in self.children)

    def ancestors(self, node: int) -> list[int]:
        mothers = self.mothers()
        out: list[int] = []
        while node in mothers:
            node = mothers[node]
            out.append(node)
        return out

    def internal_nodes(self) -> list[int]:
        return [node for node in self.walk() if self.children[node]]

    def walk(self) -> list[int]:
        return walk(self)

    def __str__(self) -> str:
        return format_tree(self)


def walk(tree: Tree) -> list[int]:
    """Depth-first pre-order walk; an ancestor is always visited before its descendants."""
    order: list[int] = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(reversed(tree.children[node]))
    return order


def frontier(tree: Tree) -> Symbols:
    return tuple(tree.labels[node] for node in walk(tree) if tree.is_leaf(node))


def substitute_frontier(host: Tree, guest: Tree, leaf: int) -> Tree:
    """Identify ``guest``'s root with leaf ``leaf`` of ``host``."""
    if not 0 <= leaf < host.size:
        raise SubstitutionError(f"Node {leaf} does not exist in host tree")
    if not host.is_leaf(leaf):
        raise SubstitutionError(f"Node {leaf} is not a leaf of the host tree")
    if host.labels[leaf] != guest.root_label:
        raise SubstitutionError(
            f"label mismatch: leaf {leaf} is {host.labels[leaf]!r}, guest root is {guest.root_label!r}"
        )

    def _rebuild(node: int) -> Shape:
        if node == leaf:
            return guest.shape
        return (host.labels[node], tuple(_rebuild(c) for c in host.children[node]))

    return Tree.from_shape(_rebuild(host.root))


def substitute_root(t1: Tree, t2: Tree) -> Tree:
    """Merge two same-labelled roots; t1's daughters come first."""
    if t1.root_label != t2.root_label:
        raise SubstitutionError(f"label mismatch: roots {t1.root_label!r} and {t2.root_label!r}")
    _, kids1 = t1.shape
    _, kids2 = t2.shape
    return Tree.from_shape((t1.root_label, kids1 + kids2))


# ----------------------------------------------------------------------
# Codecs
def format_tree(tree: Tree) -> str:
    """Bracket notation: ``1[0[1] 1]``."""

    def _fmt(node: int) -> str:
        kids = tree.children[node]
        if not kids:
            return tree.labels[node]
        return f"{tree.labels[node]}[{' '.join(_fmt(c) for c in kids)}]"

    return _fmt(tree.root)


def parse_tree(text: str) -> Tree:
    tokens: list[str] = []
    buf = ""
    for ch in text:
        if ch in "[]" or ch.isspace():
            if buf:
                tokens.append(buf)
                buf = ""
            if not ch.isspace():
                tokens.append(ch)
        else:
            buf += ch
    if buf:
        tokens.append(buf)
    if not tokens:
        raise TreeError("Empty tree notation")

    pos = 0

    def _parse() -> Shape:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] in "[]":
            raise TreeError(f"Expected a label at token {pos} in {text!r}")
        label = tokens[pos]
        pos += 1
        kids: list[Shape] = []
        if pos < len(tokens) and tokens[pos] == "[":
            pos += 1
            while pos < len(tokens) and tokens[pos] != "]":
                kids.append(_parse())
            if pos >= len(tokens):
                raise TreeError(f"Unbalanced '[' in {text!r}")
            pos += 1
            if not kids:
                raise TreeError(f"Empty daughter list after {label!r} in {text!r}")
        return (label, tuple(kids))

    shape = _parse()
    if pos != len(tokens):
        raise TreeError(f"Trailing input after tree in {text!r}")
    return Tree.from_shape(shape)


def to_record(tree: Tree) -> dict[str, Any]:
    def _rec(node: int) -> dict[str, Any]:
        return {"label": tree.labels[node], "children": [_rec(c) for c in tree.children[node]]}

    return _rec(tree.root)


def from_record(record: Mapping[str, Any]) -> Tree:
    def _shape(rec: Any) -> Shape:
        if not isinstance(rec, Mapping) or "label" not in rec:
            raise TreeError(f"Tree record needs a 'label': {rec!r}")
        kids = rec.get("children") or []
        if not isinstance(kids, list):
            raise TreeError("Tree record 'children' must be a list")
        return (str(rec["label"]), tuple(_shape(k) for k in kids))

    return Tree.from_shape(_shape(record))


def to_dot(tree: Tree, name: str = "tree") -> str:
    lines = [f"digraph {json.dumps(name)} {{", "\tordering=out;"]
    for node in walk(tree):
        lines.append(f'\t"{node}" [label={json.dumps(tree.labels[node])}];')
    for node in walk(tree):
        for order, child in enumerate(tree.children[node]):
            lines.append(f'\t"{node}" -> "{child}" [order={order}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
