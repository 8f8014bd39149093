from .tree import (
    Tree,
    TreeError,
    SubstitutionError,
    format_tree,
    from_record,
    frontier,
    parse_tree,
    substitute_frontier,
    substitute_root,
    to_dot,
    to_record,
    walk,
)
from .model import (
    NACFailure,
    NACVerdict,
    TreeModel,
    all_elementary_trees,
    elementary_trees,
    fib_model,
    grow,
    is_constituent,
    minimal_trees,
    nac_check,
    ngram_depth1_trees,
    prefer_maximal,
)

__all__ = [
    "Tree",
    "TreeError",
    "SubstitutionError",
    "TreeModel",
    "NACFailure",
    "NACVerdict",
    "all_elementary_trees",
    "elementary_trees",
    "fib_model",
    "format_tree",
    "from_record",
    "frontier",
    "grow",
    "is_constituent",
    "minimal_trees",
    "nac_check",
    "ngram_depth1_trees",
    "parse_tree",
    "prefer_maximal",
    "substitute_frontier",
    "substitute_root",
    "to_dot",
    "to_record",
    "walk",
]
