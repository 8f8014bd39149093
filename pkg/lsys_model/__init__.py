"""L-system n-gram laws, local tree models and the 1-D cellular automaton."""

from .lsystem import Grammar, derivation_tree, derive, parse_grammar, step
from .laws import NGramLawSet, Verdict, check_string, fib_laws
from .trees import Tree, TreeModel, fib_model

__all__ = [
    "Grammar",
    "NGramLawSet",
    "Tree",
    "TreeModel",
    "Verdict",
    "check_string",
    "derivation_tree",
    "derive",
    "fib_laws",
    "fib_model",
    "parse_grammar",
    "step",
]
