from .grammar import (
    BUILTIN_GRAMMARS,
    Grammar,
    GrammarError,
    GrammarParseError,
    grammar_from_mapping,
    load_grammar,
    parse_grammar,
)
from .derivation import (
    Derivation,
    DerivationTree,
    GenerationStats,
    UnknownSymbolError,
    UnsupportedAxiomError,
    derivation_tree,
    derive,
    generation_stats,
    step,
)

__all__ = [
    "BUILTIN_GRAMMARS",
    "Grammar",
    "GrammarError",
    "GrammarParseError",
    "grammar_from_mapping",
    "load_grammar",
    "parse_grammar",
    "Derivation",
    "DerivationTree",
    "GenerationStats",
    "UnknownSymbolError",
    "UnsupportedAxiomError",
    "derivation_tree",
    "derive",
    "generation_stats",
    "step",
]
