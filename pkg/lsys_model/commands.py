from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, TextIO

from .ca import RuleTable, axis_check, ca_evolve, gol_table
from .checker import classify_grammar, classify_points, detect_lonely_beta, grammar_satisfies, same_model
from .config import Settings
from .laws import (
    NGramLawSet,
    Verdict,
    allowed_ngrams,
    check_string,
    concat_check,
    extract_ngrams,
    fib_laws,
    forbidden_concatenations,
    laws_from_grams,
    load_laws,
)
from .lsystem.derivation import derivation_tree, derive, generation_stats
from .lsystem.grammar import Grammar, load_grammar
from .symbols import parse_symbols, render_symbols
from .trees.model import (
    TreeModel,
    elementary_trees,
    is_constituent,
    nac_check,
    ngram_depth1_trees,
)
from .trees.tree import (
    Tree,
    format_tree,
    frontier,
    parse_tree,
    substitute_frontier,
    substitute_root,
    to_dot,
    to_record,
)

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_USAGE = 2

Handler = Callable[[argparse.Namespace, Settings, TextIO], int]


# ----------------------------------------------------------------------
# Shared option helpers
def _parse_mapping(items: list[str] | None) -> Dict[str, str]:
    mapping: Dict[str, str] = {}
    for item in items or []:
        src, sep, dst = item.partition("=")
        if not sep or not src.strip() or not dst.strip():
            raise ValueError(f"Invalid symbol mapping {item!r}; expected SRC=DST")
        mapping[src.strip()] = dst.strip()
    return mapping


def _resolve_grammar(ref: str, args: argparse.Namespace, settings: Settings) -> Grammar:
    grammar = load_grammar(ref, settings.grammars)
    return grammar.relabel(_parse_mapping(getattr(args, "map", None)))


def _resolve_laws(args: argparse.Namespace) -> NGramLawSet:
    if getattr(args, "laws", None):
        return load_laws(args.laws)
    if getattr(args, "forbid", None):
        alphabet = parse_symbols(args.alphabet) if getattr(args, "alphabet", None) else None
        return laws_from_grams(args.forbid, alphabet=alphabet)
    return fib_laws()


def _uses_default_laws(args: argparse.Namespace) -> bool:
    return not getattr(args, "laws", None) and not getattr(args, "forbid", None)


def _resolve_model(args: argparse.Namespace, settings: Settings) -> TreeModel:
    laws = _resolve_laws(args)
    beta: Optional[str] = args.lonely_beta
    if beta is None and getattr(args, "grammar", None):
        beta = detect_lonely_beta(_resolve_grammar(args.grammar, args, settings))
    elif beta is None and _uses_default_laws(args):
        beta = "0"
    return TreeModel.from_laws(laws, lonely_beta=beta, max_elementary_breadth=args.max_breadth)


def _emit_json(out: TextIO, record: Any) -> None:
    out.write(json.dumps(record, indent=2) + "\n")


def _emit_lines(out: TextIO, lines: list[str]) -> None:
    for line in lines:
        out.write(line + "\n")


def _verdict_lines(subject: str, verdict: Verdict) -> list[str]:
    if verdict.ok:
        return [f"{subject}: ok"]
    lines = [f"{subject}: {len(verdict.violations)} violation(s)"]
    for v in verdict.violations:
        where = f"position {v.position}"
        if v.coordinates is not None:
            where = f"row {v.coordinates[0]}, column {v.coordinates[1]}"
        lines.append(f"  *{render_symbols(v.gram)} at {where} ({v.law})")
    return lines


def _verdict_status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_VERDICT_FAILED


def _report_line(report) -> str:
    if report.ok:
        return f"{report.grammar}: ok for generations 0..{report.bound} (bounded check)"
    failure = report.failure
    first = failure.verdict.violations[0]
    return (
        f"{report.grammar}: fails at generation {failure.generation}: "
        f"*{render_symbols(first.gram)} at position {first.position} in {failure.string} ({first.law})"
    )


# ----------------------------------------------------------------------
# Verb handlers
def cmd_derive(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    derivation = derive(_resolve_grammar(args.grammar, args, settings), args.steps)
    if args.json:
        _emit_json(out, derivation.to_record())
    else:
        _emit_lines(out, derivation.rendered())
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grammar = _resolve_grammar(args.grammar, args, settings)
    stats = generation_stats(derive(grammar, args.steps))
    if args.json:
        _emit_json(out, {"grammar": grammar.label, "stats": [s.to_record() for s in stats]})
        return EXIT_OK
    lines = []
    for s in stats:
        counts = " ".join(f"{symbol}:{count}" for symbol, count in s.counts.items())
        lines.append(f"{s.generation} {s.length} {counts}")
    _emit_lines(out, lines)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    laws = _resolve_laws(args)
    if args.string is not None:
        symbols = parse_symbols(args.string)
        verdict = check_string(laws, symbols)
        if args.json:
            record = {"string": render_symbols(symbols), **verdict.to_record()}
            _emit_json(out, record)
        else:
            _emit_lines(out, _verdict_lines(render_symbols(symbols), verdict))
        return _verdict_status(verdict.ok)

    if not args.grammar:
        raise ValueError("check needs -s STRING or -g GRAMMAR")
    grammar = _resolve_grammar(args.grammar, args, settings)
    bound = settings.max_gen if args.steps is None else args.steps
    report = grammar_satisfies(grammar, laws, bound, workers=settings.workers)
    if not report.ok:
        _LOGGER.warning("%s does not satisfy the laws (bounded at %d)", report.grammar, bound)
    if args.json:
        _emit_json(out, report.to_record())
    else:
        _emit_lines(out, [_report_line(report)])
    return _verdict_status(report.ok)


def cmd_ngrams(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    symbols = parse_symbols(args.string)
    record: Dict[str, Any] = {"string": render_symbols(symbols)}
    lines: list[str] = []
    if args.n is not None:
        grams = [render_symbols(g) for g in extract_ngrams(symbols, args.n)]
        record.update({"n": args.n, "ngrams": grams})
        lines.append(" ".join(grams))
    if args.trees:
        model = _resolve_model(args, settings)
        per_window = ngram_depth1_trees(model, symbols)
        windows = [
            w for n in range(2, min(len(symbols), model.max_elementary_breadth) + 1) for w in extract_ngrams(symbols, n)
        ]
        entries = []
        for window, trees in zip(windows, per_window):
            bracketed = sorted(format_tree(t) for t in trees)
            entries.append({"window": render_symbols(window), "trees": bracketed})
            lines.append(f"{render_symbols(window)}: {' '.join(bracketed) or '(none)'}")
        record["trees"] = entries
    if args.n is None and not args.trees:
        raise ValueError("ngrams needs -n N and/or --trees")
    if args.json:
        _emit_json(out, record)
    else:
        _emit_lines(out, lines)
    return EXIT_OK


def cmd_allowed(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grams = sorted(render_symbols(g) for g in allowed_ngrams(_resolve_laws(args), args.n))
    if args.json:
        _emit_json(out, {"n": args.n, "allowed": grams})
    else:
        _emit_lines(out, [" ".join(grams)])
    return EXIT_OK


def cmd_concat(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    left = parse_symbols(args.left)
    right = parse_symbols(args.right)
    verdict = concat_check(_resolve_laws(args), left, right)
    subject = f"{render_symbols(left)}-{render_symbols(right)}"
    if args.json:
        _emit_json(out, {"left": render_symbols(left), "right": render_symbols(right), **verdict.to_record()})
    else:
        _emit_lines(out, _verdict_lines(subject, verdict))
    return _verdict_status(verdict.ok)


def cmd_closure(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    pairs = sorted(
        forbidden_concatenations(_resolve_laws(args), args.max_len),
        key=lambda p: (len(p[0]), p[0], len(p[1]), p[1]),
    )
    rendered = [(render_symbols(u), render_symbols(v)) for u, v in pairs]
    if args.json:
        _emit_json(out, {"max_len": args.max_len, "pairs": [list(p) for p in rendered]})
    else:
        _emit_lines(out, [f"*{u}-{v}" for u, v in rendered])
    return EXIT_OK


def cmd_elementary(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    model = _resolve_model(args, settings)
    breadths = [args.breadth] if args.breadth is not None else list(range(1, model.max_elementary_breadth + 1))
    entries = []
    for breadth in breadths:
        for tree in sorted(elementary_trees(model, breadth), key=format_tree):
            entries.append(
                {
                    "breadth": breadth,
                    "tree": format_tree(tree),
                    "record": to_record(tree),
                    "constituent": is_constituent(tree),
                }
            )
    if args.json:
        _emit_json(out, {"lonely_beta": model.lonely_beta, "trees": entries})
    else:
        _emit_lines(
            out,
            [e["tree"] + ("" if e["constituent"] else "  [model-permitted, non-constituent]") for e in entries],
        )
    return EXIT_OK


def cmd_compose(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    host = parse_tree(args.host)
    guest = parse_tree(args.guest)
    if args.root:
        composed = substitute_root(host, guest)
    else:
        if args.leaf is None:
            raise ValueError("compose needs --leaf ID (frontier substitution) or --root")
        composed = substitute_frontier(host, guest, args.leaf)
    verdict = nac_check(composed, _resolve_model(args, settings))
    if args.json:
        _emit_json(
            out,
            {
                "tree": format_tree(composed),
                "record": to_record(composed),
                "frontier": render_symbols(frontier(composed)),
                "nac": verdict.to_record(),
            },
        )
    elif args.dot:
        out.write(to_dot(composed))
    else:
        lines = [format_tree(composed), f"frontier: {render_symbols(frontier(composed))}"]
        lines.append("nac: ok" if verdict.ok else "nac: failed")
        lines.extend(f"  node {f.node}: {f.reason} ({f.detail})" for f in verdict.failures)
        _emit_lines(out, lines)
    return EXIT_OK


def _derivation_tree_record(grammar: Grammar, steps: int, tree: Tree) -> Dict[str, Any]:
    return {"grammar": grammar.label, "steps": steps, "tree": to_record(tree)}


def cmd_tree(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grammar = _resolve_grammar(args.grammar, args, settings)
    dtree = derivation_tree(grammar, args.steps)
    if args.json:
        _emit_json(out, _derivation_tree_record(grammar, args.steps, dtree.tree))
    elif args.dot:
        out.write(to_dot(dtree.tree, name=grammar.label))
    else:
        _emit_lines(out, [format_tree(dtree.tree)])
    return EXIT_OK


def cmd_points(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grammar = _resolve_grammar(args.grammar, args, settings)
    dtree = derivation_tree(grammar, args.steps)
    classes = classify_points(dtree)
    rows = [
        {
            "node": node,
            "generation": dtree.generation[node],
            "label": dtree.label(node),
            "class": classes[node].value,
        }
        for node in dtree.tree.walk()
    ]
    if args.json:
        _emit_json(out, {"grammar": grammar.label, "steps": args.steps, "points": rows})
    else:
        _emit_lines(out, [f"{r['node']} {r['generation']} {r['label']} {r['class']}" for r in rows])
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grammar = _resolve_grammar(args.grammar, args, settings)
    result = classify_grammar(grammar)
    if args.json:
        _emit_json(out, {"grammar": grammar.label, **result.to_record()})
    else:
        suffix = f" (lonely beta {result.lonely_beta})" if result.lonely_beta is not None else ""
        _emit_lines(out, [f"{grammar.label}: {result.kind.value}{suffix}"])
    return EXIT_OK


def cmd_same_model(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    g1 = _resolve_grammar(args.grammar1, args, settings)
    g2 = _resolve_grammar(args.grammar2, args, settings)
    bound = settings.max_gen if args.steps is None else args.steps
    same, first, second = same_model(g1, g2, _resolve_laws(args), bound, workers=settings.workers)
    if args.json:
        _emit_json(out, {"same_model": same, "reports": [first.to_record(), second.to_record()]})
    else:
        _emit_lines(out, [_report_line(first), _report_line(second), f"same model: {'yes' if same else 'no'}"])
    return _verdict_status(same)


def cmd_ca(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    table = gol_table() if args.rule is None else RuleTable.from_rule_number(args.rule)
    boundary = args.boundary or settings.boundary
    history = ca_evolve(table, parse_symbols(args.init), args.steps, boundary=boundary)
    verdict = None
    if args.check_axis:
        verdict = axis_check(_resolve_laws(args), history, args.check_axis)
    if args.json:
        record: Dict[str, Any] = {"rule": table.rule_number, "boundary": boundary, "rows": history.rendered()}
        if verdict is not None:
            record["axis"] = args.check_axis
            record["verdict"] = verdict.to_record()
        _emit_json(out, record)
    else:
        out.write(history.to_text())
        if verdict is not None:
            _emit_lines(out, _verdict_lines(f"axis {args.check_axis}", verdict))
    return EXIT_OK if verdict is None else _verdict_status(verdict.ok)


def cmd_export(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    grammar = _resolve_grammar(args.grammar, args, settings)
    tree = derivation_tree(grammar, args.steps).tree
    if args.format == "dot":
        payload = to_dot(tree, name=grammar.label)
    else:
        payload = json.dumps(_derivation_tree_record(grammar, args.steps, tree), indent=2) + "\n"
    if args.output in (None, "-"):
        out.write(payload)
    else:
        Path(args.output).write_text(payload, encoding="utf-8")
        _LOGGER.info("Wrote %s derivation tree (%d nodes) to %s", grammar.label, tree.size, args.output)
        if args.json:
            _emit_json(out, {"output": args.output, "format": args.format, "nodes": tree.size})
    return EXIT_OK


HANDLERS: Mapping[str, Handler] = {
    "derive": cmd_derive,
    "stats": cmd_stats,
    "check": cmd_check,
    "ngrams": cmd_ngrams,
    "allowed": cmd_allowed,
    "concat": cmd_concat,
    "closure": cmd_closure,
    "elementary": cmd_elementary,
    "compose": cmd_compose,
    "tree": cmd_tree,
    "points": cmd_points,
    "classify": cmd_classify,
    "same-model": cmd_same_model,
    "ca": cmd_ca,
    "export": cmd_export,
}


def dispatch(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    _LOGGER.debug("Running %s", args.verb)
    return HANDLERS[args.verb](args, settings, out)


# ----------------------------------------------------------------------
# Parser
def build_arg_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output")
    common.add_argument("--log-level", default=None)
    common.add_argument("--config", default=None, help="YAML settings file (default: $LSYS_MODEL_CONFIG)")

    laws = argparse.ArgumentParser(add_help=False)
    laws.add_argument("--laws", default=None, help="Law-set file (default: the Fib Laws)")
    laws.add_argument("--forbid", action="append", default=None, help="Forbidden gram, repeatable")
    laws.add_argument("--alphabet", default=None, help="Alphabet for --forbid (default 0 1)")

    grammar = argparse.ArgumentParser(add_help=False)
    grammar.add_argument("-g", "--grammar", required=True, help="Grammar file or name (fib, bif, xor-ab, xor-01)")
    grammar.add_argument("--map", action="append", default=None, help="Symbol mapping SRC=DST, repeatable")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--lonely-beta", default=None)
    model.add_argument("--max-breadth", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="lsys-model",
        description="L-system n-gram laws, tree models and the 1-D cellular automaton",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("derive", parents=[common, grammar], help="Derive generations")
    p.add_argument("-n", "--steps", type=int, default=6)

    p = sub.add_parser("stats", parents=[common, grammar], help="Length and symbol counts per generation")
    p.add_argument("-n", "--steps", type=int, default=6)

    p = sub.add_parser("check", parents=[common, laws], help="Check a string or a grammar against the laws")
    p.add_argument("-s", "--string", default=None)
    p.add_argument("-g", "--grammar", default=None)
    p.add_argument("--map", action="append", default=None)
    p.add_argument("-n", "--steps", type=int, default=None, help="Generation bound (default: max_gen setting)")

    p = sub.add_parser("ngrams", parents=[common, laws, model], help="Contiguous n-grams of a string")
    p.add_argument("-s", "--string", required=True)
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--trees", action="store_true", help="Also list depth-1 trees per window")
    p.set_defaults(grammar=None)

    p = sub.add_parser("allowed", parents=[common, laws], help="Allowed n-grams")
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("concat", parents=[common, laws], help="Check a concatenation of two well-formed strings")
    p.add_argument("-a", "--left", required=True)
    p.add_argument("-b", "--right", required=True)

    p = sub.add_parser("closure", parents=[common, laws], help="Forbidden concatenations of allowed grams")
    p.add_argument("--max", dest="max_len", type=int, default=3)

    p = sub.add_parser("elementary", parents=[common, laws, model], help="Elementary trees of the model")
    p.add_argument("-b", "--breadth", type=int, default=None)
    p.add_argument("-g", "--grammar", default=None, help="Take the lonely beta from this grammar")
    p.add_argument("--map", action="append", default=None)

    p = sub.add_parser("compose", parents=[common, laws, model], help="Compose trees by substitution")
    p.add_argument("--host", required=True, help="Bracket tree, e.g. '1[0 1]'")
    p.add_argument("--guest", required=True)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--leaf", type=int, default=None, help="Host leaf id (pre-order position)")
    where.add_argument("--root", action="store_true", help="Substitute at the root")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(grammar=None)

    p = sub.add_parser("tree", parents=[common, grammar], help="Derivation tree")
    p.add_argument("-n", "--steps", type=int, default=3)
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("points", parents=[common, grammar], help="k/n/s point classes of a derivation tree")
    p.add_argument("-n", "--steps", type=int, default=4)

    sub.add_parser("classify", parents=[common, grammar], help="Symmetric/asymmetric classification")

    p = sub.add_parser("same-model", parents=[common, laws], help="Do two grammars satisfy the same laws?")
    p.add_argument("-g1", "--grammar1", required=True)
    p.add_argument("-g2", "--grammar2", required=True)
    p.add_argument("--map", action="append", default=None)
    p.add_argument("-n", "--steps", type=int, default=None)

    p = sub.add_parser("ca", parents=[common, laws], help="Run the 1-D cellular automaton")
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--init", required=True)
    p.add_argument("--rule", type=int, default=None, help="Rule number 0..255 (default: the majority rule 232)")
    p.add_argument("--boundary", choices=("periodic",), default=None)
    p.add_argument("--check-axis", choices=("x", "y"), default=None)

    p = sub.add_parser("export", parents=[common, grammar], help="Write a derivation tree as DOT or JSON")
    p.add_argument("-n", "--steps", type=int, default=3)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("-o", "--output", default=None)

    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format="%(asctime)s %(levelname)s %(message)s")
