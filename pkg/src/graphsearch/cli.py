"""Command-line front end.

Exit status: 0 on success, 1 when the input is well formed but the
request fails (cyclic graph for a DAG-only command, invalid strategy, ...),
2 on usage errors (bad flags, missing or unreadable input).
"""
from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager

from .baselines import exact_search_time
from .decomposition import decompose, format_decomposition
from .dynamics import loss_of, lower_bound, validate
from .experiments import load_config, run_sweep
from .generators import gen_ba_dag, gen_ordered_er
from .graph import CycleError, GraphError, NodeIdMap, largest_weak_component, load_edge_list, write_edge_list
from .plank import InternalError, plank, search_digraph
from .reduction import write_plan
from .strategy import format_strategy, parse_strategy

log = logging.getLogger("graphsearch")


class UsageError(Exception):
    pass


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _load(args):
    if not args.input:
        raise UsageError("--input is required")
    try:
        g, ids = load_edge_list(args.input, reverse=args.reverse)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {args.input}") from None
    if args.lcc:
        g, kept = largest_weak_component(g)
        ids = ids.compose(kept)
    return g, ids


def _need_searchers(args, low=2):
    if args.searchers is None:
        raise UsageError("--searchers is required")
    if args.searchers < low:
        raise UsageError(f"--searchers must be at least {low}")
    return args.searchers


@contextmanager
def _labelled(ids):
    """Report cycles with file labels rather than internal ids."""
    try:
        yield
    except CycleError as exc:
        path = " -> ".join(str(ids.to_external(v)) for v in [*exc.cycle, exc.cycle[0]])
        raise GraphError(f"graph contains a cycle: {path}") from None


def cmd_clear(args):
    g, ids = _load(args)
    s = _need_searchers(args)
    res = search_digraph(g, s, args.hubset_k)
    with _sink(args.output) as out:
        out.write(format_strategy(res.strategy, ids.to_external))
    if args.plan:
        write_plan(args.plan, res.plan, ids)
    pop = res.population
    lb = lower_bound(pop, s) if pop else 0
    print(f"t={res.strategy.length} lower_bound={lb} guards={len(res.plan.permanent_guards)} "
          f"fvs={res.plan.fvs_size} peak_searchers={res.schedule.peak_concurrent}", file=sys.stderr)
    return 0


def cmd_plank(args):
    g, ids = _load(args)
    if args.hubset_k:
        raise UsageError("plank works on DAGs only; --hubset-k belongs to clear")
    s = _need_searchers(args)
    with _labelled(ids):
        strategy = plank(g, s)
    with _sink(args.output) as out:
        out.write(format_strategy(strategy, ids.to_external))
    check = validate(g, strategy)
    rep = loss_of(check.trace, strategy)
    print(f"t={strategy.length} lower_bound={lower_bound(rep.population, s) if rep.population else 0} "
          f"loss={rep.total_loss}", file=sys.stderr)
    return 0


def cmd_decompose(args):
    g, ids = _load(args)
    with _labelled(ids):
        d = decompose(g)
    with _sink(args.output) as out:
        out.write(format_decomposition(d, ids.to_external))
    return 0


def cmd_validate(args):
    g, ids = _load(args)
    if not args.strategy:
        raise UsageError("--strategy is required")
    try:
        with open(args.strategy) as fh:
            text = fh.read()
    except FileNotFoundError:
        raise UsageError(f"strategy file not found: {args.strategy}") from None
    strategy = parse_strategy(text, ids.to_internal)
    if args.searchers is not None:
        strategy = strategy.relabel(lambda v: v, searchers=args.searchers)
    check = validate(g, strategy)
    if check:
        print(f"valid: t={strategy.length}")
        return 0
    print(f"invalid: {check.describe(ids.to_external)}", file=sys.stderr)
    return 1


def cmd_lower_bound(args):
    s = _need_searchers(args)
    if args.nodes is not None and args.input:
        raise UsageError("give either --nodes or --input, not both")
    if args.nodes is not None:
        n = args.nodes
    elif args.input:
        g, _ = _load(args)
        n = len(g.non_isolated()) or g.n
    else:
        raise UsageError("--nodes or --input is required")
    if n < 1:
        raise UsageError("--nodes must be positive")
    print(lower_bound(n, s))
    return 0


def cmd_exact(args):
    g, ids = _load(args)
    s = _need_searchers(args, low=1)
    res = exact_search_time(g, s, args.max_t)
    if res.exceeded:
        print(f"exceeds max_t={res.max_t} (explored {res.explored_states} states)")
        return 1
    print(f"search_time={res.optimal_length} explored={res.explored_states}")
    if args.output:
        with _sink(args.output) as out:
            out.write(format_strategy(res.witness, ids.to_external))
    return 0


def cmd_gen(args):
    if args.nodes is None:
        raise UsageError("--nodes is required")
    if args.model == "er":
        if args.m_links is not None or args.m0 is not None:
            raise UsageError("--m-links/--m0 apply to the ba model only")
        if args.p is None:
            raise UsageError("--p is required for the er model")
        g = gen_ordered_er(args.nodes, args.p, args.seed)
    else:
        if args.p is not None:
            raise UsageError("--p applies to the er model only")
        m_links = 2 if args.m_links is None else args.m_links
        m0 = m_links if args.m0 is None else args.m0
        g = gen_ba_dag(args.nodes, m_links, m0, args.seed)
    if not args.output:
        raise UsageError("--output is required")
    write_edge_list(args.output, g, NodeIdMap.identity(g.n))
    print(f"n={g.n} m={g.m}", file=sys.stderr)
    return 0


def cmd_sweep(args):
    if not args.config:
        raise UsageError("--config is required")
    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        raise UsageError(f"config not found: {args.config}") from None
    except ValueError as exc:
        raise UsageError(f"bad config: {exc}") from None
    with _sink(args.output) as out:
        rows = run_sweep(cfg, out)
    failed = sum(1 for r in rows if r.error)
    if failed:
        print(f"{failed} cell(s) failed; see the error column", file=sys.stderr)
    return 0


COMMANDS = {
    "clear": (cmd_clear, "search a general digraph: guard a feedback vertex set, run Plank on the rest"),
    "plank": (cmd_plank, "run Plank on a DAG"),
    "decompose": (cmd_decompose, "split a DAG into B/R/D/P sections"),
    "validate": (cmd_validate, "check that a strategy file clears a graph"),
    "lower-bound": (cmd_lower_bound, "print the step lower bound"),
    "exact": (cmd_exact, "exact search time by exhaustive search (tiny graphs)"),
    "gen": (cmd_gen, "generate a random DAG edge list"),
    "sweep": (cmd_sweep, "run a parameter sweep from a key=value config"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphsearch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", "-i")
        p.add_argument("--output", "-o")
        p.add_argument("--searchers", "-s", type=int)
        p.add_argument("--hubset-k", type=int, default=0)
        p.add_argument("--reverse", action="store_true", help="flip every edge on load")
        p.add_argument("--lcc", action="store_true", help="keep the largest weakly connected component")
        p.add_argument("--seed", type=int, default=0)
        if name == "clear":
            p.add_argument("--plan", help="also write the permanent guard set here")
        if name == "validate":
            p.add_argument("--strategy")
        if name in ("lower-bound", "gen"):
            p.add_argument("--nodes", type=int)
        if name == "exact":
            p.add_argument("--max-t", type=int)
        if name == "gen":
            p.add_argument("--model", choices=("er", "ba"), default="er")
            p.add_argument("--p", type=float)
            p.add_argument("--m-links", type=int)
            p.add_argument("--m0", type=int)
        if name == "sweep":
            p.add_argument("--config")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.hubset_k < 0:
        print("error: --hubset-k must be non-negative", file=sys.stderr)
        return 2
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
