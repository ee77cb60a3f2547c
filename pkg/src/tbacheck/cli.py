"""Command-line front end.

Exit codes: 10 NonEmpty, 11 Empty, 1 error, 2 algorithms disagree,
3 node limit hit.  Everything else on stdout is ``key: value`` lines.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional

from . import dot
from .emptiness import CHECKERS, Verdict
from .generators import FIXTURES, fixture_source, gen_An, gen_fischer
from .graph import GuessingZoneGraph, NodeLimitExceeded, Semantics, ZoneGraph
from .model import ModelError, max_constant, snz_transform
from .oracle import CapExceeded, rg_check
from .syntax import ParseError, load, render

EXIT_NONEMPTY = 10
EXIT_EMPTY = 11
EXIT_ERROR = 1
EXIT_DISAGREE = 2
EXIT_LIMIT = 3

ALGOS = ("optimized", "gzg", "snz", "oracle")


class CliError(Exception):
    pass


def _run(a, algo: str, max_nodes: Optional[int]) -> tuple[Verdict, float]:
    start = time.perf_counter()
    if algo == "oracle":
        verdict = rg_check(a)
    else:
        verdict = CHECKERS[algo](a, max_nodes)
    return verdict, time.perf_counter() - start


def _node_text(a, node) -> str:
    text = f"({node.state}, {node.zone.describe(a.clocks)}"
    if hasattr(node, "guess"):
        text += ", {" + ",".join(a.clock_name(x) for x in sorted(node.guess)) + "}"
    return text + ")"


def _print_path(out, title: str, a, nodes, labels):
    print(f"{title}:", file=out)
    print(f"  {_node_text(a, nodes[0])}", file=out)
    for label, node in zip(labels, nodes[1:]):
        step = "tau" if label is None else (a.transitions[label].label or f"t{label}")
        print(f"  --{step}--> {_node_text(a, node)}", file=out)


def cmd_check(args, out) -> int:
    a = load(args.model)
    verdict, elapsed = _run(a, args.algo, args.max_nodes)
    print(f"VERDICT: {verdict}", file=out)
    print(f"model: {a.name}", file=out)
    print(f"algorithm: {args.algo}", file=out)
    if args.algo != "oracle":
        for k, v in verdict.stats.as_dict().items():
            print(f"{k}: {v}", file=out)
    print(f"time_ms: {elapsed * 1000:.1f}", file=out)
    if args.witness and verdict.witness is not None:
        w = verdict.witness
        print(f"witness_graph: {w.kind}", file=out)
        _print_path(out, "stem", w.automaton, w.stem, w.stem_labels)
        _print_path(out, "cycle", w.automaton, w.cycle, w.cycle_labels)
    return EXIT_NONEMPTY if verdict.nonempty else EXIT_EMPTY


def cmd_compare(args, out) -> int:
    a = load(args.model)
    print(f"model: {a.name}", file=out)
    print(f"{'algorithm':<10} {'stored':>8} {'visited':>8}  verdict", file=out)
    verdicts = {}
    for algo in ("snz", "gzg", "optimized"):
        v, _ = _run(a, algo, args.max_nodes)
        verdicts[algo] = v.nonempty
        print(f"{algo:<10} {v.stats.nodes_stored:>8} {v.stats.nodes_visited:>8}  {v}", file=out)
    if len(set(verdicts.values())) > 1:
        print("DISAGREEMENT: " + ", ".join(f"{k}={'NONEMPTY' if v else 'EMPTY'}"
                                           for k, v in verdicts.items()), file=out)
        return EXIT_DISAGREE
    return 0


def cmd_gen(args, out) -> int:
    if args.family == "fixtures":
        target = Path(args.out or ".")
        target.mkdir(parents=True, exist_ok=True)
        for name in FIXTURES:
            path = target / f"{name}.tba"
            path.write_text(fixture_source(name))
            print(f"wrote: {path}", file=out)
        return 0
    if args.family == "an":
        a = gen_An(args.n if args.n is not None else 2, args.d if args.d is not None else 1)
    else:
        a = gen_fischer(args.n if args.n is not None else 2, args.variant)
    text = render(a)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote: {args.out}", file=out)
    else:
        out.write(text)
    return 0


def cmd_dot(args, out) -> int:
    a = load(args.model)
    text = dot.to_dot(a, args.graph, args.max_nodes)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote: {args.out}", file=out)
    else:
        out.write(text)
    return 0


def cmd_stats(args, out) -> int:
    a = load(args.model)
    print(f"model: {a.name}", file=out)
    print(f"states: {len(a.states)}", file=out)
    print(f"clocks: {a.n_clocks}", file=out)
    print(f"transitions: {len(a.transitions)}", file=out)
    print(f"max_constant: {max_constant(a)}", file=out)
    for key, graph in (
        ("zg_nodes", ZoneGraph(Semantics(a), args.max_nodes)),
        ("gzg_nodes", GuessingZoneGraph(Semantics(a), args.max_nodes)),
        ("snz_zg_nodes", ZoneGraph(Semantics(snz_transform(a)), args.max_nodes)),
    ):
        print(f"{key}: {graph.explore()}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tbacheck", description="Büchi non-emptiness for timed automata")
    sub = p.add_subparsers(dest="command", required=True)

    def limit(sp):
        sp.add_argument("--max-nodes", type=int, default=None, help="abort after storing this many nodes")

    c = sub.add_parser("check", help="decide emptiness of one model")
    c.add_argument("model")
    c.add_argument("--algo", choices=ALGOS, default="optimized")
    c.add_argument("--witness", action="store_true", help="print the symbolic lasso")
    limit(c)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("compare", help="run snz, gzg and optimized side by side")
    c.add_argument("model")
    limit(c)
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("gen", help="write generated models")
    c.add_argument("family", choices=("an", "fischer", "fixtures"))
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--d", type=int, default=None)
    c.add_argument("--variant", choices=("mutex", "liveness"), default="mutex")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("dot", help="export the zone graph or guessing zone graph")
    c.add_argument("model")
    c.add_argument("--graph", choices=("zg", "gzg"), default="zg")
    c.add_argument("--out", default=None)
    limit(c)
    c.set_defaults(func=cmd_dot)

    c = sub.add_parser("stats", help="graph sizes of a model")
    c.add_argument("model")
    limit(c)
    c.set_defaults(func=cmd_stats)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors; 2 is reserved for disagreements here
        return EXIT_ERROR if e.code else 0
    try:
        return args.func(args, out)
    except NodeLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, ModelError, CapExceeded, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
