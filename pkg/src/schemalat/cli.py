"""Command-line front end.

Subcommands: ``complete`` (lattice dump or DOT), ``reach`` (full-space DOT
with reachability marking), ``ga`` (one run as CSV) and ``experiment``
(the order/defining-length and crossover-comparison tables).  Exit codes:
0 success, 1 usage or validation error, 2 budget exceeded.
"""

import argparse
import json
import sys

from . import analysis
from .errors import BudgetExceeded, SchemaError
from .ga import GAConfig, run
from .lattice import (
    DEFAULT_FULL_SPACE_BUDGET,
    complete,
    mark_reachability,
    to_dot,
)
from .schema import Alphabet

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; here 2 means budget exceeded.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_word_inputs(parser):
    parser.add_argument("words", nargs="*", help="input words, whitespace separated")
    parser.add_argument("--input", help="file of words (whitespace separated)")
    parser.add_argument("--alphabet", help="explicit alphabet symbols, e.g. 01")


def _read_words(args):
    words = list(args.words)
    if args.input:
        with open(args.input, encoding="utf-8") as handle:
            words.extend(handle.read().split())
    if not words:
        raise SchemaError("no input words; pass them inline or via --input")
    return words


def _alphabet(args):
    return Alphabet(args.alphabet) if args.alphabet else None


def _write_output(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_complete(args):
    lattice = complete(_read_words(args), _alphabet(args))
    if args.format == "dot":
        _write_output(args, to_dot(lattice))
    else:
        _write_output(args, lattice.dump())
    return EXIT_OK


def _cmd_reach(args):
    marking = mark_reachability(
        _read_words(args), _alphabet(args), max_elements=args.budget
    )
    _write_output(args, to_dot(marking.space, marking))
    return EXIT_OK


def _cmd_ga(args):
    config = GAConfig(
        length=args.length,
        population_size=args.pop,
        mutation_rate=args.mutation,
        crossover_method=args.crossover,
        crossover_rate=args.crossover_rate,
        generations=args.cap,
        fitness_function=args.fitness,
        rng_seed=args.seed,
    )
    trace = run(config)
    lines = []

    class _Buffer:
        def write(self, text):
            lines.append(text)

    buffer = _Buffer()
    trace.write_csv(buffer, seed=args.seed)
    _write_output(args, "".join(lines))
    if args.snapshots:
        with open(args.snapshots, "w", encoding="utf-8") as handle:
            trace.write_snapshots(handle)
    print(f"generation_found={trace.generation_found}", file=sys.stderr)
    return EXIT_OK


def _cmd_experiment(args):
    import io

    if args.name == "order-dl":
        config = GAConfig(
            length=args.length if args.length is not None else 64,
            population_size=args.pop if args.pop is not None else 30,
            mutation_rate=args.mutation,
            crossover_method="1-point",
            crossover_rate=args.crossover_rate,
            generations=args.cap,
        )
        sims = args.sims if args.sims is not None else 20
        result = analysis.experiment_order_dl(
            config=config,
            n_sims=sims,
            master_seed=args.seed,
            jobs=args.jobs,
            max_elements=args.budget,
            collect_blocks=bool(args.blocks_json),
        )
        if args.blocks_json:
            with open(args.blocks_json, "w", encoding="utf-8") as handle:
                json.dump(result.block_listings, handle, indent=1)
    else:
        config = GAConfig(
            length=args.length if args.length is not None else 16,
            population_size=args.pop if args.pop is not None else 12,
            mutation_rate=args.mutation,
            crossover_rate=args.crossover_rate,
            generations=args.cap,
        )
        sims = args.sims if args.sims is not None else 100
        methods = (
            [m.strip() for m in args.methods.split(",") if m.strip()]
            if args.methods
            else analysis.FIG_METHODS
        )
        result = analysis.experiment_crossover(
            methods=methods,
            config=config,
            n_sims=sims,
            master_seed=args.seed,
            jobs=args.jobs,
            max_elements=args.budget,
            strict_blends=args.strict_blends,
        )
    buffer = io.StringIO()
    result.write_csv(buffer)
    _write_output(args, buffer.getvalue())
    if result.excluded_runs:
        print(
            f"excluded {len(result.excluded_runs)} run(s) over the element budget",
            file=sys.stderr,
        )
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="schemalat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_complete = sub.add_parser(
        "complete", help="schematic completion of a word set"
    )
    _add_word_inputs(p_complete)
    p_complete.add_argument(
        "--format", choices=("text", "dot"), default="text",
        help="sorted lattice dump (text) or Hasse diagram (dot)",
    )
    p_complete.add_argument("--output", help="output path (default stdout)")
    p_complete.set_defaults(func=_cmd_complete)

    p_reach = sub.add_parser(
        "reach", help="full-space DOT marked sampled / reachable / unreachable"
    )
    _add_word_inputs(p_reach)
    p_reach.add_argument(
        "--budget", type=int, default=DEFAULT_FULL_SPACE_BUDGET,
        help="full-space element budget",
    )
    p_reach.add_argument("--output", help="output path (default stdout)")
    p_reach.set_defaults(func=_cmd_reach)

    p_ga = sub.add_parser("ga", help="run the GA once and write its trace CSV")
    p_ga.add_argument("--length", type=int, required=True)
    p_ga.add_argument("--pop", type=int, required=True)
    p_ga.add_argument("--mutation", type=float, default=0.005)
    p_ga.add_argument("--crossover", default="1-point")
    p_ga.add_argument("--crossover-rate", type=float, default=1.0)
    p_ga.add_argument("--cap", type=int, default=120)
    p_ga.add_argument("--fitness", default="onemax")
    p_ga.add_argument("--seed", type=int, default=0)
    p_ga.add_argument("--snapshots", help="also dump every generation's words")
    p_ga.add_argument("--output", help="output path (default stdout)")
    p_ga.set_defaults(func=_cmd_ga)

    p_exp = sub.add_parser("experiment", help="run an experiment table")
    p_exp.add_argument("name", choices=("order-dl", "crossover"))
    p_exp.add_argument("--sims", type=int, default=None)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--jobs", type=int, default=None)
    p_exp.add_argument("--length", type=int, default=None)
    p_exp.add_argument("--pop", type=int, default=None)
    p_exp.add_argument("--mutation", type=float, default=0.005)
    p_exp.add_argument("--crossover-rate", type=float, default=1.0)
    p_exp.add_argument("--cap", type=int, default=120)
    p_exp.add_argument(
        "--budget", type=int, default=analysis.DEFAULT_ELEMENT_BUDGET,
        help="per-generation completion element budget",
    )
    p_exp.add_argument(
        "--methods", help="comma-separated crossover methods (crossover only)"
    )
    p_exp.add_argument(
        "--strict-blends", action="store_true",
        help="count only blends of two or more distinct blocks",
    )
    p_exp.add_argument(
        "--blocks-json", help="dump per-generation block sets (order-dl only)"
    )
    p_exp.add_argument("--output", help="output path (default stdout)")
    p_exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"schemalat: error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SchemaError, ValueError, OSError) as exc:
        print(f"schemalat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
