"""
Decision Tree Lab - Command Line Harness (dtlab.py)

Generates instances, runs learners and testers against hidden functions,
computes distances and runs seeded experiment suites.

Capabilities:
1. gen       write a random function file from a generator spec
2. learn     run a learner, print a report, optionally save the hypothesis
3. test      run a tester, print its report
4. distance  disagreement probability of two function files
5. suite     N seeded trials of learn or test with aggregate statistics

Output:
    stdout carries exactly one JSON document (single line unless --pretty).
    Logs, banners and performance metrics go to stderr.

Exit codes:
    0 accept / success, 1 reject / not in class, 2 inconclusive / budget,
    3 usage error

Usage:
    python dtlab.py gen tree-depth:n=64,d=3 --seed 7 --out f.json
    python dtlab.py test depth-df --fn f.json --d 3 --eps 0.25 --seed 1
    python dtlab.py learn exact-dtds --fn tree-depth:n=10,d=3 --d 3 --out h.json
    python dtlab.py distance f.json h.json
    python dtlab.py suite test size-u --fn tree-size:n=16,s=4 --s 4 --reduced-constants --trials 100
    python dtlab.py test size-lifted --fn tree-size:n=64,s=4 --s 4 --reduced-constants depth_cap_factor=32
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from src.config import LOG_LEVEL
from src.errors import DtlabError, EnumerationCapError, MalformedFunctionError
from src.experiments import (
    DECISION_EXIT,
    EXIT_OK,
    EXIT_USAGE,
    LEARNERS,
    TESTERS,
    ExperimentConfig,
    resolve_distribution,
    run_distance,
    run_learn,
    run_suite,
    run_test,
    trial_seeds,
)
from src.fileformats import dumps, function_to_json, load_function, save_function
from src.generators import GENERATORS, generate
from src.reports import Stopwatch

log = logging.getLogger("dtlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with the usage-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ============================================================
# Argument parsing
# ============================================================

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for every random choice")
    p.add_argument("--pretty", action="store_true", help="indented JSON output")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in reports")
    p.add_argument("--verbose", action="store_true", help="banners and performance metrics on stderr")
    p.add_argument("--log-level", default=LOG_LEVEL, help="logging level (default from DTLAB_LOG_LEVEL)")


def _algorithm_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fn", required=True, help="function file or generator spec such as tree-depth:n=64,d=3")
    p.add_argument("--dist", default=None, help="distribution file (default uniform)")
    p.add_argument("--d", type=int, default=None, help="depth bound")
    p.add_argument("--s", type=int, default=None, help="size bound")
    p.add_argument("--k", type=int, default=None, help="junta size for by-learning")
    p.add_argument("--c", type=int, default=None, help="size tester constant (>= 2)")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--learner", default=None, choices=sorted(LEARNERS), help="inner learner for by-learning")
    p.add_argument("--model", default=None, choices=("distfree", "uniform"))
    p.add_argument("--route-samples", type=int, default=None)
    p.add_argument("--route-cutoff", type=int, default=None)
    p.add_argument("--walk-cap", type=int, default=None)
    p.add_argument("--depth-cap-factor", type=int, default=None, help="size tester walk cap factor")
    p.add_argument(
        "--reduced-constants", nargs="?", const="", default=None, metavar="KEY=VALUE,...",
        help="desk-scale size tester constants, optionally overriding depth_cap_factor or width",
    )
    p.add_argument("--budget", type=int, default=None, help="query budget (bb + rex)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtlab", description="Decision tree learners and testers")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a random function")
    gen.add_argument("spec", help=f"generator spec; families: {', '.join(GENERATORS)}")
    gen.add_argument("--out", default=None, help="output file (default stdout)")
    _common(gen)

    learn = sub.add_parser("learn", help="run a learner")
    learn.add_argument("algorithm", choices=sorted(LEARNERS))
    learn.add_argument("--out", default=None, help="hypothesis file")
    _algorithm_params(learn)
    _common(learn)

    test = sub.add_parser("test", help="run a tester")
    test.add_argument("algorithm", choices=TESTERS)
    _algorithm_params(test)
    _common(test)

    distance = sub.add_parser("distance", help="disagreement probability of two functions")
    distance.add_argument("f")
    distance.add_argument("g")
    distance.add_argument("--dist", default=None)
    distance.add_argument("--mode", default="exact", choices=("exact", "sampled"))
    distance.add_argument("--m", type=int, default=None, help="sample count for sampled mode")
    _common(distance)

    suite = sub.add_parser("suite", help="seeded trials with aggregate statistics")
    suite.add_argument("kind", choices=("learn", "test"))
    suite.add_argument("algorithm")
    suite.add_argument("--trials", type=int, default=100)
    suite.add_argument("--workers", type=int, default=1)
    _algorithm_params(suite)
    _common(suite)
    return parser


def _overrides(text: str) -> Dict[str, Any]:
    """Parse KEY=VALUE pairs such as depth_cap_factor=32,width=6; integer values become ints."""
    overrides: Dict[str, Any] = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"Invalid reduced constant: {item}. Expected KEY=VALUE")
        overrides[key.strip()] = int(value) if value.strip().isdigit() else value.strip()
    return overrides


def _params(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ("d", "s", "k", "c", "eps", "delta", "learner", "model", "route_samples", "route_cutoff", "walk_cap",
            "depth_cap_factor")
    params = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if getattr(args, "reduced_constants", None) is not None:
        params["reduced"] = True
        params["reduced_constants"] = _overrides(args.reduced_constants)
    return params


def _config(args: argparse.Namespace, command: str, trials: int = 1, workers: int = 1) -> ExperimentConfig:
    return ExperimentConfig(
        command=command,
        algorithm=args.algorithm,
        fn=args.fn,
        dist=args.dist,
        params=_params(args),
        seed=args.seed,
        budget=args.budget,
        trials=trials,
        workers=workers,
    )


# ============================================================
# Commands
# ============================================================

def _banner(args: argparse.Namespace, title: str) -> None:
    if args.verbose:
        print("\n" + "=" * 80, file=sys.stderr)
        print(title, file=sys.stderr)
        print("=" * 80, file=sys.stderr)


def _metrics(args: argparse.Namespace, rows: List[tuple]) -> None:
    if not args.verbose:
        return
    print(f"\n{'=' * 80}", file=sys.stderr)
    print("Performance Metrics:", file=sys.stderr)
    print(f"{'=' * 80}", file=sys.stderr)
    for label, value in rows:
        print(f"   {label:<22}{value}", file=sys.stderr)
    print(f"{'=' * 80}\n", file=sys.stderr)


def _emit(args: argparse.Namespace, obj: Dict[str, Any]) -> None:
    print(dumps(obj, args.pretty))


def cmd_gen(args: argparse.Namespace) -> int:
    _banner(args, f"Generating {args.spec}")
    gen_seed, _ = trial_seeds(args.seed)
    f = generate(args.spec, np.random.default_rng(gen_seed))
    if args.out:
        save_function(f, args.out, args.pretty)
        _emit(args, {"status": "success", "out": args.out, "n": f.n})
    else:
        _emit(args, function_to_json(f))
    return EXIT_OK


def cmd_learn(args: argparse.Namespace) -> int:
    _banner(args, f"Learning with {args.algorithm}")
    outcome = run_learn(_config(args, "learn"))
    if outcome.hypothesis is not None and args.out:
        save_function(outcome.hypothesis, args.out, args.pretty)
    _emit(args, outcome.to_dict(args.timing))
    _metrics(args, [("Status:", outcome.status), ("bb queries:", outcome.queries["bb"]),
                    ("rex queries:", outcome.queries["rex"]), ("Total Time:", f"{outcome.elapsed_ms:.2f}ms")])
    return outcome.exit_code


def cmd_test(args: argparse.Namespace) -> int:
    _banner(args, f"Testing with {args.algorithm}")
    report = run_test(_config(args, "test"))
    print(report.to_json(args.pretty, args.timing))
    _metrics(args, [("Decision:", report.decision), ("bb queries:", report.queries["bb"]),
                    ("rex queries:", report.queries["rex"]), ("Total Time:", f"{report.elapsed_ms:.2f}ms")])
    return DECISION_EXIT[report.decision]


def cmd_distance(args: argparse.Namespace) -> int:
    f = load_function(args.f)
    g = load_function(args.g)
    value = run_distance(f, g, resolve_distribution(args.dist), args.mode, args.m, args.seed)
    _emit(args, {"distance": value, "mode": args.mode})
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    valid = sorted(LEARNERS) if args.kind == "learn" else list(TESTERS)
    if args.algorithm not in valid:
        raise UsageError(f"Invalid {args.kind} algorithm: {args.algorithm}. Valid choices are: {', '.join(valid)}")
    _banner(args, f"Suite: {args.trials} trials of {args.kind} {args.algorithm}")
    clock = Stopwatch()
    summary = run_suite(_config(args, args.kind, args.trials, args.workers))
    if args.timing:
        summary["elapsed_ms"] = round(clock.ms(), 3)
    _emit(args, summary)
    _metrics(args, [("Trials:", summary["trials"]), ("Accept rate:", summary["accept_rate"]),
                    ("Total Time:", f"{clock.ms():.2f}ms")])
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "learn": cmd_learn,
    "test": cmd_test,
    "distance": cmd_distance,
    "suite": cmd_suite,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, MalformedFunctionError, EnumerationCapError, FileNotFoundError, ValueError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE
    except DtlabError as e:
        log.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
