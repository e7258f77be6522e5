"""Command line: ``alstm generate|train|evaluate|bench``.

Exit status is 0 on success, 2 for configuration errors and 3 for runtime or
numeric failures.
"""

import argparse
import logging
import os
import sys

from .bench import SUITES, run_bench
from .config import load_config
from .evaluation import format_table
from .exceptions import AlstmError, ConfigError
from .pipeline import run_evaluate, run_generate, run_train
from .serialize import load_model

EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _experiment(args):
    exp = load_config(args.config)
    if args.seed is not None:
        exp = exp.with_seed(args.seed)
    return exp


def _out_dir(args, exp):
    return args.out or exp.output_dir


def cmd_generate(args):
    exp = _experiment(args)
    path, series = run_generate(exp, _out_dir(args, exp))
    print(f"wrote {len(series)} points to {path}")


def cmd_train(args):
    exp = _experiment(args)
    out = _out_dir(args, exp)
    _, history = run_train(exp, out)
    print(f"trained {len(history)} epochs; final training loss {history[-1]:.6e}")
    print(f"model: {os.path.join(out, 'model.alstm')}")


def cmd_evaluate(args):
    exp = _experiment(args)
    out = _out_dir(args, exp)
    model_path = args.model or os.path.join(out, "model.alstm")
    if not os.path.isfile(model_path):
        raise ConfigError(f"model file not found: {model_path}")
    model = load_model(model_path)
    _, rows = run_evaluate(exp, model, out, inverse=args.inverse, split=args.split)
    print(format_table(["metric", "step", "value"], [list(r) for r in rows]))


def cmd_bench(args):
    suite = args.suite or "all"
    if args.config and not args.suite:
        suite = os.path.splitext(os.path.basename(args.config))[0]
    if suite not in SUITES + ("all",):
        raise ConfigError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)} or all")
    out = args.out or os.path.join("runs", "bench", suite)
    _, report = run_bench(suite, out, seed=args.seed or 0, epochs=args.epochs, jobs=args.jobs)
    print(report)


def build_parser():
    parser = argparse.ArgumentParser(prog="alstm", description="Augmented-LSTM forecasting")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="experiment config file")
        p.add_argument("--seed", type=int, default=None, help="override training seed")
        p.add_argument("--out", default=None, help="output directory")
        return p

    common(sub.add_parser("generate", help="write the dataset series as CSV")).set_defaults(func=cmd_generate)
    common(sub.add_parser("train", help="train a model")).set_defaults(func=cmd_train)
    p = common(sub.add_parser("evaluate", help="evaluate a trained model"))
    p.add_argument("--model", default=None, help="model file (default <out>/model.alstm)")
    p.add_argument("--inverse", action="store_true", help="also emit values in original units")
    p.add_argument("--split", choices=("test", "train"), default="test")
    p.set_defaults(func=cmd_evaluate)
    p = common(sub.add_parser("bench", help="reproduce a benchmark suite"), config_required=False)
    p.add_argument("suite", nargs="?", default=None, help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("--epochs", type=int, default=None, help="cap epochs for every run")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker threads")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ConfigError, FileNotFoundError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AlstmError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
