"""Command-line front end.

Sub-commands:
  test    run repeated unateness trials on one instance
  sweep   run a Cartesian (d, n, epsilon) sweep from a JSON config
  exact   exact unateness facts for a small instance
  gen     write an instance's truth table to a file
  stat    surprise statistic of an instance for a dimension set

Seed precedence: --seed flag, then the UNATE_SEED environment variable,
then 0.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .core import CapacityError
from .exact import surprise_statistic
from .core import TruthTable
from .harness import ExperimentConfig, emit, exact_report, render_csv, render_json, run_trials, sweep
from .instances import materialize, parse_descriptor

ENV_SEED = "UNATE_SEED"


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"bad {ENV_SEED} value {env!r}; expected an integer")
    return 0


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number")


def _parse_dims(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma list of integers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unate", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run repeated unateness trials on one instance")
    p_test.add_argument("--instance", required=True, help="instance descriptor")
    p_test.add_argument("--epsilon", required=True, type=_parse_fraction)
    p_test.add_argument("--trials", type=int, default=1000)
    p_test.add_argument("--seed", type=int, default=None)
    p_test.add_argument("--out", default=None, help="write the report to this path")
    p_test.add_argument("--format", choices=("csv", "json"), default="csv")

    p_sweep = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    p_sweep.add_argument("--config", required=True, help="JSON sweep configuration file")
    p_sweep.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    p_exact = sub.add_parser("exact", help="exact unateness facts for a small instance")
    p_exact.add_argument("--instance", required=True)

    p_gen = sub.add_parser("gen", help="write an instance's truth table to a file")
    p_gen.add_argument("--instance", required=True)
    p_gen.add_argument("--out", required=True)

    p_stat = sub.add_parser("stat", help="surprise statistic for a dimension set")
    p_stat.add_argument("--instance", required=True)
    p_stat.add_argument("--dims", type=_parse_dims, default=(),
                        help="comma list of kept dimensions, e.g. 0,2 (default: empty)")
    return parser


def _cmd_test(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    report = run_trials(args.instance, args.epsilon, args.trials, seed)
    low, high = report.ci
    print(
        f"{report.instance}  eps={report.epsilon}  trials={report.trials}  "
        f"rejections={report.rejections}  rate={report.rejection_rate}  "
        f"ci95=[{low:.4f}, {high:.4f}]  query_mean={report.query_mean}  "
        f"query_max={report.query_max}  seed={report.seed}"
    )
    if args.out:
        emit([report], args.format, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.config, "r", encoding="utf-8") as fp:
        config = ExperimentConfig.from_json(fp.read())
    if args.seed is not None:
        config = ExperimentConfig(
            instance_template=config.instance_template,
            d_values=config.d_values,
            n_values=config.n_values,
            epsilons=config.epsilons,
            trials=config.trials,
            seed=args.seed,
        )
    rows = sweep(config)
    text = render_csv(rows) if args.format == "csv" else render_json(rows)
    if args.out:
        emit(rows, args.format, args.out)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        sys.stdout.write(text)
    failures = [r for r in rows if r.error]
    return 1 if failures else 0


def _cmd_exact(args: argparse.Namespace) -> int:
    facts = exact_report(args.instance)
    print(f"instance: {facts['instance']}")
    print(f"is_unate: {str(facts['is_unate']).lower()}")
    print(f"distance_to_unate: {facts['distance_to_unate']}")
    for dims, value in facts["surprise"].items():
        label = "{}" if not dims else "{" + ",".join(map(str, dims)) + "}"
        print(f"surprise T={label}: {value}")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    f = materialize(args.instance)
    table = TruthTable.from_oracle(f)
    table.save(args.out)
    print(f"wrote {args.out} ({table.domain.size()} values)")
    return 0


def _cmd_stat(args: argparse.Namespace) -> int:
    f = materialize(args.instance)
    table = TruthTable.from_oracle(f)
    value = surprise_statistic(table, args.dims)
    label = "{}" if not args.dims else "{" + ",".join(map(str, args.dims)) + "}"
    print(f"surprise T={label}: {value}")
    return 0


_HANDLERS = {
    "test": _cmd_test,
    "sweep": _cmd_sweep,
    "exact": _cmd_exact,
    "gen": _cmd_gen,
    "stat": _cmd_stat,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
