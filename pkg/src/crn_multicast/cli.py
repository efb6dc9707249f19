"""Command-line front end.

Commands:
  example   replay the built-in worked example and verify its outcome
  run       run one seeded scenario and report per-destination results
  sweep     run a Monte Carlo parameter sweep and write CSV files
  plot      render an aggregate CSV to SVG line charts

Exit codes: 0 success, 1 example verification mismatch, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assignment import Scheme
from .config import Config, ConfigError, load_config, sweep_from_config
from .example_case import builtin_fixture, check_fixture
from .experiment import DataFormatError, read_aggregate_csv, run_scenario_sessions, run_sweep, write_sweep_csv
from .plotting import write_charts
from .session import TreeKind, session_to_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crn-multicast",
        description="Monte Carlo simulator for tree-based multicast in cognitive radio networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_example = sub.add_parser("example", help="replay and verify the built-in worked example")
    p_example.add_argument("--fixture", metavar="PATH", help="JSON fixture to replay instead of the built-in one")
    p_example.add_argument("--json", action="store_true", help="emit a machine-readable report")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--seed", type=int, help="base random seed (overrides config)")
    common.add_argument("--trials", type=int, help="trials per sweep value (overrides config)")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    common.add_argument(
        "--scheme", action="append", choices=[s.value for s in Scheme],
        help="channel assignment scheme, repeatable (overrides config)",
    )
    common.add_argument(
        "--tree", action="append", choices=[t.value for t in TreeKind],
        help="tree kind, repeatable (overrides config)",
    )

    p_run = sub.add_parser("run", parents=[common], help="run one seeded scenario")
    p_run.add_argument("--json", action="store_true", help="emit a machine-readable report")

    sub.add_parser("sweep", parents=[common], help="run a parameter sweep and write CSV files")

    p_plot = sub.add_parser("plot", help="render an aggregate CSV to SVG charts")
    p_plot.add_argument("csv", metavar="CSV", help="aggregate CSV produced by the sweep command")
    p_plot.add_argument("--out", metavar="DIR", default=".", help="output directory for the charts")

    return parser


def _config_from_args(args) -> Config:
    overrides = {
        "seed": args.seed,
        "trials": args.trials,
        "out_dir": args.out,
        "schemes": tuple(Scheme(s) for s in args.scheme) if args.scheme else None,
        "trees": tuple(TreeKind(t) for t in args.tree) if args.tree else None,
    }
    return load_config(args.config, overrides)


def cmd_example(args) -> int:
    if args.fixture:
        path = Path(args.fixture)
        if not path.is_file():
            raise ConfigError(f"fixture file not found: {path}")
        try:
            fixture = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    else:
        fixture = builtin_fixture()
    try:
        ok, lines, payload = check_fixture(fixture)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"fixture is not a valid worked-example replay: {exc}") from None
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
        print("result: OK" if ok else "result: MISMATCH")
    return 0 if ok else 1


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    sessions = run_scenario_sessions(cfg.params, cfg.schemes, cfg.trees, cfg.seed)
    if args.json:
        payload = {
            f"{tree.value}/{scheme.value}": {
                "pdr": res.pdr,
                "avg_throughput_bps": res.avg_throughput,
                "total_throughput_bps": res.total_throughput,
                "throughput_bps": {str(k): v for k, v in res.throughput.items()},
            }
            for (tree, scheme), res in sessions.items()
        }
        payload["seed"] = cfg.seed
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"seed {cfg.seed}: {cfg.params.n_nodes} nodes, {cfg.params.n_dest} destinations")
        for (tree, scheme), res in sessions.items():
            delivered = sum(res.delivered.values())
            print(
                f"{tree.value}/{scheme.value}: delivered {delivered}/{len(res.delivered)} "
                f"(pdr {res.pdr:.2f}), avg throughput {res.avg_throughput / 1e6:.4f} Mbps"
            )
            for dest in sorted(res.delivered):
                state = "delivered" if res.delivered[dest] else "missed"
                print(f"  dest {dest}: {state}, {res.throughput[dest] / 1e6:.4f} Mbps")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for (tree, scheme), res in sessions.items():
            path = out / f"session_{tree.value}_{scheme.value}.csv"
            path.write_text(session_to_csv(res), encoding="utf-8", newline="\n")
            print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    spec = sweep_from_config(cfg)
    rows, agg = run_sweep(spec)
    trials_path, agg_path = write_sweep_csv(rows, agg, cfg.out_dir)
    print(f"wrote {trials_path} ({len(rows)} rows)")
    print(f"wrote {agg_path} ({len(agg)} rows)")
    return 0


def cmd_plot(args) -> int:
    path = Path(args.csv)
    if not path.is_file():
        raise ConfigError(f"CSV file not found: {path}")
    rows = read_aggregate_csv(path)
    if not rows:
        raise ConfigError(f"{path}: no aggregate rows to plot")
    for chart in write_charts(rows, args.out):
        print(f"wrote {chart}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"example": cmd_example, "run": cmd_run, "sweep": cmd_sweep, "plot": cmd_plot}
    try:
        return handlers[args.command](args)
    except (ConfigError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
