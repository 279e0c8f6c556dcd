"""Command-line entry points.

Subcommands: ``train`` (incremental deployment run), ``sweep`` (the four
learning configurations), ``oracle`` (brute-force search on a scenario
file), ``complexity`` (sample-complexity numbers) and ``reward-surface``
(reward landscape as CSV).
"""

import argparse
import csv
import json
import logging
import sys

import numpy as np

from .baselines import exhaustive_search
from .complexity import epsilon_bound, min_iterations, training_length
from .harness import (RunConfig, compare_configurations, run_config_from_dict,
                      run_incremental, write_metrics)
from .mdp import action_set
from .reward import RewardKind, RewardSpec, reward_surface
from .topology import scenario_from_json


def _load_run_config(args) -> RunConfig:
    if args.config is None:
        cfg = RunConfig()
    else:
        try:
            with open(args.config) as f:
                cfg = run_config_from_dict(json.load(f))
        except FileNotFoundError:
            raise UsageError(f"config file not found: {args.config}")
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise UsageError(f"bad config file {args.config}: {e}")
    from dataclasses import replace
    if args.seed is not None:
        cfg = replace(cfg, seeds=tuple(args.seed))
    if args.k_max is not None:
        cfg = replace(cfg, k_max=args.k_max)
    if args.frames is not None:
        cfg = replace(cfg, learning=replace(cfg.learning, training_frames=args.frames))
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


class UsageError(Exception):
    pass


def _cmd_train(args) -> int:
    cfg = _load_run_config(args)
    result = run_incremental(cfg)
    out = cfg.output_dir or "out"
    paths = write_metrics(result.records, out, config=cfg, qtables=result.qtables)
    print(f"wrote {len(result.records)} records to {paths[0]}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_run_config(args)
    result = compare_configurations(cfg)
    out = cfg.output_dir or "out"
    paths = write_metrics(result.records, out, config=cfg)
    print(result.format_table())
    print(f"wrote {len(result.records)} records to {paths[0]}")
    return 0


def _cmd_oracle(args) -> int:
    try:
        with open(args.scenario) as f:
            scenario = scenario_from_json(f.read())
    except FileNotFoundError:
        raise UsageError(f"scenario file not found: {args.scenario}")
    sc = scenario.config
    step = args.coarse_step if args.coarse_step else sc.fbs_step_db
    actions = action_set(sc.fbs_pmin_dbm, sc.fbs_pmax_dbm, step)
    result = exhaustive_search(scenario, actions, max_joint=args.budget)
    text = json.dumps(result.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_complexity(args) -> int:
    t = min_iterations(args.rmax, args.beta, args.eps, args.delta,
                       args.states, args.actions)
    doc = {
        "min_iterations": t,
        "training_frames": training_length(t, args.states, args.actions),
        "epsilon_bound_at_t": epsilon_bound(args.rmax, args.beta, t,
                                            args.states * args.actions, args.delta),
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_reward_surface(args) -> int:
    spec = RewardSpec(kind=RewardKind(args.kind), m=args.m, bias_c=args.bias)
    gamma0 = 2.0 ** args.mue_rate_min - 1.0
    gammak = 2.0 ** args.fue_rate_min - 1.0
    r0_grid = np.linspace(0.0, args.r0_max, args.steps)
    rk_grid = np.linspace(0.0, args.rk_max, args.steps)
    surface = reward_surface(spec, gamma0, gammak, r0_grid, rk_grid,
                             fbs_mue_dist_m=args.distance)
    writer = csv.writer(open(args.out, "w", newline="")) if args.out else csv.writer(sys.stdout)
    writer.writerow(["r0_rate"] + [repr(float(v)) for v in rk_grid])
    for i, r0 in enumerate(r0_grid):
        writer.writerow([repr(float(r0))] + [repr(float(v)) for v in surface[i]])
    if args.out:
        print(f"wrote {args.steps}x{args.steps} surface to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdpa",
        description="Two-tier HetNet power allocation: simulator, learner, baselines.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--config", help="run configuration JSON")
        p.add_argument("--seed", type=int, nargs="+", help="override the seed list")
        p.add_argument("--out", help="output directory")
        p.add_argument("--k-max", type=int, dest="k_max", help="femtocells to deploy")
        p.add_argument("--frames", type=int, help="training frames per femtocell")

    p = sub.add_parser("train", help="run the incremental deployment protocol")
    add_run_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("sweep", help="compare the four learning configurations")
    add_run_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="brute-force search on a scenario JSON")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--budget", type=int, default=10_000_000,
                   help="maximum joint grid points")
    p.add_argument("--coarse-step", type=float, default=None,
                   help="override the power step (dB) to shrink the grid")
    p.add_argument("--out", help="write the result JSON here instead of stdout")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("complexity", help="sample-complexity numbers as JSON")
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--actions", type=int, required=True)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("reward-surface", help="dump a reward landscape as CSV")
    p.add_argument("--kind", default="polynomial",
                   choices=[k.value for k in RewardKind])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--mue-rate-min", type=float, default=4.0, dest="mue_rate_min")
    p.add_argument("--fue-rate-min", type=float, default=0.5, dest="fue_rate_min")
    p.add_argument("--r0-max", type=float, default=8.0, dest="r0_max")
    p.add_argument("--rk-max", type=float, default=4.0, dest="rk_max")
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--distance", type=float, default=None,
                   help="femto-to-MUE distance for the proximity reward")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_reward_surface)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
