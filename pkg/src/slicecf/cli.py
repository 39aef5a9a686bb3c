"""Command-line front end.

Exit codes: 0 success, 2 bad configuration or arguments, 3 infeasible
instance.  Invariant violations are bugs and crash loudly instead.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys

from .config import load_config
from .errors import ConfigError, InfeasibleError
from .harness import SCHEMES, export, import_campaign, run_campaign
from .plotting import PLOT_KINDS, plot_campaign


def _parse_values(raw: str, cast, what: str) -> list:
    try:
        values = [cast(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"could not parse {what} list {raw!r}") from None
    if not values:
        raise ConfigError(f"empty {what} list {raw!r}")
    return values


def _check_drops(drops: int) -> int:
    if drops < 1:
        raise ConfigError("--drops must be at least 1")
    return drops


def _write_campaign(campaign, out_dir: str) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    json_path = export(campaign, "json", os.path.join(out_dir, "campaign.json"))
    csv_path = export(campaign, "csv", os.path.join(out_dir, "campaign.csv"))
    return json_path, csv_path


def _report(campaign) -> None:
    for point in campaign.points:
        label = (f"K={point.num_ues}" if campaign.sweep == "k"
                 else f"mix={point.urllc_fraction:g}")
        for scheme in SCHEMES:
            st = point.stats[scheme]
            median_rt = statistics.median(
                r.runtime_ns for r in point.rows if r.scheme == scheme)
            print(f"{label:>10} {scheme:<9} "
                  f"sum-rate {st['weighted_sum_rate'].mean:.4e} bit/s  "
                  f"eMBB {st['embb_success'].mean:.3f}  "
                  f"URLLC {st['urllc_success'].mean:.3f}  "
                  f"median runtime {median_rt / 1e6:.3f} ms")


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    campaign = run_campaign(cfg, "k", [cfg.num_ues],
                            _check_drops(args.drops), args.seed)
    json_path, csv_path = _write_campaign(campaign, args.out)
    _report(campaign)
    print(f"wrote {json_path} and {csv_path}")
    return 0


def _cmd_sweep_k(args) -> int:
    cfg = load_config(args.config)
    values = _parse_values(args.values, int, "K")
    campaign = run_campaign(cfg, "k", values, _check_drops(args.drops), args.seed)
    json_path, csv_path = _write_campaign(campaign, args.out)
    _report(campaign)
    print(f"wrote {json_path} and {csv_path}")
    return 0


def _cmd_sweep_mix(args) -> int:
    cfg = load_config(args.config)
    values = _parse_values(args.values, float, "mix")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"URLLC fraction {v} outside [0, 1]")
    campaign = run_campaign(cfg, "mix", values, _check_drops(args.drops), args.seed)
    json_path, csv_path = _write_campaign(campaign, args.out)
    _report(campaign)
    print(f"wrote {json_path} and {csv_path}")
    return 0


def _cmd_plot(args) -> int:
    try:
        campaign = import_campaign(args.input)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read campaign file {args.input!r}: {exc}") from None
    plot_campaign(campaign, args.kind, args.out)
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicecf",
        description="Sliced cell-free MIMO uplink: seeded campaigns, "
                    "admission/allocation schemes, exports, and plots.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_common = argparse.ArgumentParser(add_help=False)
    run_common.add_argument("--config", required=True,
                            help="simulation config JSON file")
    run_common.add_argument("--drops", type=int, default=50,
                            help="Monte Carlo drops per sweep point (default 50)")
    run_common.add_argument("--seed", type=int, default=0,
                            help="master seed; drop i uses seed+i (default 0)")
    run_common.add_argument("--out", default="out",
                            help="output directory for campaign.json/.csv")

    p = sub.add_parser("simulate", parents=[run_common],
                       help="run drops at the config's UE count")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep-k", parents=[run_common],
                       help="sweep the number of UEs")
    p.add_argument("--values", default="25,50,75,100",
                   help="comma-separated UE counts (default 25,50,75,100)")
    p.set_defaults(func=_cmd_sweep_k)

    p = sub.add_parser("sweep-mix", parents=[run_common],
                       help="sweep the URLLC share of UEs")
    p.add_argument("--values", default="0.3,0.5,0.7",
                   help="comma-separated URLLC fractions (default 0.3,0.5,0.7)")
    p.set_defaults(func=_cmd_sweep_mix)

    p = sub.add_parser("plot", help="render a chart from a campaign JSON")
    p.add_argument("--kind", required=True, choices=PLOT_KINDS)
    p.add_argument("--in", dest="input", required=True,
                   help="campaign JSON produced by a run command")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
