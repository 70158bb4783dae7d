"""Command-line entry point.

Subcommands: simulate, allocate, pathloss, verify-lemma, oracle. Exit status
is 2 for bad flags or config, 1 when a verification fails.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .allocation import ALLOCATORS
from .config import ConfigError, load_config
from .experiments import run_oracle, verify_lemma
from .netmodel import build_layout, drop_users, group_by_sector
from .propagation import DIRECTIONS, cost231_path_loss_db, hata_path_loss_db
from .simkit import SCENARIOS, CampaignResult, SimConfig, run_campaign

CSV_HEADER = ("link", "scenario", "throughput_bps", "cdf")


class UsageError(Exception):
    pass


def _num(x) -> str:
    # repr round-trips a float exactly (up to 17 significant digits).
    return repr(float(x))


def write_cdf_csv(result: CampaignResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for link in DIRECTIONS:
            for scenario in SCENARIOS:
                s = result.series[(link, scenario)]
                for v, f in zip(s.values, s.fractions):
                    w.writerow((link, scenario, _num(v), _num(f)))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def summary_document(result: CampaignResult) -> dict:
    return _jsonable({"summary": result.summary, "config": result.config.to_dict()})


def write_summary_json(result: CampaignResult, path) -> None:
    Path(path).write_text(json.dumps(summary_document(result), indent=2, sort_keys=True) + "\n")


def _config(args) -> SimConfig:
    config = load_config(args.config) if getattr(args, "config", None) else SimConfig()
    overrides = {}
    for name in ("seed", "drops", "users_per_sector", "allocator"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    try:
        return dataclasses.replace(config, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    config = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_campaign(config, workers=args.workers)
    write_cdf_csv(result, out / "throughput_cdf.csv")
    write_summary_json(result, out / "summary.json")
    links = result.summary["links"]
    print(
        f"{result.summary['drops']} drops, {result.summary['users']} users; "
        f"edge gain dl {links['dl']['edge_gain_pct']:.1f}%, ul {links['ul']['edge_gain_pct']:.1f}%; "
        f"wrote {out}"
    )
    return 0


def cmd_allocate(args) -> int:
    config = _config(args)
    layout = build_layout(config.cell_radius_m, config.rings, config.pattern, config.h_base_m)
    users = drop_users(
        layout, config.users_per_sector, args.drop_seed, config.bands, config.h_mobile_m, config.min_distance_m
    )
    allocate = ALLOCATORS[config.allocator]
    sectors = []
    for sector, members in group_by_sector(users).items():
        scan = ALLOCATORS["prefix_scan"](args.link, members, config.bands, config.budget)
        alloc = allocate(args.link, members, config.bands, config.budget)
        sectors.append(
            {
                "sector": sector,
                "ordering": list(alloc.ordering),
                "pf_by_k": list(scan.pf_by_k),
                "k": alloc.k,
                "tv_set": list(alloc.tv_set),
                "cellular_set": list(alloc.cellular_set),
                "pf_value": alloc.pf_value,
                "rates": alloc.report.as_dict(),
            }
        )
    doc = {"link": args.link, "allocator": config.allocator, "drop_seed": args.drop_seed, "sectors": sectors}
    print(json.dumps(_jsonable(doc), indent=2))
    return 0


def cmd_pathloss(args) -> int:
    fn = hata_path_loss_db if args.model == "hata" else cost231_path_loss_db
    try:
        pl = fn(args.freq_mhz, args.h_base, args.h_mobile, args.d_km)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(_num(pl))
    return 0


def cmd_verify_lemma(args) -> int:
    config = _config(args)
    report = verify_lemma(args.link, args.trials, args.seed, config)
    print(json.dumps(_jsonable(report.as_dict()), indent=2))
    return 0 if report.ok else 1


def cmd_oracle(args) -> int:
    config = _config(args)
    if args.users > 20:
        raise UsageError("--users: exhaustive search is limited to 20 users")
    report = run_oracle(args.link, args.users, args.trials, args.seed, config)
    print(json.dumps(_jsonable(report.as_dict()), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cogband", description="Cellular / TV white-space band allocation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    link = dict(choices=DIRECTIONS, required=True)

    p = sub.add_parser("simulate", help="run a Monte-Carlo campaign and write CDF/summary files")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--drops", type=int)
    p.add_argument("--users-per-sector", dest="users_per_sector", type=int)
    p.add_argument("--out", default=".")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("allocate", help="allocate one drop and print the partition")
    p.add_argument("--config")
    p.add_argument("--drop-seed", type=int, required=True)
    p.add_argument("--link", **link)
    p.add_argument("--allocator", choices=sorted(ALLOCATORS))
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("pathloss", help="print a path loss in dB")
    p.add_argument("--model", choices=("hata", "cost231"), required=True)
    p.add_argument("--freq-mhz", type=float, required=True)
    p.add_argument("--d-km", type=float, required=True)
    p.add_argument("--h-base", type=float, default=30.0)
    p.add_argument("--h-mobile", type=float, default=2.0)
    p.set_defaults(func=cmd_pathloss)

    p = sub.add_parser("verify-lemma", help="random trials of the pairwise exchange inequality")
    p.add_argument("--config")
    p.add_argument("--link", **link)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("oracle", help="first-decrease and prefix scan vs exhaustive search")
    p.add_argument("--config")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--link", **link)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
