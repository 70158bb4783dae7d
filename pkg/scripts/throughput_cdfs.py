"""Downlink/uplink throughput CDFs, traditional vs cognitive.

    python scripts/throughput_cdfs.py --drops 1000 --out results/cdfs

Writes the same throughput_cdf.csv / summary.json as ``cogband simulate`` and
prints a percentile table.
"""

import argparse
import dataclasses
from pathlib import Path

from cogband.cli import write_cdf_csv, write_summary_json
from cogband.config import load_config
from cogband.simkit import COGNITIVE, TRADITIONAL, SimConfig, percentile, run_campaign


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--config")
    parser.add_argument("--drops", type=int, default=1000)
    parser.add_argument("--users", type=int, default=30)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="results/cdfs")
    args = parser.parse_args()

    base = load_config(args.config) if args.config else SimConfig()
    config = dataclasses.replace(base, drops=args.drops, users_per_sector=args.users, seed=args.seed)
    result = run_campaign(config, workers=args.workers)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_cdf_csv(result, out / "throughput_cdf.csv")
    write_summary_json(result, out / "summary.json")

    print(f"{'link':4} {'pct':>4} {'traditional':>14} {'cognitive':>14} {'gain':>7}")
    for link in ("dl", "ul"):
        for p in (0.05, 0.10, 0.50, 0.90, 0.95):
            t = percentile(result.series[(link, TRADITIONAL)], p)
            c = percentile(result.series[(link, COGNITIVE)], p)
            print(f"{link:4} {round(p * 100):>4} {t / 1e6:11.3f} Mb {c / 1e6:11.3f} Mb {c / t:6.2f}x")
    for link in ("dl", "ul"):
        print(f"{link}: share of users on TV {result.summary['links'][link]['tv_fraction']:.3f}")


if __name__ == "__main__":
    main()
