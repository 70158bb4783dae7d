"""Cell-edge (5th percentile) gains against cell radius and users per sector.

    python scripts/edge_gain_sensitivity.py --drops 300
"""

import argparse
import dataclasses

from cogband.simkit import SimConfig, run_campaign


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--drops", type=int, default=300)
    parser.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--radius", type=float, nargs="+", default=[500.0, 866.0, 1500.0, 3000.0])
    parser.add_argument("--users", type=int, nargs="+", default=[10, 30])
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    print("radius_m users seed dl_edge_gain_pct ul_edge_ratio dl_tv_share ul_tv_share")
    for radius in args.radius:
        for n in args.users:
            for seed in args.seeds:
                cfg = dataclasses.replace(
                    SimConfig(), cell_radius_m=radius, users_per_sector=n, seed=seed, drops=args.drops
                )
                links = run_campaign(cfg, workers=args.workers).summary["links"]
                print(
                    f"{radius:8.0f} {n:5d} {seed:4d} {links['dl']['edge_gain_pct']:16.1f} "
                    f"{links['ul']['gain']['p5']:13.2f} {links['dl']['tv_fraction']:11.3f} "
                    f"{links['ul']['tv_fraction']:11.3f}"
                )


if __name__ == "__main__":
    main()
