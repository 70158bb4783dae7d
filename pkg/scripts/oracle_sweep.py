"""How often the contiguous split misses the exhaustive optimum.

Sweeps users per sector and TV base antenna gain on the uplink, where the
suffix rule is only guaranteed when the size-scaled TV SNR beats the
cellular one.

    python scripts/oracle_sweep.py --trials 200
"""

import argparse
import dataclasses

from cogband.experiments import run_oracle
from cogband.propagation import tv_band
from cogband.simkit import SimConfig


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--users", type=int, nargs="+", default=[4, 8, 12, 16])
    parser.add_argument("--tv-base-gain", type=float, nargs="+", default=[6.0, 17.0])
    parser.add_argument("--cell-radius", type=float, nargs="+", default=[866.0, 2000.0])
    args = parser.parse_args()

    print("link radius_m tv_gain_dbi users greedy_match scan_match contiguous worst_gap")
    for radius in args.cell_radius:
        for gain in args.tv_base_gain:
            config = dataclasses.replace(SimConfig(), cell_radius_m=radius, tv=tv_band(base_peak_gain_dbi=gain))
            for link in ("dl", "ul"):
                for n in args.users:
                    r = run_oracle(link, n, args.trials, args.seed, config).as_dict()
                    print(
                        f"{link:4} {radius:8.0f} {gain:11.1f} {n:5d} {r['match_rate']:12.3f} "
                        f"{r['scan_match_rate']:10.3f} {r['contiguous_optimum_rate']:10.3f} {r['worst_pf_gap']:9.3g}"
                    )


if __name__ == "__main__":
    main()
