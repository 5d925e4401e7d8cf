"""Tabulate the weight-2 curve through the centre of the (2, 3, m) elliptic star.

Columns: m, volume of the pair, volume of the singularity alone.
"""
import argparse

from pairvol.extremal import elliptic_chi, elliptic_weight_two_family
from pairvol.ratcore import fmt_rat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=30)
    args = ap.parse_args()
    print("m,pair_volume,singularity_volume")
    for m in range(7, args.max_m + 1):
        _, vol = elliptic_weight_two_family(m)
        print(f"{m},{fmt_rat(vol)},{fmt_rat(elliptic_chi(m))}")


if __name__ == "__main__":
    main()
