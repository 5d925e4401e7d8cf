"""List three-branch orbifold stars with their volume-zero case labels."""
import argparse
import sys

from pairvol.classify0 import vol0_census, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--max-d", type=int, default=6)
    ap.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()
    rows = vol0_census(args.max_m, args.max_n, args.max_d)
    write_csv(rows, ("case_label", "parameters", "volume"), args.out)
    zero = sum(1 for r in rows if r[2] == "0")
    print(f"{len(rows)} stars, {zero} of volume zero", file=sys.stderr)


if __name__ == "__main__":
    main()
