"""Certified two-sided intervals for e_k over a geometric k grid, one JSON line per k.

Usage: python3 scripts/sweep_bounds.py --seq explog:1,0.5 --M1 power:1 --M2 power:2 --k 1..4096:x2
"""

import argparse

from orlent.bounds import sandwich_report
from orlent.io import dumps, parse_descriptor, parse_k_range, parse_sequence


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seq", default="logdecay:1")
    ap.add_argument("--M1", default="power:1")
    ap.add_argument("--M2", default="power:2")
    ap.add_argument("--k", default="1..4096:x2")
    args = ap.parse_args()
    seq = parse_sequence(args.seq)
    M1, M2 = parse_descriptor(args.M1, "M1"), parse_descriptor(args.M2, "M2")
    for k in parse_k_range(args.k):
        rep = sandwich_report(seq, M1, M2, k)
        row = rep.to_json()
        row["theta_over_lambda"] = rep.theta / rep.lambda_ if rep.lambda_ else None
        print(dumps(row))


if __name__ == "__main__":
    main()
