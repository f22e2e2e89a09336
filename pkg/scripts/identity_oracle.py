"""Brute-force entropy intervals for identity maps on small Orlicz balls.

Usage: python3 scripts/identity_oracle.py [--n 1 2 3] [--k-max 6] [--q1 1] [--q2 1]
"""

import argparse
import time

from orlent.oracle import FiniteDiagonalInstance, oracle_batch
from orlent.orlicz import power


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--q1", type=float, default=1.0)
    ap.add_argument("--q2", type=float, default=1.0)
    ap.add_argument("--delta", type=float)
    args = ap.parse_args()
    M1, M2 = power(args.q1), power(args.q2)
    print("n,k,lower,upper,reference,points,delta,clamped,seconds")
    for n in args.n:
        t0 = time.perf_counter()
        rows = oracle_batch(FiniteDiagonalInstance(M1, M2, (1.0,) * n), range(1, args.k_max + 1),
                            args.delta)
        dt = time.perf_counter() - t0
        for r in rows:
            ref = 2.0 ** ((1 - r.k) / n)
            print(f"{n},{r.k},{r.lower:.5f},{r.upper:.5f},{ref:.5f},{r.packing_points},"
                  f"{r.grid_delta},{r.clamped},{dt:.2f}")


if __name__ == "__main__":
    main()
