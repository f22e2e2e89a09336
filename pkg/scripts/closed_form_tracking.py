"""Lambda(k) divided by the closed-form lp -> lq rate, for polynomial and log decay.

Usage: python3 scripts/closed_form_tracking.py [--max-log2-k 20]
"""

import argparse

from orlent.bounds import closed_form_lpq, lambda_bound
from orlent.orlicz import power
from orlent.sequences import LogDecay, Polynomial


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-log2-k", type=int, default=20)
    args = ap.parse_args()
    ks = [2**j for j in range(args.max_log2_k + 1)]
    print("family,p0,q0,theta,k,lambda,closed_form,ratio,band_lo,band_hi")
    for p0, q0 in ((1.0, 2.0), (0.5, 1.0)):
        M1, M2 = power(p0), power(q0)
        for theta in (0.5, 1 / p0 - 1 / q0, 3.0):
            for name, seq in (("poly", Polynomial(theta)), ("logdecay", LogDecay(theta))):
                for k in ks:
                    lam = lambda_bound(seq, M1, M2, k)
                    cf = closed_form_lpq(theta, p0, q0, k)
                    print(f"{name},{p0:g},{q0:g},{theta:g},{k},{lam:.6e},{cf:.6e},{lam / cf:.6e},"
                          f"{2 ** (-4 / p0):g},{2 ** (4 / p0):g}")


if __name__ == "__main__":
    main()
