"""Subcase along alpha = beta = 1/2, a01 = 5, b10 = 1, b01 = -1/2, a10 = lambda, and the
lambda where the last infinite-saddle separatrix stops landing on a corner."""

import argparse

import numpy as np

from octothorpe.canonical import CanonicalSystem
from octothorpe.classifier import classify


def subcase(lam, beta=0.5):
    return classify(CanonicalSystem(0.5, beta, lam, 5.0, 1.0, -0.5)).label.name


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()
    for lam in np.linspace(0.05, 4.95, args.points):
        print(f"{lam:7.4f}  {subcase(lam)}")
    lo, hi = 4.95, 4.999
    assert subcase(lo) != subcase(hi)
    while hi - lo > 1e-5:
        mid = 0.5 * (lo + hi)
        if subcase(mid) == subcase(lo):
            lo = mid
        else:
            hi = mid
    print(f"transition {subcase(lo)} -> {subcase(hi)} at lambda = {0.5 * (lo + hi):.5f}")
    beta = 0.55
    print(f"beta = {beta}, lambda = {0.999 * 10 * (1 - beta):.4f}: {subcase(0.999 * 10 * (1 - beta), beta)}")


if __name__ == "__main__":
    main()
