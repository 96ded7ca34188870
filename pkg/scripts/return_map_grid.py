"""Cycle criterion against return-map detection on the family-4 polycycle grid
(alpha = beta = 1/2, a10 = 1, b01 = -1/2, r = -b10/b01)."""

import argparse
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from octothorpe.canonical import CanonicalSystem
from octothorpe.genericity import cherkas_quantity, limit_cycle_exists, trace_at_origin
from octothorpe.portrait import detect_limit_cycle


def cell(args):
    a01, r = args
    c = CanonicalSystem(0.5, 0.5, 1.0, a01, r / 2, -0.5)
    cycle = detect_limit_cycle(c)
    return (a01, r, trace_at_origin(c) * cherkas_quantity(c), limit_cycle_exists(c),
            None if cycle is None else (cycle.s, cycle.multiplier))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    cells = [(a, r) for a in np.linspace(1.5, 6, args.n) for r in np.linspace(-6, -1.5, args.n)]
    with ProcessPoolExecutor(args.workers) as pool:
        rows = list(pool.map(cell, cells))
    print(f"{'a01':>6} {'r':>6} {'T*K':>9} criterion  detected")
    for a01, r, tk, verdict, found in rows:
        shown = "-" if found is None else f"s={found[0]:.5f} m={found[1]:.4f}"
        flag = "" if verdict == (found is not None) or abs(tk) < 1e-4 else "  MISMATCH"
        print(f"{a01:6.2f} {r:6.2f} {tk:9.2e} {str(verdict):9}  {shown}{flag}")


if __name__ == "__main__":
    main()
