"""Where orbits of the corruption game end, on a grid over the unit square."""

import argparse
import json

from octothorpe.cli import corruption_report
from octothorpe.replicator import CorruptionPayoffs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=20)
    args = ap.parse_args()
    p = CorruptionPayoffs(W=1, M=2, Mc=1, Mg=1, Mg_prime=0.5, e=3, V_gc=1, V_gnc=2, KP=0.5)
    print(json.dumps(corruption_report(p, args.grid), indent=2))


if __name__ == "__main__":
    main()
