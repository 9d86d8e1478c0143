#!/usr/bin/env python3
"""Sweep spherical functions along geodesic rays and emit CSV plot data.

Example:
    python scripts/spherical_profile.py --w 0.5+3i --w 0.5 --tmax 4 --steps 81 > phi.csv
"""

import argparse
import csv
import sys

import numpy as np

from so21 import hyperbolic
from so21.reps import parse_complex


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--w", action="append", required=True,
                        help="exponent, repeatable (e.g. 0.5, 0.5+3i)")
    parser.add_argument("--tmax", type=float, default=4.0)
    parser.add_argument("--steps", type=int, default=81)
    parser.add_argument("--nodes", type=int, default=None)
    args = parser.parse_args()

    ws = [parse_complex(text) for text in args.w]
    ts = np.linspace(0.0, args.tmax, args.steps)
    curves = [hyperbolic.phi_along_ray(w, ts, nodes=args.nodes) for w in ws]

    writer = csv.writer(sys.stdout, lineterminator="\n")
    header = ["t"]
    for text in args.w:
        header += [f"re_phi[{text}]", f"im_phi[{text}]"]
    writer.writerow(header)
    for i, t in enumerate(ts):
        row = [f"{t:.6f}"]
        for curve in curves:
            row += [f"{curve[i].real:.12e}", f"{curve[i].imag:.12e}"]
        writer.writerow(row)


if __name__ == "__main__":
    main()
