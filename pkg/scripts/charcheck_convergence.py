#!/usr/bin/env python3
"""Convergence study of the character identity under grid refinement.

Prints one line per refinement level with both sides of the identity, their
relative gap, and the off-row mass of the smoothed operator (the quantity
that actually converges; the two sides themselves agree to roundoff).

Example:
    python scripts/charcheck_convergence.py --s i --n 1 --levels 3
"""

import argparse

from so21 import character, equivariant, reps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s", default="i")
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--trunc", type=int, default=16)
    parser.add_argument("--levels", type=int, default=3)
    parser.add_argument("--t0", type=float, default=0.6)
    parser.add_argument("--width", type=float, default=0.3)
    args = parser.parse_args()

    p = reps.SpectralParam.from_s(reps.parse_complex(args.s))
    witness = equivariant.separation_witness(
        args.n, equivariant.BumpProfile(args.t0, args.width))

    grid = character.HaarGrid.default()
    print(f"{'grid':>16} {'lhs (trace)':>22} {'rhs (integral)':>22} "
          f"{'rel_err':>10} {'offrow':>10} {'secs':>6}")
    for _ in range(args.levels):
        res = character.char_identity_check(p, args.n, witness, grid=grid, N=args.trunc)
        label = "x".join(str(v) for v in grid.shape)
        print(f"{label:>16} {res.lhs_trace.real:>22.12f} {res.rhs_integral.real:>22.12f} "
              f"{res.rel_err:>10.1e} {res.offrow_mass:>10.1e} {res.seconds:>6.1f}")
        grid = grid.refine()


if __name__ == "__main__":
    main()
