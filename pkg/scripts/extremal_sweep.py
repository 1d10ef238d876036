#!/usr/bin/env python3
"""Sweep the attainable Gini range at fixed Hoover values.

For each h on a grid this prints the half-open interval [h, 2h - h^2) of
Gini values compatible with Hoover = h, then walks alpha through [h, 1)
building the three-group law whose Gini is h + alpha*h - h^2. The last
column is the gap to the open upper bound, which closes as alpha -> 1
but never reaches zero. TSV on stdout so the table can be piped
straight into a plotting tool.
"""

import argparse

from lorenzkit import (
    gini_mean_difference,
    gini_range_given_hoover,
    hoover_mean_deviation,
    three_group,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, nargs="*",
                    default=[0.1, 0.3, 0.5, 0.7, 0.9])
    ap.add_argument("--alpha-points", type=int, default=8,
                    help="alpha grid points per h, spread over [h, 1)")
    args = ap.parse_args()

    print("h\talpha\tgini\thoover\tpredicted_gini\tgap_to_sup")
    for h in args.h:
        lo, hi = gini_range_given_hoover(h)
        print(f"# h = {h:g}: attainable Gini range [{lo:.12g}, {hi:.12g})")
        for i in range(args.alpha_points):
            alpha = h + (1.0 - h) * i / args.alpha_points
            d = three_group(h, alpha)
            g = gini_mean_difference(d)
            hv = hoover_mean_deviation(d)
            predicted = h + alpha * h - h * h
            print(f"{h:g}\t{alpha:.6f}\t{g:.12g}\t{hv:.12g}"
                  f"\t{predicted:.12g}\t{hi - g:.3e}")


if __name__ == "__main__":
    main()
