"""Time bar-complex homology with and without the unit-pivot reduction.

Prints one row per (group, degree): ranks before/after reduction and the
seconds spent by the reduced path and, for small complexes, by a plain SNF
of the unreduced boundary matrices.
"""

import argparse
import time

from schurcone.barhom import bar_complex, homology_group
from schurcone.intmat import snf
from schurcone.library import resolve

GROUPS = ["Z(4)", "S(3)", "D(4)", "Q8", "A4", "Z(2) x D(4)"]


def plain_homology_seconds(cx, k):
    t0 = time.perf_counter()
    snf(cx.boundary[k], transforms=False)
    snf(cx.boundary[k + 1], transforms=False)
    return time.perf_counter() - t0


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--plain-limit", type=int, default=5000, help="skip the unreduced SNF above this rank")
    args = p.parse_args()
    k = args.degree
    print(f"{'group':<14} {'rank':>8} {'residual':>9} {'H_k':<34} {'reduced s':>10} {'plain s':>9}")
    for text in GROUPS:
        g = resolve(text).group
        cx = bar_complex(g, k + 1)
        t0 = time.perf_counter()
        h = homology_group(cx, k)
        dt = time.perf_counter() - t0
        red = cx.light_reduction
        plain = "-"
        if cx.ranks[k + 1] <= args.plain_limit:
            plain = f"{plain_homology_seconds(cx, k):.2f}"
        print(f"{text:<14} {cx.ranks[k]:>8} {red.ranks[k]:>9} {str(h):<34} {dt:>10.2f} {plain:>9}")


if __name__ == "__main__":
    main()
