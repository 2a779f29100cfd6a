"""Tabulate second-cohomology dimensions for built-in groups.

For each built-in group and each prime in ``--primes``, prints the
dimension of H^2 with trivial one-dimensional coefficients, over the
prime field and over the endomorphism field, plus the number of
pairwise non-congruent extensions this predicts (p^dim).

Usage::

    python3 scripts/h2_table.py --primes 2 3
"""

from __future__ import annotations

import argparse

from covercalc import cohom_space, trivial_module
from covercalc.cli import Workspace

BUILTINS = ["C2", "C3", "C4", "V4", "C6", "S3", "C8", "C9", "D4", "Q8", "A4", "S4"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    args = parser.parse_args()
    ws = Workspace()
    print(f"{'group':>6} {'p':>2} {'dim_p':>5} {'dim_F':>5} {'classes':>8}")
    for name in BUILTINS:
        g = ws.group(name)
        for p in args.primes:
            space = cohom_space(g, trivial_module(g, p))
            print(
                f"{name:>6} {p:>2} {space.dim_p:>5} {space.f_dim:>5} "
                f"{p ** space.dim_p:>8}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
