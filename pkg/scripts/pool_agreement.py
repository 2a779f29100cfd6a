"""Compare invariant-based decisions against explicit searches.

Builds the pool of fiber products of up to ``--max-factors`` copies of
the split and non-split order-4 covers of C2 (from examples/intro.grp),
then checks every ordered pair twice: the domination decision against a
backtracking epimorphism search, and the isomorphism decision against an
isomorphism search. Reports agreement counts and wall time.

Usage::

    python3 scripts/pool_agreement.py --max-factors 3
"""

from __future__ import annotations

import argparse
import itertools
import time

from covercalc import (
    dominates,
    fiber_product,
    find_epimorphism_over,
    find_isomorphism_over,
    isomorphic_fundamental,
)
from covercalc.cli import parse_workspace


def build_pool(eta0, eta1, max_factors: int):
    base = eta0.target
    pool = []
    for r in range(max_factors + 1):
        for combo in itertools.combinations_with_replacement([eta0, eta1], r):
            pool.append(fiber_product(base, list(combo)).structure_map)
    return pool


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-factors", type=int, default=3)
    parser.add_argument(
        "--workspace", default="examples/intro.grp", help="definition file"
    )
    args = parser.parse_args()
    ws = parse_workspace([args.workspace])
    pool = build_pool(ws.homs["eta0"], ws.homs["eta1"], args.max_factors)
    print(f"pool: {len(pool)} covers, carriers up to order "
          f"{max(p.source.order for p in pool)}")

    t0 = time.perf_counter()
    agree_dom = agree_iso = total = 0
    for tau, tau_prime in itertools.product(pool, repeat=2):
        total += 1
        dec = dominates(tau_prime, tau)
        search = find_epimorphism_over(tau, tau_prime) is not None
        agree_dom += dec == search
        dec_iso = isomorphic_fundamental(tau, tau_prime)
        search_iso = find_isomorphism_over(tau, tau_prime) is not None
        agree_iso += dec_iso == search_iso
    elapsed = time.perf_counter() - t0
    print(f"domination: {agree_dom}/{total} agree")
    print(f"isomorphism: {agree_iso}/{total} agree")
    print(f"elapsed: {elapsed:.2f}s")
    return 0 if agree_dom == total and agree_iso == total else 1


if __name__ == "__main__":
    raise SystemExit(main())
