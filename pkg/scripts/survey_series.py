"""Survey fundament series of the built-in groups.

Prints, for every built-in group up to a size cutoff, the descending
kernel sizes of the fundament series of its collapse-to-a-point cover,
plus which stages are abelian.

Usage::

    python3 scripts/survey_series.py --max-order 64
"""

from __future__ import annotations

import argparse

from covercalc import fundament_series, terminal_cover
from covercalc.cli import Workspace

BUILTINS = ["C2", "C3", "C4", "V4", "C6", "S3", "C8", "C9", "D4", "Q8",
            "C12", "A4", "C16", "S4", "C32", "A5", "C64"]


def stage_summary(cov) -> str:
    ker = cov.kernel()
    orders = {int(cov.source.element_orders()[x]) for x in ker.elements}
    abelian = all(
        cov.source.mul[a, b] == cov.source.mul[b, a]
        for a in ker.elements
        for b in ker.elements
    )
    kind = "ab" if abelian else "nonab"
    return f"|{ker.order}| {kind} exps {sorted(orders)}"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-order", type=int, default=64)
    args = parser.parse_args()
    ws = Workspace()
    print(f"{'group':>6} {'order':>5}  series sizes        stages")
    for name in BUILTINS:
        g = ws.group(name)
        if g.order > args.max_order:
            continue
        series = fundament_series(terminal_cover(g))
        sizes = [k.order for k in series.kernels]
        stages = "; ".join(stage_summary(c) for c in series.stage_covers)
        print(f"{name:>6} {g.order:>5}  {str(sizes):<19} {stages}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
